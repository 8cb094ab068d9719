#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace gamemac::quantum {

using Complex = std::complex<double>;

/// Dense square complex matrix, row-major.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t dim) : dim_(dim), data_(dim * dim) {}

  /// Rows listed top to bottom, multiplied by `scale`.
  Matrix(std::initializer_list<std::initializer_list<Complex>> rows, double scale = 1.0) : dim_(rows.size()) {
    data_.reserve(dim_ * dim_);
    for (const auto& row : rows) {
      if (row.size() != dim_) throw std::invalid_argument("matrix rows must all have length " + std::to_string(dim_));
      for (const auto& entry : row) data_.push_back(entry * scale);
    }
  }

  static Matrix identity(std::size_t dim) {
    Matrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t dim() const { return dim_; }
  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * dim_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * dim_ + c]; }

  Matrix adjoint() const {
    Matrix out(dim_);
    for (std::size_t r = 0; r < dim_; ++r)
      for (std::size_t c = 0; c < dim_; ++c) out(c, r) = std::conj((*this)(r, c));
    return out;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.dim_ != b.dim_) throw std::invalid_argument("matrix product dimension mismatch");
    Matrix out(a.dim_);
    for (std::size_t r = 0; r < a.dim_; ++r)
      for (std::size_t k = 0; k < a.dim_; ++k) {
        const Complex lhs = a(r, k);
        if (lhs == Complex{}) continue;
        for (std::size_t c = 0; c < a.dim_; ++c) out(r, c) += lhs * b(k, c);
      }
    return out;
  }

  friend Matrix operator+(const Matrix& a, const Matrix& b) {
    if (a.dim_ != b.dim_) throw std::invalid_argument("matrix sum dimension mismatch");
    Matrix out(a.dim_);
    for (std::size_t i = 0; i < a.data_.size(); ++i) out.data_[i] = a.data_[i] + b.data_[i];
    return out;
  }

  friend Matrix operator*(Complex s, const Matrix& m) {
    Matrix out = m;
    for (auto& v : out.data_) v *= s;
    return out;
  }

  /// Largest elementwise deviation of M M^dagger from the identity.
  double unitarity_error() const {
    const Matrix product = (*this) * adjoint();
    double worst = 0.0;
    for (std::size_t r = 0; r < dim_; ++r)
      for (std::size_t c = 0; c < dim_; ++c)
        worst = std::max(worst, std::abs(product(r, c) - (r == c ? Complex{1.0} : Complex{})));
    return worst;
  }

  double hermiticity_error() const {
    double worst = 0.0;
    for (std::size_t r = 0; r < dim_; ++r)
      for (std::size_t c = 0; c < dim_; ++c) worst = std::max(worst, std::abs((*this)(r, c) - std::conj((*this)(c, r))));
    return worst;
  }

  bool is_unitary(double tolerance = 1e-10) const { return unitarity_error() < tolerance; }
  bool is_hermitian(double tolerance = 1e-12) const { return hermiticity_error() < tolerance; }

 private:
  std::size_t dim_ = 0;
  std::vector<Complex> data_;
};

inline Matrix pauli_x() { return Matrix{{0.0, 1.0}, {1.0, 0.0}}; }
inline Matrix pauli_z() { return Matrix{{1.0, 0.0}, {0.0, -1.0}}; }
inline Matrix hadamard() { return Matrix({{1.0, 1.0}, {1.0, -1.0}}, 1.0 / std::sqrt(2.0)); }

/// |0> -> |0>, |1> -> e^{i phase}|1>.
inline Matrix phase_gate(double phase) { return Matrix{{1.0, 0.0}, {0.0, std::polar(1.0, phase)}}; }

/// Pure state on `qubits` qubits. Qubit 0 is the most significant bit of the
/// basis index.
class StateVector {
 public:
  static constexpr double kNormTolerance = 1e-12;

  explicit StateVector(std::vector<Complex> amplitudes) : amplitudes_(std::move(amplitudes)) {
    const std::size_t dim = amplitudes_.size();
    if (dim < 2 || (dim & (dim - 1)) != 0) {
      throw std::invalid_argument("state dimension must be a power of two >= 2, got " + std::to_string(dim));
    }
    while ((std::size_t{1} << qubits_) < dim) ++qubits_;
    if (std::abs(norm_squared() - 1.0) > kNormTolerance) {
      throw std::invalid_argument("state is not normalized: squared norm " + std::to_string(norm_squared()));
    }
  }

  static StateVector basis(int qubits, std::size_t index) {
    std::vector<Complex> amps(std::size_t{1} << qubits);
    amps.at(index) = 1.0;
    return StateVector(std::move(amps));
  }

  int qubit_count() const { return qubits_; }
  std::size_t dimension() const { return amplitudes_.size(); }
  std::span<const Complex> amplitudes() const { return amplitudes_; }
  Complex amplitude(std::size_t index) const { return amplitudes_[index]; }

  double norm_squared() const {
    return std::accumulate(amplitudes_.begin(), amplitudes_.end(), 0.0,
                           [](double acc, const Complex& a) { return acc + std::norm(a); });
  }

 private:
  std::vector<Complex> amplitudes_;
  int qubits_ = 0;
};

/// Kronecker product; `a` supplies the high-order index bits.
inline StateVector tensor(const StateVector& a, const StateVector& b) {
  std::vector<Complex> out(a.dimension() * b.dimension());
  for (std::size_t i = 0; i < a.dimension(); ++i)
    for (std::size_t j = 0; j < b.dimension(); ++j) out[i * b.dimension() + j] = a.amplitude(i) * b.amplitude(j);
  return StateVector(std::move(out));
}

inline Matrix tensor(const Matrix& a, const Matrix& b) {
  const std::size_t db = b.dim();
  Matrix out(a.dim() * db);
  for (std::size_t ra = 0; ra < a.dim(); ++ra)
    for (std::size_t ca = 0; ca < a.dim(); ++ca)
      for (std::size_t rb = 0; rb < db; ++rb)
        for (std::size_t cb = 0; cb < db; ++cb) out(ra * db + rb, ca * db + cb) = a(ra, ca) * b(rb, cb);
  return out;
}

/// Applies I (x) u (x) I where u acts on the contiguous qubit block starting at
/// `first_qubit`.
inline StateVector apply_local_unitary(const StateVector& state, const Matrix& u, int first_qubit) {
  std::size_t block_qubits = 0;
  while ((std::size_t{1} << block_qubits) < u.dim()) ++block_qubits;
  if (u.dim() < 2 || (std::size_t{1} << block_qubits) != u.dim()) {
    throw std::invalid_argument("unitary dimension must be a power of two, got " + std::to_string(u.dim()));
  }
  const int n = state.qubit_count();
  if (first_qubit < 0 || first_qubit + static_cast<int>(block_qubits) > n) {
    throw std::invalid_argument("unitary on qubits [" + std::to_string(first_qubit) + ", " +
                                std::to_string(first_qubit + static_cast<int>(block_qubits)) + ") exceeds a " +
                                std::to_string(n) + "-qubit state");
  }
  const int low_bits = n - first_qubit - static_cast<int>(block_qubits);
  const std::size_t low_dim = std::size_t{1} << low_bits;
  const std::size_t block_dim = u.dim();
  const std::size_t high_dim = state.dimension() / (block_dim * low_dim);

  std::vector<Complex> out(state.dimension());
  for (std::size_t high = 0; high < high_dim; ++high)
    for (std::size_t low = 0; low < low_dim; ++low)
      for (std::size_t r = 0; r < block_dim; ++r) {
        Complex acc{};
        for (std::size_t c = 0; c < block_dim; ++c) {
          acc += u(r, c) * state.amplitude((high * block_dim + c) * low_dim + low);
        }
        out[(high * block_dim + r) * low_dim + low] = acc;
      }
  return StateVector(std::move(out));
}

/// Born probabilities of a computational-basis measurement where each player
/// owns a contiguous block of qubits, listed in order. The outcome of player k
/// is the block's bits read high to low, and the joint index packs the players
/// with player 0 most significant, which coincides with the basis index.
struct OutcomeTable {
  std::vector<int> block_qubits;
  std::vector<double> probabilities;

  int player_outcome(std::size_t joint, int player) const {
    int shift = 0;
    for (std::size_t k = static_cast<std::size_t>(player) + 1; k < block_qubits.size(); ++k) shift += block_qubits[k];
    return static_cast<int>((joint >> shift) & ((std::size_t{1} << block_qubits[static_cast<std::size_t>(player)]) - 1));
  }
};

inline OutcomeTable measurement_distribution(const StateVector& state, std::span<const int> block_qubits) {
  int total = 0;
  for (int b : block_qubits) {
    if (b <= 0) throw std::invalid_argument("measurement blocks must be nonempty");
    total += b;
  }
  if (total != state.qubit_count()) {
    throw std::invalid_argument("measurement blocks cover " + std::to_string(total) + " of " +
                                std::to_string(state.qubit_count()) + " qubits");
  }
  OutcomeTable table{std::vector<int>(block_qubits.begin(), block_qubits.end()), std::vector<double>(state.dimension())};
  for (std::size_t i = 0; i < state.dimension(); ++i) table.probabilities[i] = std::norm(state.amplitude(i));
  return table;
}

/// Joint outcome distribution of measuring two +/-1-valued observables on the
/// two qubits of `state`. Eigenvalue +1 is outcome 0 and -1 is outcome 1;
/// index is a * 2 + b.
inline std::array<double, 4> projective_binary_measurement(const StateVector& state, const Matrix& obs_a,
                                                          const Matrix& obs_b) {
  if (state.qubit_count() != 2) throw std::invalid_argument("binary measurement expects a two-qubit state");
  for (const Matrix* obs : {&obs_a, &obs_b}) {
    if (obs->dim() != 2) throw std::invalid_argument("observables must be 2x2");
    if (!obs->is_hermitian()) throw std::invalid_argument("observable is not Hermitian");
    const double involution = ((*obs) * (*obs)).unitarity_error();
    if (involution > 1e-10) throw std::invalid_argument("observable eigenvalues are not +/-1");
  }
  const Matrix id = Matrix::identity(2);
  const auto projector = [&](const Matrix& obs, int outcome) {
    return Complex{0.5} * (outcome == 0 ? id + obs : id + Complex{-1.0} * obs);
  };
  std::array<double, 4> probs{};
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      const Matrix joint = tensor(projector(obs_a, a), projector(obs_b, b));
      Complex expectation{};
      for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 4; ++c)
          expectation += std::conj(state.amplitude(r)) * joint(r, c) * state.amplitude(c);
      probs[static_cast<std::size_t>(a * 2 + b)] = expectation.real();
    }
  return probs;
}

}  // namespace gamemac::quantum
