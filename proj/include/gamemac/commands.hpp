#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gamemac/capacity.hpp"
#include "gamemac/channels.hpp"
#include "gamemac/correlations.hpp"
#include "gamemac/games.hpp"
#include "gamemac/infotheory.hpp"
#include "gamemac/io.hpp"
#include "gamemac/sampling.hpp"

namespace gamemac {

/// Invalid user configuration; the message names the offending field.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct EtaGrid {
  static constexpr int kMaxSteps = 100'000;

  double start = 0.0;
  double stop = 1.0;
  int steps = 11;

  /// Parses `a:b:n`.
  static EtaGrid parse(std::string_view text) {
    const auto fields = io::split(text, ':');
    if (fields.size() != 3) throw ConfigError("eta-grid: expected a:b:n, got '" + std::string(text) + "'");
    EtaGrid grid;
    try {
      grid.start = io::parse_double(fields[0]);
      grid.stop = io::parse_double(fields[1]);
      const auto steps = io::parse_integer(fields[2]);
      if (steps < 1 || steps > kMaxSteps) throw ConfigError("eta-grid: step count must lie in [1, 100000]");
      grid.steps = static_cast<int>(steps);
    } catch (const ConfigError&) {
      throw;
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("eta-grid: ") + e.what());
    }
    if (grid.start < 0.0 || grid.start > 1.0 || grid.stop < 0.0 || grid.stop > 1.0) {
      throw ConfigError("eta-grid: endpoints must lie in [0,1]");
    }
    return grid;
  }

  std::vector<double> points() const {
    if (steps == 1) return {start};
    std::vector<double> out(static_cast<std::size_t>(steps));
    for (int i = 0; i < steps; ++i) out[static_cast<std::size_t>(i)] = start + (stop - start) * i / (steps - 1);
    out.back() = stop;
    return out;
  }
};

/// Distance kept from the degenerate endpoint (eta = 1 for Type-I,
/// eta = 0 for Type-II, where f_W = f_L).
inline constexpr double kEtaClamp = 1e-6;

struct RunConfig {
  std::string game = "chsh";
  int channel_type = 2;
  EtaGrid grid;
  std::vector<std::string> resources{"NS-exact"};
  OptimizerConfig optimizer;
  std::string out;  // empty writes to stdout

  ChannelType type() const { return channel_type == 1 ? ChannelType::type_i : ChannelType::type_ii; }

  void validate() const {
    if (channel_type != 1 && channel_type != 2) throw ConfigError("channel-type: must be 1 or 2");
    NonlocalGame g = [&] {
      try {
        return game_by_name(game);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("game: ") + e.what());
      }
    }();
    try {
      optimizer.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("optimizer: ") + e.what());
    }
    if (resources.empty()) throw ConfigError("resources: at least one resource is required");
    for (const auto& r : resources) {
      if (r == "L-exact") {
        const Scenario& s = g.scenario();
        const std::size_t count = local_vertex_count(Scenario{s.parties, s.inputs, s.inputs * s.outputs});
        if (count > optimizer.vertex_cap) {
          throw ConfigError("resources: L-exact for " + game + " needs " +
                            (count == SIZE_MAX ? std::string("more than 2^64") : std::to_string(count)) +
                            " deterministic encoders, above the cap of " + std::to_string(optimizer.vertex_cap) +
                            "; request L-bound instead");
        }
      } else if (r == "L-bound") {
      } else if (r == "Q-lower") {
        if (!(g.scenario() == Scenario{2, 2, 2})) throw ConfigError("resources: Q-lower is only defined for chsh");
      } else if (r == "Q-exact") {
        if (!builtin_perfect_box(g, true)) throw ConfigError("resources: Q-exact needs a game with a built-in quantum box");
      } else if (r == "NS-exact") {
        if (!builtin_perfect_box(g, false)) throw ConfigError("resources: NS-exact needs a game with a built-in box");
      } else if (r.starts_with("vertex-file:")) {
        if (r.size() == 12) throw ConfigError("resources: vertex-file needs a path");
      } else {
        throw ConfigError("resources: unknown resource '" + r + "'");
      }
    }
  }

  /// Grid points with the degenerate endpoint pulled inside; one warning per
  /// clamped point goes to `warnings`.
  std::vector<double> etas(std::ostream& warnings) const {
    auto points = grid.points();
    for (double& eta : points) {
      const double original = eta;
      if (type() == ChannelType::type_i && eta > 1.0 - kEtaClamp) eta = 1.0 - kEtaClamp;
      if (type() == ChannelType::type_ii && eta < kEtaClamp) eta = kEtaClamp;
      if (eta != original) {
        warnings << "warning: eta=" << io::format_double(original) << " is degenerate for a Type-" << (channel_type == 1 ? "I" : "II")
                 << " channel; using " << io::format_double(eta) << "\n";
      }
    }
    return points;
  }
};

// ---------------------------------------------------------------------------
// sweep / vertex-bound

inline constexpr const char* kSweepHeader = "eta,resource,kind,value,diagnostic";

inline void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << kSweepHeader << '\n';
  for (const auto& row : rows) {
    out << io::format_double(row.eta) << ',' << row.resource << ',' << to_string(row.result.kind) << ','
        << io::format_double(row.result.value) << ',' << row.result.diagnostic() << '\n';
  }
}

inline std::vector<SweepRow> run_sweep_rows(const RunConfig& config, std::ostream& warnings) {
  config.validate();
  const auto game = game_by_name(config.game);
  const auto etas = config.etas(warnings);
  return sweep(game, config.type(), etas, config.resources, config.optimizer);
}

inline void run_sweep(const RunConfig& config, std::ostream& csv, std::ostream& warnings) {
  write_sweep_csv(csv, run_sweep_rows(config, warnings));
}

// ---------------------------------------------------------------------------
// verify

struct CheckResult {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool passed() const { return residual <= tolerance; }
};

struct PropositionResiduals {
  double chain_rule = 0.0;        // |I(X;Y) - I(M;Y) - I(X;Y|M)|
  double deterministic = 0.0;     // |I(M;Y) - I(X;Y)| for deterministic encoders
  double win_identity = 0.0;      // |I(X;Y) - (H(Y) - f_L + omega (f_L - f_W))|
  double ceiling_excess = 0.0;    // max(0, rate - (log Delta - f_W))
  double data_processing = 0.0;   // max(0, I(M;Y) - I(X;Y))
  double fast_path = 0.0;         // |sum_rate - I(M;Y) from the joint|
  double noise_spread = 0.0;      // constant-noise deviation of the sampled channels
  std::size_t triples = 0;
};

/// Property residuals over `count` seeded random (pi, encoder, channel)
/// triples for `game`, plus one deterministic encoder per triple.
inline PropositionResiduals proposition_residuals(const NonlocalGame& game, std::size_t count, std::uint64_t seed) {
  const Scenario& s = game.scenario();
  const auto perfect = builtin_perfect_box(game, false);
  sampling::Rng rng(seed);
  PropositionResiduals r;
  constexpr std::size_t M[] = {kMessageAxis};
  constexpr std::size_t X[] = {kInputAxis};
  constexpr std::size_t Y[] = {kOutputAxis};
  for (std::size_t t = 0; t < count; ++t) {
    const auto pi = sampling::random_product_distribution(rng, s.parties, s.inputs);
    const auto channel = sampling::random_depolarizing_channel(rng, game);
    const auto noise = constant_noise_check(channel);
    r.noise_spread = std::max({r.noise_spread, noise.win_spread, noise.lose_spread});
    const double ceiling = rate_ceiling(channel);

    const bool with_box = perfect && (t % 2 == 0);
    const auto mixed = sampling::random_encoder(rng, s, with_box ? &*perfect : nullptr);
    const auto deterministic = sampling::random_deterministic_encoder(rng, s);
    for (const Encoder* encoder : {&mixed, &deterministic}) {
      const auto joint = compose(pi, *encoder, channel);
      const double ixy = mutual_information(joint, X, Y);
      const double imy = mutual_information(joint, M, Y);
      const double ixy_m = conditional_mutual_information(joint, X, Y, M);
      r.chain_rule = std::max(r.chain_rule, std::abs(ixy - imy - ixy_m));
      if (encoder->deterministic()) r.deterministic = std::max(r.deterministic, std::abs(imy - ixy));
      r.win_identity = std::max(r.win_identity, std::abs(ixy - win_weighted_rate(pi, *encoder, channel)));
      r.ceiling_excess = std::max({r.ceiling_excess, imy - ceiling, ixy - ceiling});
      r.data_processing = std::max(r.data_processing, imy - ixy);
      r.fast_path = std::max({r.fast_path, std::abs(sum_rate(pi, *encoder, channel) - imy),
                              std::abs(input_output_information(pi, *encoder, channel) - ixy)});
    }
    ++r.triples;
  }
  return r;
}

struct BoxResiduals {
  std::string label;
  double win_deficit = 0.0;  // max over questions of 1 - P(win | q)
  double signaling = 0.0;
  double normalization = 0.0;
  double uniformity = 0.0;
};

inline BoxResiduals box_residuals(const CorrelationBox& box, const NonlocalGame& game) {
  BoxResiduals r;
  r.label = box.label();
  for (double w : win_probability_by_question(box, game)) r.win_deficit = std::max(r.win_deficit, std::abs(1.0 - w));
  const auto report = validate_box(box);
  r.signaling = report.signaling;
  r.normalization = std::max(report.normalization_error, report.negativity);
  r.uniformity = output_uniformity_error(box);
  return r;
}

struct VerifyOptions {
  std::uint64_t seed = 20240917;
  std::size_t triples = 1000;
  bool inject_fault = false;  // swap in a channel whose rows are not constant-entropy
};

/// Channel whose second winning row is replaced by a point mass, so winning
/// rows no longer share one output entropy.
inline MacChannel faulty_channel(const NonlocalGame& game) {
  const auto clean = depolarizing_mac(game, 0.8, 0.2);
  std::vector<double> matrix;
  for (std::size_t x = 0; x < clean.input_count(); ++x) {
    const auto row = clean.row(x);
    matrix.insert(matrix.end(), row.begin(), row.end());
  }
  std::size_t seen = 0;
  for (std::size_t x = 0; x < clean.input_count(); ++x) {
    if (!clean.input_wins(x) || seen++ == 0) continue;
    const std::size_t width = clean.output_count();
    std::fill(matrix.begin() + static_cast<std::ptrdiff_t>(x * width), matrix.begin() + static_cast<std::ptrdiff_t>((x + 1) * width), 0.0);
    matrix[x * width + clean.input_question(x)] = 1.0;
    break;
  }
  return MacChannel(game, std::move(matrix));
}

inline std::vector<CheckResult> verify_checks(const VerifyOptions& options) {
  std::vector<CheckResult> checks;
  const std::vector<NonlocalGame> games{chsh_game(), magic_square_game(), mpp_game(3)};
  for (std::size_t g = 0; g < games.size(); ++g) {
    const auto& game = games[g];
    const auto r = proposition_residuals(game, options.triples, options.seed + g);
    const std::string tag = " " + game.name();
    checks.push_back({"chain-rule" + tag, r.chain_rule, 1e-10});
    checks.push_back({"deterministic-encoders" + tag, r.deterministic, 1e-10});
    checks.push_back({"win-probability-identity" + tag, r.win_identity, 1e-10});
    checks.push_back({"rate-ceiling" + tag, std::max(0.0, r.ceiling_excess), 1e-9});
    checks.push_back({"data-processing" + tag, std::max(0.0, r.data_processing), 1e-10});
    checks.push_back({"sum-rate-fast-path" + tag, r.fast_path, 1e-10});
    double spread = r.noise_spread;
    if (options.inject_fault && g == 0) {
      const auto noise = constant_noise_check(faulty_channel(game));
      spread = std::max({spread, noise.win_spread, noise.lose_spread});
    }
    checks.push_back({"constant-noise" + tag, spread, 1e-12});
  }

  const std::vector<std::pair<NonlocalGame, CorrelationBox>> boxes{
      {chsh_game(), pr_box()}, {magic_square_game(), magic_square_box()}, {mpp_game(3), mpp_box(3)}};
  for (const auto& [game, box] : boxes) {
    const auto r = box_residuals(box, game);
    const std::string tag = " " + r.label + "/" + game.name();
    checks.push_back({"box-wins" + tag, r.win_deficit, 1e-10});
    checks.push_back({"box-no-signaling" + tag, r.signaling, 1e-10});
    checks.push_back({"box-normalization" + tag, r.normalization, 1e-10});
    checks.push_back({"box-uniform-outputs" + tag, r.uniformity, 1e-10});
    double worst = 0.0;
    for (const auto type : {ChannelType::type_i, ChannelType::type_ii}) {
      for (const double eta : {0.1, 0.5, 0.9}) {
        const auto channel = make_channel(game, type, eta);
        const auto result = pseudo_telepathy_capacity(channel, box, "NS");
        const auto uniform = ProductDistribution::uniform(game.players(), game.scenario().inputs);
        worst = std::max(worst, std::abs(result.value - sum_rate(uniform, e_star(box), channel)));
      }
    }
    checks.push_back({"pseudo-telepathy-capacity" + tag, worst, 1e-9});
  }
  return checks;
}

/// Prints one line per check; returns true iff all pass.
inline bool run_verify(const VerifyOptions& options, std::ostream& report) {
  const auto checks = verify_checks(options);
  std::size_t width = 0;
  for (const auto& c : checks) width = std::max(width, c.name.size());
  bool all = true;
  report << "seed " << options.seed << ", " << options.triples << " random triples per game\n";
  for (const auto& c : checks) {
    all = all && c.passed();
    report << (c.passed() ? "PASS  " : "FAIL  ") << std::left << std::setw(static_cast<int>(width)) << c.name
           << "  residual " << io::format_double(c.residual, 3) << "  tolerance " << io::format_double(c.tolerance, 3) << '\n';
  }
  report << (all ? "all checks passed\n" : "some checks FAILED\n");
  return all;
}

// ---------------------------------------------------------------------------
// table

struct TableEntry {
  std::string game;
  std::string quantity;
  double reference;
  double computed;
};

/// The (eta_w, eta_l) = (1, 0) comparison table.
inline std::vector<TableEntry> comparison_table(const OptimizerConfig& cfg) {
  std::vector<TableEntry> rows;
  const auto chsh = chsh_game();
  const auto chsh_channel = type_ii(chsh, 1.0);
  rows.push_back({"chsh", "L-exact", 1.44, classical_capacity_exact(chsh_channel, cfg).value});
  rows.push_back({"chsh", "L-bound", 1.63, classical_upper_bound(chsh_channel, bruteforce_classical_game_value(chsh).value(), cfg).value});

  const auto ms = magic_square_game();
  const auto ms_channel = type_ii(ms, 1.0);
  rows.push_back({"magic-square", "L-bound", 2.93, classical_upper_bound(ms_channel, bruteforce_classical_game_value(ms).value(), cfg).value});
  rows.push_back({"magic-square", "Q-exact", 3.17, pseudo_telepathy_capacity(ms_channel, magic_square_box(), "Q").value});

  const auto mpp = mpp_game(3);
  const auto mpp_channel = type_ii(mpp, 1.0);
  rows.push_back({"mpp:3", "L-bound", 2.72, classical_upper_bound(mpp_channel, bruteforce_classical_game_value(mpp).value(), cfg).value});
  rows.push_back({"mpp:3", "Q-exact", 3.00, pseudo_telepathy_capacity(mpp_channel, mpp_box(3), "Q").value});
  return rows;
}

inline void run_table(const OptimizerConfig& cfg, std::ostream& out) {
  const auto rows = comparison_table(cfg);
  out << "channel (eta_w, eta_l) = (1, 0)\n";
  out << std::left << std::setw(14) << "game" << std::setw(10) << "quantity" << std::setw(12) << "computed" << std::setw(11)
      << "reference" << "delta\n";
  for (const auto& r : rows) {
    out << std::left << std::setw(14) << r.game << std::setw(10) << r.quantity << std::setw(12)
        << io::format_double(r.computed, 6) << std::setw(11) << io::format_double(r.reference, 3)
        << io::format_double(r.computed - r.reference, 3) << '\n';
  }
}

// ---------------------------------------------------------------------------
// game-value, box-export

inline void run_game_value(const std::string& name, std::ostream& out, std::size_t cap = kDefaultVertexCap) {
  const auto game = game_by_name(name);
  const auto value = bruteforce_classical_game_value(game, cap);
  out << "game " << game.name() << '\n';
  out << "omega_L " << io::format_double(value.value()) << " (" << value.winning_questions << "/" << value.questions << ")\n";
  if (name.starts_with("mpp:")) out << "closed form " << io::format_double(mpp_classical_value(game.players())) << '\n';
  out << "strategy vertex " << value.vertex << '\n';
  for (std::size_t k = 0; k < value.strategy.size(); ++k) {
    out << "  player " << k << ":";
    for (std::size_t q = 0; q < value.strategy[k].size(); ++q) out << " q" << q << "->" << value.strategy[k][q];
    out << '\n';
  }
}

/// Boxes by name: pr, tsirelson, magic-square, mpp:<n>, local:<game>.
inline std::vector<CorrelationBox> named_boxes(const std::string& name, std::size_t cap = kDefaultVertexCap) {
  if (name == "pr") return {pr_box()};
  if (name == "tsirelson") return {tsirelson_box()};
  if (name == "magic-square") return {magic_square_box()};
  if (name.starts_with("mpp:")) return {mpp_box(game_by_name(name).players())};
  if (name.starts_with("local:")) {
    const auto vertices = local_deterministic_boxes(game_by_name(name.substr(6)).scenario(), cap);
    std::vector<CorrelationBox> out;
    vertices.for_each([&](std::size_t, CorrelationBox box) { out.push_back(std::move(box)); });
    return out;
  }
  throw ConfigError("box: unknown box '" + name + "' (pr, tsirelson, magic-square, mpp:<n>, local:<game>)");
}

inline void run_box_export(const std::string& name, std::ostream& out) {
  for (const auto& box : named_boxes(name)) write_box_csv(out, box);
}

}  // namespace gamemac
