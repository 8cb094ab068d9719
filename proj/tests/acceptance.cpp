// Acceptance suite: one PASS/FAIL line per criterion, clause details indented
// underneath. `--criterion N` runs a single criterion (used by ctest).
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gamemac/commands.hpp"

using namespace gamemac;

namespace {

struct Clause {
  std::string text;
  bool passed;
};

struct Outcome {
  std::vector<Clause> clauses;
  bool passed() const {
    for (const auto& c : clauses)
      if (!c.passed) return false;
    return !clauses.empty();
  }
  void add(bool ok, std::string text) { clauses.push_back({std::move(text), ok}); }
};

std::string fmt(double v, int digits = 6) { return io::format_double(v, digits); }

std::vector<double> eleven_point_grid(ChannelType type) {
  RunConfig c;
  c.channel_type = type == ChannelType::type_i ? 1 : 2;
  c.grid = EtaGrid::parse("0:1:11");
  std::ostringstream ignored;
  return c.etas(ignored);
}

// 1. Proposition identities on random triples.
Outcome criterion_1() {
  Outcome out;
  for (const auto& game : {chsh_game(), magic_square_game(), mpp_game(3)}) {
    const auto r = proposition_residuals(game, 1000, 1);
    const std::string tag = game.name() + " (" + std::to_string(r.triples) + " triples)";
    out.add(r.chain_rule < 1e-10, "chain rule " + tag + ": max residual " + fmt(r.chain_rule, 3));
    out.add(r.deterministic < 1e-10, "deterministic I(M;Y)=I(X;Y) " + tag + ": max residual " + fmt(r.deterministic, 3));
    out.add(r.win_identity < 1e-10, "H(Y)-f_L+omega(f_L-f_W) identity " + tag + ": max residual " + fmt(r.win_identity, 3));
    out.add(r.ceiling_excess <= 1e-9, "log Delta - f_W ceiling " + tag + ": max excess " + fmt(r.ceiling_excess, 3));
  }
  return out;
}

// 2. Pseudo-telepathy boxes.
Outcome criterion_2() {
  Outcome out;
  const std::vector<std::pair<NonlocalGame, CorrelationBox>> pairs{
      {chsh_game(), pr_box()}, {magic_square_game(), magic_square_box()}, {mpp_game(3), mpp_box(3)}};
  for (const auto& [game, box] : pairs) {
    const auto r = box_residuals(box, game);
    const std::string tag = r.label + "/" + game.name();
    out.add(r.win_deficit < 1e-10, tag + " wins every question: max deficit " + fmt(r.win_deficit, 3));
    out.add(r.signaling < 1e-10, tag + " no-signaling: max deviation " + fmt(r.signaling, 3));
    out.add(r.uniformity < 1e-10, tag + " uniform output marginals: max deviation " + fmt(r.uniformity, 3));
  }
  return out;
}

// 3. Closed-form capacities on an 11-point grid.
Outcome criterion_3() {
  Outcome out;
  struct Case {
    NonlocalGame game;
    CorrelationBox box;
    std::string resource;
    double log_delta;
  };
  const std::vector<Case> cases{{chsh_game(), pr_box(), "NS", 2.0},
                                {magic_square_game(), magic_square_box(), "Q", std::log2(9.0)},
                                {mpp_game(3), mpp_box(3), "Q", 3.0}};
  for (const auto& c : cases) {
    const std::size_t delta = c.game.scenario().input_tuples();
    const auto uniform = ProductDistribution::uniform(c.game.players(), c.game.scenario().inputs);
    const auto encoder = e_star(c.box);
    for (const auto type : {ChannelType::type_i, ChannelType::type_ii}) {
      double closed_err = 0.0;
      double direct_err = 0.0;
      for (double eta : eleven_point_grid(type)) {
        const auto channel = make_channel(c.game, type, eta);
        const double expected = type == ChannelType::type_i ? c.log_delta : c.log_delta - noise_entropy(delta, eta);
        const double value = pseudo_telepathy_capacity(channel, c.box, c.resource).value;
        closed_err = std::max(closed_err, std::abs(value - expected));
        direct_err = std::max(direct_err, std::abs(value - sum_rate(uniform, encoder, channel)));
      }
      const std::string tag = c.game.name() + " " + c.resource + (type == ChannelType::type_i ? " Type-I" : " Type-II");
      out.add(closed_err < 1e-9 && direct_err < 1e-9,
              tag + ": closed-form error " + fmt(closed_err, 3) + ", direct sum-rate error " + fmt(direct_err, 3));
    }
  }
  return out;
}

// 4. Comparison table for the (1, 0) channels.
Outcome criterion_4() {
  Outcome out;
  const OptimizerConfig cfg;
  const auto start = std::chrono::steady_clock::now();
  const auto exact = classical_capacity_exact(type_ii(chsh_game(), 1.0), cfg);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out.add(std::abs(exact.value - 1.44) <= 0.01, "chsh L-exact " + fmt(exact.value) + " vs 1.44");
  out.add(seconds < 60.0, "chsh L-exact runtime " + fmt(seconds, 3) + " s (limit 60 s)");
  for (const auto& row : comparison_table(cfg)) {
    if (row.quantity != "L-bound") continue;
    out.add(std::abs(row.computed - row.reference) <= 0.01,
            row.game + " L-bound " + fmt(row.computed) + " vs " + fmt(row.reference, 3));
  }
  return out;
}

// 5. Classical game values by brute force.
Outcome criterion_5() {
  Outcome out;
  const auto chsh = bruteforce_classical_game_value(chsh_game());
  out.add(chsh.winning_questions * 4 == chsh.questions * 3,
          "chsh " + std::to_string(chsh.winning_questions) + "/" + std::to_string(chsh.questions) + " = 3/4");
  const auto ms = bruteforce_classical_game_value(magic_square_game());
  out.add(ms.winning_questions * 9 == ms.questions * 8,
          "magic-square " + std::to_string(ms.winning_questions) + "/" + std::to_string(ms.questions) +
              " = 8/9, r_max = " + std::to_string(ms.winning_questions));
  const auto mpp = bruteforce_classical_game_value(mpp_game(3));
  out.add(mpp.winning_questions * 8 == mpp.questions * 7 && mpp.value() == mpp_classical_value(3),
          "mpp:3 " + std::to_string(mpp.winning_questions) + "/" + std::to_string(mpp.questions) +
              " = 7/8 = 3/4 + 2^-3 (closed form " + fmt(mpp_classical_value(3)) + ")");
  return out;
}

// 6. Curve shapes.
Outcome criterion_6() {
  Outcome out;
  const OptimizerConfig cfg;
  const auto chsh = chsh_game();
  const auto etas = eleven_point_grid(ChannelType::type_ii);

  std::vector<double> ns, q, l;
  bool ordering = true;
  bool margin = true;
  double worst_margin = 1e300;
  std::ostringstream margins;
  for (double eta : etas) {
    const auto channel = type_ii(chsh, eta);
    const double ns_value = pseudo_telepathy_capacity(channel, pr_box(), "NS").value;
    const auto q_result = quantum_lower_bound_chsh(channel, cfg);
    const double det = best_deterministic_rate_at(channel, ProductDistribution(2, 2, *q_result.argmax_pi)).value;
    const double l_value = classical_capacity_exact(channel, cfg).value;
    ns.push_back(ns_value);
    q.push_back(q_result.value);
    l.push_back(l_value);
    ordering = ordering && ns_value >= q_result.value - 1e-9 && q_result.value >= det - 1e-9;
    if (eta >= 0.5 - 1e-12) {
      const double gap = q_result.value - l_value;
      worst_margin = std::min(worst_margin, gap);
      margin = margin && gap > 0.05;
      margins << " eta=" << fmt(eta, 3) << ":" << fmt(gap, 4);
    }
  }
  out.add(ordering, "chsh Type-II NS >= Q-lower >= best deterministic at Q-lower's pi on all 11 points");
  out.add(margin, "chsh Type-II Q-lower - L-exact > 0.05 for eta in [0.5,1]: worst margin " + fmt(worst_margin, 4) +
                      " (per eta:" + margins.str() + ")");

  auto nondecreasing = [](const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i)
      if (v[i] < v[i - 1] - 1e-9) return false;
    return true;
  };
  out.add(nondecreasing(ns) && nondecreasing(q) && nondecreasing(l), "chsh Type-II NS, Q-lower and L-exact nondecreasing in eta");

  std::vector<CorrelationBox> locals;
  local_deterministic_boxes(chsh.scenario()).for_each([&](std::size_t, CorrelationBox b) { locals.push_back(std::move(b)); });
  const std::string path = "acceptance_local_vertices.csv";
  {
    std::ofstream file(path);
    for (const auto& b : locals) write_box_csv(file, b);
  }
  bool file_order = true;
  for (std::size_t i = 0; i < etas.size(); i += 5) {
    const auto channel = type_ii(chsh, etas[i]);
    file_order = file_order && vertex_file_bound(channel, path, cfg, "L").value <= l[i] + 1e-6;
  }
  out.add(file_order, "vertex file of local (2,2,2) vertices stays below L-exact");

  double spread = 0.0;
  const std::vector<std::pair<NonlocalGame, CorrelationBox>> perfect{
      {chsh, pr_box()}, {magic_square_game(), magic_square_box()}, {mpp_game(3), mpp_box(3)}};
  for (const auto& [game, box] : perfect) {
    double lo = 1e300, hi = -1e300;
    for (double eta : eleven_point_grid(ChannelType::type_i)) {
      const double v = pseudo_telepathy_capacity(type_i(game, eta), box, "Q").value;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    spread = std::max(spread, hi - lo);
  }
  out.add(spread < 1e-12, "Type-I pseudo-telepathy capacities constant in eta: max spread " + fmt(spread, 3));
  return out;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

// 7. Byte-identical sweeps.
Outcome criterion_7(const std::string& cli) {
  Outcome out;
  if (cli.empty()) {
    out.add(false, "path to the gamemac executable not given (--cli)");
    return out;
  }
  {
    std::ofstream config("acceptance_sweep.conf");
    config << "game = chsh\nchannel-type = 2\neta-grid = 0:1:6\nresources = L-exact,L-bound,Q-lower,NS-exact\n";
  }
  std::vector<std::string> outputs;
  for (const char* name : {"acceptance_sweep_a.csv", "acceptance_sweep_b.csv"}) {
    std::remove(name);
    const std::string command = "\"" + cli + "\" sweep --config acceptance_sweep.conf --seed 99 --out " + name;
    const int status = std::system(command.c_str());
    out.add(status == 0, "run '" + command + "' exit status " + std::to_string(status));
    outputs.push_back(slurp(name));
  }
  const bool nonempty = outputs[0].rfind(std::string(kSweepHeader) + "\n", 0) == 0 && outputs[0].size() > 100;
  out.add(nonempty, "CSV starts with the header and has rows (" + std::to_string(outputs[0].size()) + " bytes)");
  out.add(outputs[0] == outputs[1], "both CSV files are byte-identical");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  int only = 0;
  std::string cli;
  app.add_option("--criterion", only, "Run one criterion (1-7); 0 runs all")->check(CLI::Range(0, 7));
  app.add_option("--cli", cli, "Path to the gamemac executable");
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"proposition identities on 1000 random triples per game", criterion_1},
      {"pseudo-telepathy boxes win, are no-signaling and have uniform outputs", criterion_2},
      {"closed-form capacities match direct sum-rates on an 11-point grid", criterion_3},
      {"comparison table for the (1,0) channels", criterion_4},
      {"brute-force classical game values", criterion_5},
      {"curve-shape properties", criterion_6},
      {"byte-deterministic sweeps", [&] { return criterion_7(cli); }},
  };

  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only != 0 && static_cast<std::size_t>(only) != i + 1) continue;
    Outcome outcome;
    try {
      outcome = criteria[i].second();
    } catch (const std::exception& e) {
      outcome.add(false, std::string("exception: ") + e.what());
    }
    all = all && outcome.passed();
    std::cout << "criterion " << i + 1 << ": " << (outcome.passed() ? "PASS" : "FAIL") << "  " << criteria[i].first << '\n';
    for (const auto& c : outcome.clauses) std::cout << "    [" << (c.passed ? "pass" : "FAIL") << "] " << c.text << '\n';
  }
  return all ? 0 : 1;
}
