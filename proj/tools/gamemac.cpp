#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "gamemac/commands.hpp"

namespace {

int emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) {
    std::cerr << "error: out: cannot open '" << path << "' for writing\n";
    return 2;
  }
  file << text;
  return file ? 0 : 2;
}

std::string default_box(const std::string& game) {
  if (game == "chsh") return "pr";
  return game;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multiple access channels built on nonlocal games: sum-capacities, bounds and checks", "gamemac"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "Flat `key = value` file; command-line flags override it");

  gamemac::RunConfig config;
  std::string eta_grid = "0:1:11";
  std::string vertex_file;
  std::size_t triples = 1000;
  bool inject_fault = false;
  std::string box_name;

  app.add_option("--game", config.game, "chsh, magic-square or mpp:<n>")->capture_default_str();
  app.add_option("--channel-type", config.channel_type, "1: (eta_w, eta_l) = (1, eta); 2: (eta, 0)")
      ->check(CLI::IsMember({1, 2}))
      ->capture_default_str();
  app.add_option("--eta-grid", eta_grid, "start:stop:steps")->capture_default_str();
  app.add_option("--resources", config.resources, "Comma list of L-exact, L-bound, Q-lower, Q-exact, NS-exact, vertex-file:<path>")
      ->delimiter(',')
      ->capture_default_str();
  app.add_option("--seed", config.optimizer.seed, "Seed for the optimizer and random checks")->capture_default_str();
  app.add_option("--out", config.out, "Output file (default: standard output)");
  app.add_option("--vertex-file", vertex_file, "Box CSV for vertex-bound");
  app.add_option("--grid-step", config.optimizer.grid_step, "Coarse grid step over each simplex (0: 0.05 for d=2, 0.1 otherwise)")
      ->capture_default_str();
  app.add_option("--restarts", config.optimizer.restarts, "Local refinements per maximisation")->capture_default_str();
  app.add_option("--tolerance", config.optimizer.tolerance, "Objective tolerance of the local search")->capture_default_str();
  app.add_option("--threads", config.optimizer.threads, "Worker threads (0: hardware concurrency)")->capture_default_str();

  auto* sweep = app.add_subcommand("sweep", "Capacities over an eta grid as CSV");
  auto* verify = app.add_subcommand("verify", "Randomised identity checks and box hypothesis checks");
  verify->add_option("--triples", triples, "Random triples per game")->capture_default_str();
  verify->add_flag("--inject-fault", inject_fault, "Replace one channel by one whose rows differ in entropy");
  auto* table = app.add_subcommand("table", "Recompute the (eta_w, eta_l) = (1, 0) comparison table");
  auto* game_value = app.add_subcommand("game-value", "Classical value of --game by brute force");
  auto* box_export = app.add_subcommand("box-export", "Write a box (or `channel`) as CSV");
  box_export->add_option("box", box_name, "pr, tsirelson, magic-square, mpp:<n>, local:<game> or channel (default: --game's box)");
  auto* vertex_bound = app.add_subcommand("vertex-bound", "Bound from the boxes in --vertex-file, over the eta grid");

  CLI11_PARSE(app, argc, argv);

  try {
    config.grid = gamemac::EtaGrid::parse(eta_grid);
    std::ostringstream out;

    if (sweep->parsed()) {
      gamemac::run_sweep(config, out, std::cerr);
    } else if (vertex_bound->parsed()) {
      if (vertex_file.empty()) throw gamemac::ConfigError("vertex-file: required for vertex-bound");
      config.resources = {"vertex-file:" + vertex_file};
      gamemac::run_sweep(config, out, std::cerr);
    } else if (verify->parsed()) {
      gamemac::VerifyOptions options{config.optimizer.seed, triples, inject_fault};
      const bool ok = gamemac::run_verify(options, out);
      const int status = emit(config.out, out.str());
      return status != 0 ? status : (ok ? 0 : 1);
    } else if (table->parsed()) {
      gamemac::run_table(config.optimizer, out);
    } else if (game_value->parsed()) {
      gamemac::run_game_value(config.game, out, config.optimizer.vertex_cap);
    } else if (box_export->parsed()) {
      if (box_name == "channel") {
        config.validate();
        const double eta = config.etas(std::cerr).front();
        gamemac::write_channel_csv(out, gamemac::make_channel(gamemac::game_by_name(config.game), config.type(), eta));
      } else {
        gamemac::run_box_export(box_name.empty() ? default_box(config.game) : box_name, out);
      }
    }
    return emit(config.out, out.str());
  } catch (const gamemac::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const gamemac::EnumerationCapExceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
