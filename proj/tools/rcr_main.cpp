#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "rcr/errors.hpp"
#include "rcr/experiment.hpp"

namespace {

struct GlobalArgs {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string chain_path;
  std::optional<long> stride;
  std::string grid;
};

std::vector<std::array<double, 2>> parse_grid_arg(const std::string& text) {
  std::vector<std::array<double, 2>> grid;
  std::string rest = text;
  while (!rest.empty()) {
    const auto semi = rest.find(';');
    const std::string piece = semi == std::string::npos ? rest : rest.substr(0, semi);
    const auto comma = piece.find(',');
    if (comma == std::string::npos) throw rcr::InvalidConfig("--grid expects 'mu,sigma;...'");
    try {
      grid.push_back({std::stod(piece.substr(0, comma)), std::stod(piece.substr(comma + 1))});
    } catch (const std::exception&) {
      throw rcr::InvalidConfig("--grid expects numbers: '" + piece + "'");
    }
    if (semi == std::string::npos) break;
    rest = rest.substr(semi + 1);
  }
  return grid;
}

rcr::ExperimentConfig resolve_config(const GlobalArgs& args) {
  rcr::ExperimentConfig cfg = args.config_path.empty()
                                  ? rcr::default_experiment_config()
                                  : rcr::load_config_file(args.config_path);
  if (args.seed) cfg.seed = *args.seed;
  if (!args.out.empty()) cfg.out = args.out;
  if (args.stride) cfg.stride = *args.stride;
  if (!args.grid.empty()) cfg.grid = parse_grid_arg(args.grid);
  rcr::validate_config(cfg);
  return cfg;
}

void emit(const rcr::ExperimentConfig& cfg, const std::string& content) {
  if (cfg.out.empty()) {
    std::cout << content;
    return;
  }
  rcr::write_text_file(cfg.out, content);
}

std::vector<double> load_chain(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw rcr::IoError("cannot open chain file: " + path);
  return rcr::parse_chain_csv(in);
}

void add_common(CLI::App* cmd, GlobalArgs& args, bool needs_chain = false) {
  cmd->add_option("--config", args.config_path, "experiment config file (key = value)");
  cmd->add_option("--seed", args.seed, "override the config seed");
  cmd->add_option("--out", args.out, "output path (default: stdout)");
  if (needs_chain)
    cmd->add_option("--chain", args.chain_path, "input chain CSV")->required();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Streaming parameter identification and recursive confidence regions "
               "for Gaussian AR(1) observation models"};
  app.require_subcommand(1);
  GlobalArgs args;

  auto* simulate = app.add_subcommand("simulate", "simulate a chain and write step,z CSV");
  add_common(simulate, args);
  auto* estimate = app.add_subcommand("estimate", "stream the estimators over a chain CSV");
  add_common(estimate, args, true);
  auto* region = app.add_subcommand("region", "emit confidence-region snapshots as JSONL");
  add_common(region, args, true);
  region->add_option("--stride", args.stride, "emit every k-th step (default from config)");
  auto* coverage = app.add_subcommand("coverage", "coverage and chi-square calibration report");
  add_common(coverage, args);
  auto* rate = app.add_subcommand("rate", "mean-squared-error rate report");
  add_common(rate, args);
  auto* normality = app.add_subcommand("normality", "asymptotic-normality report");
  add_common(normality, args);
  auto* clt = app.add_subcommand("clt", "martingale central-limit report for the score");
  add_common(clt, args);
  auto* ergodic = app.add_subcommand("ergodic", "ergodic-average vs quadrature report");
  add_common(ergodic, args);
  ergodic->add_option("--grid", args.grid, "evaluation points 'mu,sigma;mu,sigma;...'");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  // Any failure to assemble a valid experiment definition is a config error,
  // whatever exception shape it surfaced as.
  rcr::ExperimentConfig cfg;
  try {
    cfg = resolve_config(args);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (simulate->parsed()) {
      const auto chain =
          rcr::simulate_chain(rcr::make_model(cfg), rcr::theta_star_of(cfg), cfg.n, cfg.seed);
      emit(cfg, rcr::chain_to_csv(chain));
    } else if (estimate->parsed()) {
      emit(cfg, rcr::run_estimates_csv(cfg, load_chain(args.chain_path)));
    } else if (region->parsed()) {
      emit(cfg, rcr::run_regions_jsonl(cfg, load_chain(args.chain_path)));
    } else if (coverage->parsed()) {
      emit(cfg, rcr::coverage_report(cfg).dump(2) + "\n");
    } else if (rate->parsed()) {
      emit(cfg, rcr::rate_report(cfg).dump(2) + "\n");
    } else if (normality->parsed()) {
      emit(cfg, rcr::normality_report(cfg).dump(2) + "\n");
    } else if (clt->parsed()) {
      emit(cfg, rcr::clt_report(cfg).dump(2) + "\n");
    } else if (ergodic->parsed()) {
      emit(cfg, rcr::ergodic_report(cfg).dump(2) + "\n");
    }
  } catch (const rcr::InvalidConfig& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const rcr::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 3;
  } catch (const rcr::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
