#include "rcr/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "rcr/errors.hpp"

namespace rcr {

ExperimentConfig default_experiment_config() { return ExperimentConfig{}; }

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& value, int line) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("");
    return x;
  } catch (const std::exception&) {
    throw ParseError("line " + std::to_string(line) + ": expected a number, got '" + value + "'");
  }
}

long parse_long(const std::string& value, int line) {
  try {
    std::size_t pos = 0;
    const long x = std::stol(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("");
    return x;
  } catch (const std::exception&) {
    throw ParseError("line " + std::to_string(line) + ": expected an integer, got '" + value + "'");
  }
}

std::uint64_t parse_seed(const std::string& value, int line) {
  try {
    std::size_t pos = 0;
    const std::uint64_t x = std::stoull(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("");
    return x;
  } catch (const std::exception&) {
    throw ParseError("line " + std::to_string(line) + ": expected a seed, got '" + value + "'");
  }
}

std::array<double, 2> parse_pair(const std::string& value, int line) {
  const auto comma = value.find(',');
  if (comma == std::string::npos)
    throw ParseError("line " + std::to_string(line) + ": expected 'a,b', got '" + value + "'");
  return {parse_double(trim(value.substr(0, comma)), line),
          parse_double(trim(value.substr(comma + 1)), line)};
}

bool parse_bool(const std::string& value, int line) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ParseError("line " + std::to_string(line) + ": expected true/false, got '" + value + "'");
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig cfg = default_experiment_config();
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string s = trim(raw);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos)
      throw ParseError("line " + std::to_string(line) + ": expected 'key = value'");
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));

    if (key == "model.rho") {
      cfg.rho = parse_double(value, line);
    } else if (key == "model.mu_star") {
      cfg.mu_star = parse_double(value, line);
    } else if (key == "model.sigma_star") {
      cfg.sigma_star = parse_double(value, line);
    } else if (key == "box.a1") {
      cfg.a1 = parse_double(value, line);
    } else if (key == "box.a2") {
      cfg.a2 = parse_double(value, line);
    } else if (key == "box.b1") {
      cfg.b1 = parse_double(value, line);
    } else if (key == "box.b2") {
      cfg.b2 = parse_double(value, line);
    } else if (key == "beta") {
      if (value == "auto")
        cfg.beta.reset();
      else
        cfg.beta = parse_double(value, line);
    } else if (key == "theta0") {
      if (value == "midpoint")
        cfg.theta0.reset();
      else
        cfg.theta0 = parse_pair(value, line);
    } else if (key == "n") {
      cfg.n = parse_long(value, line);
    } else if (key == "reps") {
      cfg.reps = static_cast<int>(parse_long(value, line));
    } else if (key == "alpha") {
      cfg.alpha = parse_double(value, line);
    } else if (key == "seed") {
      cfg.seed = parse_seed(value, line);
    } else if (key == "out") {
      cfg.out = value;
    } else if (key == "stride") {
      cfg.stride = parse_long(value, line);
    } else if (key == "grid") {
      cfg.grid.clear();
      std::string rest = value;
      while (!rest.empty()) {
        const auto semi = rest.find(';');
        const std::string piece = trim(semi == std::string::npos ? rest : rest.substr(0, semi));
        if (!piece.empty()) cfg.grid.push_back(parse_pair(piece, line));
        if (semi == std::string::npos) break;
        rest = rest.substr(semi + 1);
      }
    } else if (key == "diagnostics") {
      cfg.diagnostics = parse_bool(value, line);
    } else {
      // Unknown keys are hard errors so config typos cannot silently
      // reshape an experiment.
      throw InvalidConfig("unknown config key '" + key + "' (line " + std::to_string(line) + ")");
    }
  }
  validate_config(cfg);
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

void validate_config(const ExperimentConfig& cfg) {
  if (!(std::abs(cfg.rho) < 1.0)) throw InvalidConfig("model.rho must be in (-1, 1)");
  if (!(cfg.a1 < cfg.a2)) throw InvalidConfig("box.a1 must be < box.a2");
  if (!(cfg.b1 < cfg.b2)) throw InvalidConfig("box.b1 must be < box.b2");
  if (!(cfg.b1 > 0.0)) throw InvalidConfig("box.b1 must be positive");
  if (!(cfg.mu_star >= cfg.a1 && cfg.mu_star <= cfg.a2))
    throw InvalidConfig("model.mu_star outside the box");
  if (!(cfg.sigma_star >= cfg.b1 && cfg.sigma_star <= cfg.b2))
    throw InvalidConfig("model.sigma_star outside the box");
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) throw InvalidConfig("alpha must be in (0, 1)");
  if (cfg.n < 1) throw InvalidConfig("n must be >= 1");
  if (cfg.reps < 1) throw InvalidConfig("reps must be >= 1");
  if (cfg.stride < 1) throw InvalidConfig("stride must be >= 1");
  if (cfg.beta && !(*cfg.beta > 0.0)) throw InvalidConfig("beta must be positive");
  if (cfg.theta0) {
    const auto& t0 = *cfg.theta0;
    if (!(t0[0] >= cfg.a1 && t0[0] <= cfg.a2 && t0[1] >= cfg.b1 && t0[1] <= cfg.b2))
      throw InvalidConfig("theta0 outside the box");
  }
  for (const auto& g : cfg.grid)
    if (!(g[0] >= cfg.a1 && g[0] <= cfg.a2 && g[1] >= cfg.b1 && g[1] <= cfg.b2))
      throw InvalidConfig("grid point outside the box");
}

GaussianAR1Model make_model(const ExperimentConfig& cfg) {
  return GaussianAR1Model(cfg.rho, ParameterBox(Vec{cfg.a1, cfg.b1}, Vec{cfg.a2, cfg.b2}));
}

EstimatorConfig make_estimator_config(const ExperimentConfig& cfg, const MarkovModel& model) {
  std::optional<Vec> theta0;
  if (cfg.theta0) theta0 = Vec{(*cfg.theta0)[0], (*cfg.theta0)[1]};
  return make_estimator_config(model, cfg.beta, theta0);
}

Vec theta_star_of(const ExperimentConfig& cfg) { return Vec{cfg.mu_star, cfg.sigma_star}; }

std::vector<Vec> ergodic_grid(const ExperimentConfig& cfg) {
  std::vector<Vec> grid;
  if (!cfg.grid.empty()) {
    for (const auto& g : cfg.grid) grid.push_back(Vec{g[0], g[1]});
    return grid;
  }
  grid.push_back(theta_star_of(cfg));
  for (double off : {-0.5, -0.2, 0.2, 0.5}) {
    const double mu = std::min(std::max(cfg.mu_star + off, cfg.a1), cfg.a2);
    grid.push_back(Vec{mu, cfg.sigma_star});
  }
  return grid;
}

}  // namespace rcr
