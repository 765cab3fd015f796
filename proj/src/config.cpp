#include "prwf/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "prwf/errors.hpp"

namespace prwf {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

template <class I>
I to_integer(const std::string& key, const std::string& v) {
  I out{};
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty())
    throw ConfigError(key, "expected an integer, got '" + v + "'");
  return out;
}

double to_real(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty())
    throw ConfigError(key, "expected a number, got '" + v + "'");
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw ConfigError(key, "expected true or false, got '" + v + "'");
}

std::vector<double> to_real_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_real(key, trim(item)));
  if (out.empty()) throw ConfigError(key, "expected a comma-separated list of numbers");
  return out;
}

ExperimentConfig build(const std::map<std::string, std::string>& kv) {
  ExperimentConfig cfg;
  bool eta0_set = false, sigma_set = false;
  for (const auto& [key, v] : kv) {
    if (key == "ensemble") {
      try {
        cfg.ensemble = parse_ensemble(v);
      } catch (const ArgumentError&) {
        throw ConfigError(key, "unknown ensemble '" + v + "'");
      }
    } else if (key == "n") {
      cfg.n = to_integer<int>(key, v);
    } else if (key == "m") {
      cfg.m = to_integer<int>(key, v);
    } else if (key == "m_over_n") {
      cfg.m_over_n = to_real_list(key, v);
    } else if (key == "noise") {
      if (v == "none")
        cfg.noise.kind = NoiseKind::none;
      else if (v == "gaussian")
        cfg.noise.kind = NoiseKind::gaussian;
      else
        throw ConfigError(key, "expected none or gaussian, got '" + v + "'");
    } else if (key == "sigma_rel") {
      cfg.noise.sigma_rel = to_real(key, v);
      sigma_set = true;
    } else if (key == "algorithm") {
      if (v == "auto") {
        cfg.solver.algorithm.reset();
      } else {
        try {
          cfg.solver.algorithm = parse_algorithm(v);
        } catch (const ArgumentError&) {
          throw ConfigError(key, "expected auto, A, B, C or D, got '" + v + "'");
        }
      }
    } else if (key == "eta0") {
      cfg.solver.eta0 = to_real(key, v);
      eta0_set = true;
    } else if (key == "eta_mode") {
      if (v == "gamma_scaled")
        cfg.solver.eta_mode = EtaMode::gamma_scaled;
      else if (v == "fixed")
        cfg.solver.eta_mode = EtaMode::fixed;
      else
        throw ConfigError(key, "expected gamma_scaled or fixed, got '" + v + "'");
    } else if (key == "max_iters") {
      cfg.solver.max_iters = to_integer<int>(key, v);
    } else if (key == "grad_tol") {
      cfg.solver.grad_tol = to_real(key, v);
    } else if (key == "record_every") {
      cfg.solver.record_every = to_integer<int>(key, v);
    } else if (key == "trials") {
      cfg.trials = to_integer<int>(key, v);
    } else if (key == "success_threshold") {
      cfg.success_threshold = to_real(key, v);
    } else if (key == "seed") {
      cfg.master_seed = to_integer<std::uint64_t>(key, v);
    } else if (key == "signal") {
      if (v == "gaussian")
        cfg.signal = SignalSource::gaussian;
      else if (v == "flat")
        cfg.signal = SignalSource::flat;
      else
        throw ConfigError(key, "expected gaussian or flat, got '" + v + "'");
    } else if (key == "beta1") {
      cfg.beta1 = to_real(key, v);
    } else if (key == "beta2") {
      cfg.beta2 = to_real(key, v);
    } else if (key == "traces") {
      cfg.traces = to_bool(key, v);
    } else if (key == "timing") {
      cfg.timing = to_bool(key, v);
    } else if (key == "save_instances") {
      cfg.save_instances = to_bool(key, v);
    } else if (key == "instance_file") {
      cfg.instance_file = v;
    } else {
      throw ConfigError(key, "unknown key");
    }
  }
  if (!eta0_set) cfg.solver.eta0 = cfg.noise.kind == NoiseKind::none ? 0.2 : 0.1;
  if (!sigma_set && cfg.noise.kind == NoiseKind::gaussian) cfg.noise.sigma_rel = 0.05;
  if (sigma_set && cfg.noise.kind == NoiseKind::none && cfg.noise.sigma_rel != 0.0)
    throw ConfigError("sigma_rel", "set while noise = none");
  return cfg;
}

}  // namespace

Override parse_override(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) throw ConfigError(text, "override must have the form key=value");
  std::string key = trim(std::string_view(text).substr(0, eq));
  if (key.empty()) throw ConfigError("", "override '" + text + "' has an empty key");
  return {std::move(key), trim(std::string_view(text).substr(eq + 1))};
}

namespace {

std::map<std::string, std::string> key_values(const std::string& text,
                                              const std::vector<Override>& overrides) {
  std::map<std::string, std::string> kv;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string body = trim(std::string_view(line).substr(0, line.find('#')));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos)
      throw ConfigError("", "line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(std::string_view(body).substr(0, eq));
    if (key.empty())
      throw ConfigError("", "line " + std::to_string(lineno) + ": empty key");
    if (!kv.emplace(key, trim(std::string_view(body).substr(eq + 1))).second)
      throw ConfigError(key, "duplicate key");
  }
  for (const auto& [key, value] : overrides) kv[key] = value;
  return kv;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text,
                                   const std::vector<Override>& overrides) {
  ExperimentConfig cfg = build(key_values(text, overrides));
  cfg.validate();
  return cfg;
}

ExperimentConfig parse_config(const std::filesystem::path& path,
                              const std::vector<Override>& overrides) {
  return parse_config_text(read_file(path), overrides);
}

std::uint64_t parse_seed_only(const std::optional<std::filesystem::path>& path,
                              const std::vector<Override>& overrides) {
  const auto kv = key_values(path ? read_file(*path) : std::string(), overrides);
  const auto it = kv.find("seed");
  return it == kv.end() ? 0 : to_integer<std::uint64_t>("seed", it->second);
}

}  // namespace prwf
