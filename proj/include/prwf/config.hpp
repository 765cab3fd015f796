#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "prwf/harness.hpp"

// Configuration files are flat `key = value` lines. `#` starts a comment,
// blank lines are ignored and a key may appear once per file. Values:
//   integers      n, m, trials, max_iters, record_every, seed
//   reals         eta0, grad_tol, sigma_rel, success_threshold, beta1, beta2
//   real lists    m_over_n (comma separated)
//   booleans      traces, timing, save_instances (true/false)
//   names         ensemble, noise (none|gaussian), algorithm (auto|A|B|C|D),
//                 eta_mode (gamma_scaled|fixed), signal (gaussian|flat)
//   path          instance_file
// Defaults: eta0 = 0.2 without noise and 0.1 with noise, max_iters = 1000,
// success_threshold = 0.1, trials = 100, sigma_rel = 0.05 for gaussian noise.

namespace prwf {

using Override = std::pair<std::string, std::string>;

/// Splits "key=value"; throws ConfigError when there is no '='.
Override parse_override(const std::string& text);

/// Parses `text`, applies `overrides` in order, fills defaults and validates.
ExperimentConfig parse_config_text(const std::string& text,
                                   const std::vector<Override>& overrides = {});

/// As parse_config_text on the contents of `path`; ConfigError if unreadable.
ExperimentConfig parse_config(const std::filesystem::path& path,
                              const std::vector<Override>& overrides = {});

/// Reads only the `seed` key (default 0) from an optional file and the
/// overrides; other keys are checked for grammar but otherwise ignored.
std::uint64_t parse_seed_only(const std::optional<std::filesystem::path>& path,
                              const std::vector<Override>& overrides = {});

}  // namespace prwf
