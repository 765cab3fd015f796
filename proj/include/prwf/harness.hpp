#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "prwf/ensembles.hpp"
#include "prwf/instance.hpp"
#include "prwf/spectral_init.hpp"
#include "prwf/wirtinger_flow.hpp"

namespace prwf {

enum class SignalSource {
  gaussian,  ///< i.i.d. normal entries, redrawn per trial
  flat,      ///< (1, ..., 1)/sqrt(n)
};

std::string_view to_string(SignalSource s);
std::string_view to_string(NoiseKind k);

struct ExperimentConfig {
  EnsembleName ensemble = EnsembleName::complex_gaussian;
  int n = 100;
  /// Exactly one of m / m_over_n is set.
  std::optional<int> m;
  std::vector<double> m_over_n;
  NoiseSpec noise;
  SolverConfig solver;
  int trials = 100;
  double success_threshold = 0.1;
  std::uint64_t master_seed = 0;
  SignalSource signal = SignalSource::gaussian;
  /// Override the ensemble's moment parameters.
  std::optional<double> beta1;
  std::optional<double> beta2;
  /// Keep per-iteration traces (run); disable for large batches.
  bool traces = true;
  /// Record wall-clock time per trial; when false wall_ms is written as 0 and
  /// every output is byte-reproducible.
  bool timing = true;
  /// Write each synthesized instance next to the run outputs.
  bool save_instances = false;
  /// Solve this stored instance instead of synthesizing (run/init only).
  std::optional<std::string> instance_file;

  /// Throws ConfigError naming the offending key.
  void validate() const;

  AlgorithmId algorithm() const;
  double beta1_value() const;
  std::optional<double> beta2_value() const;

  /// Resolved configuration as space-separated key=value pairs; parseable by
  /// parse_config_text after replacing spaces with newlines.
  std::string describe() const;
};

struct TrialOutcome {
  int trial = 0;
  std::uint64_t seed = 0;
  Eigen::Index m = 0;
  Eigen::Index n = 0;
  double m_over_n = 0.0;
  /// nullopt when the trial diverged or had no ground truth.
  std::optional<double> final_relerr;
  bool success = false;
  int iters = 0;
  double wall_ms = 0.0;
  std::optional<double> init_relerr;
  double gamma = 0.0;
  double top_eigenvalue = 0.0;
  int power_iters = 0;
  std::optional<bool> negative_dominant;
  std::optional<AdmissibilityReport> admissibility;
  std::optional<std::string> error;
  std::vector<TraceRecord> trace;
};

struct ConvergenceSummary {
  std::optional<double> median_final_relerr;
  std::optional<double> min_final_relerr;
  std::optional<double> max_final_relerr;
  int failed_trials = 0;
};

struct ConvergenceResult {
  std::vector<TrialOutcome> trials;
  ConvergenceSummary summary;
};

struct SweepRow {
  double m_over_n = 0.0;
  int trials = 0;
  int successes = 0;
  double success_rate = 0.0;
  /// Mean over trials with a finite final error.
  double mean_final_relerr = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<TrialOutcome> trials;
};

struct RunOptions {
  /// 0 uses the OpenMP default, 1 runs serially; results do not depend on it.
  int threads = 0;
  /// When set and cfg.save_instances is true, each synthesized instance is
  /// written here as instance_<m>_<trial>.txt.
  std::optional<std::filesystem::path> instance_dir;
};

/// One complete trial: signal, instance, spectral initialization and (unless
/// init_only) the gradient iterations. Failures are recorded, not thrown.
TrialOutcome run_trial(const ExperimentConfig& cfg, int trial, Eigen::Index m,
                       bool keep_trace, bool init_only = false,
                       const RunOptions& opts = {});

/// Single-m batch (cfg.m must be set).
ConvergenceResult run_convergence(const ExperimentConfig& cfg, const RunOptions& opts = {});

/// Spectral initialization only, one outcome per trial. Also decides whether
/// the most negative eigenvalue of M dominates.
std::vector<TrialOutcome> run_init_study(const ExperimentConfig& cfg,
                                         const RunOptions& opts = {});

/// One row per m/n ratio, m = round(ratio * n). Trial t uses the same derived
/// seed at every ratio.
SweepResult run_success_sweep(const ExperimentConfig& cfg, const RunOptions& opts = {});

/// Solves cfg.instance_file once.
TrialOutcome run_stored_instance(const ExperimentConfig& cfg, bool init_only = false);

ConvergenceSummary summarize(const std::vector<TrialOutcome>& trials);

/// m_over_n,trials,successes,success_rate,mean_final_relerr
void write_sweep_csv(std::ostream& os, const SweepResult& r, const std::string& comment);
/// trial,seed,m,n,final_relerr,success,iters,wall_ms
void write_trials_csv(std::ostream& os, const std::vector<TrialOutcome>& trials,
                      const std::string& comment);
/// trial,seed,init_relerr,gamma,top_eigenvalue,power_iters
void write_init_csv(std::ostream& os, const std::vector<TrialOutcome>& trials,
                    const std::string& comment);

}  // namespace prwf
