#include "prwf/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <sstream>

#include <omp.h>

#include "prwf/csv.hpp"
#include "prwf/errors.hpp"

namespace prwf {

std::string_view to_string(SignalSource s) {
  return s == SignalSource::gaussian ? "gaussian" : "flat";
}

std::string_view to_string(NoiseKind k) { return k == NoiseKind::none ? "none" : "gaussian"; }

void ExperimentConfig::validate() const {
  if (beta1 && !(*beta1 >= 0.0)) throw ConfigError("beta1", "must be >= 0");
  if (beta2 && !(*beta2 > 0.0 && *beta2 <= 1.0)) throw ConfigError("beta2", "must lie in (0, 1]");
  if (!instance_file)
    check_algorithm_params(algorithm(), prwf::ensemble(ensemble).field, beta1_value(),
                           beta2_value());
  solver.validate();
  if (n < 1) throw ConfigError("n", "must be >= 1");
  if (trials < 1) throw ConfigError("trials", "must be >= 1");
  if (!(success_threshold > 0.0)) throw ConfigError("success_threshold", "must be > 0");
  if (!instance_file) {
    if (m.has_value() == !m_over_n.empty())
      throw ConfigError("m", "exactly one of m and m_over_n must be given");
    if (m && *m < 1) throw ConfigError("m", "must be >= 1");
    for (double r : m_over_n)
      if (!(r > 0.0) || !std::isfinite(r)) throw ConfigError("m_over_n", "ratios must be > 0");
  }
  if (!(noise.sigma_rel >= 0.0) || !std::isfinite(noise.sigma_rel))
    throw ConfigError("sigma_rel", "must be >= 0");
}

AlgorithmId ExperimentConfig::algorithm() const {
  return solver.algorithm.value_or(auto_select_algorithm(prwf::ensemble(ensemble)));
}

double ExperimentConfig::beta1_value() const {
  return beta1.value_or(prwf::ensemble(ensemble).beta1);
}

std::optional<double> ExperimentConfig::beta2_value() const {
  return beta2 ? beta2 : prwf::ensemble(ensemble).beta2;
}

std::string ExperimentConfig::describe() const {
  std::ostringstream os;
  os << "ensemble=" << to_string(ensemble) << " n=" << n;
  if (m) os << " m=" << *m;
  if (!m_over_n.empty()) {
    os << " m_over_n=";
    for (std::size_t i = 0; i < m_over_n.size(); ++i)
      os << (i ? "," : "") << format_double(m_over_n[i]);
  }
  os << " noise=" << to_string(noise.kind);
  if (noise.kind != NoiseKind::none) os << " sigma_rel=" << format_double(noise.sigma_rel);
  os << " algorithm=" << (solver.algorithm ? to_string(*solver.algorithm) : "auto")
     << " eta0=" << format_double(solver.eta0) << " eta_mode=" << to_string(solver.eta_mode)
     << " max_iters=" << solver.max_iters << " grad_tol=" << format_double(solver.grad_tol)
     << " record_every=" << solver.record_every << " trials=" << trials
     << " success_threshold=" << format_double(success_threshold) << " seed=" << master_seed
     << " signal=" << to_string(signal);
  if (beta1) os << " beta1=" << format_double(*beta1);
  if (beta2) os << " beta2=" << format_double(*beta2);
  os << " traces=" << (traces ? "true" : "false") << " timing=" << (timing ? "true" : "false");
  if (instance_file) os << " instance_file=" << *instance_file;
  return os.str();
}

namespace {

using Clock = std::chrono::steady_clock;

template <class T>
void solve(const Instance<T>& inst, AlgorithmId alg, double beta1,
           std::optional<double> beta2, std::uint64_t init_seed, const ExperimentConfig& cfg,
           bool keep_trace, bool init_only, TrialOutcome& out) {
  const InitResult<T> init =
      spectral_initialize(inst, alg, beta1, beta2, init_seed, /*check_dominance=*/init_only);
  out.init_relerr = relative_error(inst, init.z0);
  out.gamma = init.gamma;
  out.top_eigenvalue = init.M_top_eigenvalue;
  out.power_iters = init.power_iters;
  out.negative_dominant = init.negative_dominant;
  if (init_only) return;

  RunTrace<T> trace = run_wf(inst, init.z0, cfg.solver, init.gamma);
  out.iters = trace.iters;
  out.final_relerr = trace.final_relative_error();
  if (out.final_relerr && !std::isfinite(*out.final_relerr)) out.final_relerr.reset();
  out.success = out.final_relerr && *out.final_relerr < cfg.success_threshold;
  if (keep_trace) out.trace = std::move(trace.iterations);
}

template <class T>
void trial_body(const ExperimentConfig& cfg, const MeasurementEnsemble& e, Eigen::Index m,
                bool keep_trace, bool init_only, const RunOptions& opts, TrialOutcome& out) {
  Rng signal_rng(derive_trial_seed(out.seed, 0, StreamTag::signal));
  const Vec<T> z_star = cfg.signal == SignalSource::flat
                            ? flat_signal<T>(cfg.n)
                            : generate_signal<T>(SignalKind::gaussian, cfg.n, signal_rng);
  const Instance<T> inst = synthesize(e, z_star, cfg.noise, m, out.seed);
  if (cfg.noise.kind != NoiseKind::none)
    out.admissibility = noise_admissibility(inst.xi, z_star.squaredNorm(), m, cfg.n);
  if (cfg.save_instances && opts.instance_dir)
    save_instance_file(*opts.instance_dir / ("instance_" + std::to_string(m) + "_" +
                                             std::to_string(out.trial) + ".txt"),
                       inst);
  solve(inst, cfg.algorithm(), cfg.beta1_value(), cfg.beta2_value(),
        derive_trial_seed(out.seed, 0, StreamTag::init), cfg, keep_trace, init_only, out);
}

template <class F>
void guarded(TrialOutcome& out, F&& body) {
  try {
    body();
  } catch (const IoError&) {
    throw;
  } catch (const std::exception& ex) {
    out.final_relerr.reset();
    out.success = false;
    out.error = ex.what();
  }
}

/// Runs f(i) for i in [0, count) on a dynamic schedule. Exceptions escaping f
/// are re-thrown on the calling thread after the loop.
template <class F>
void parallel_for(int count, int threads, F&& f) {
  const int nt = threads > 0 ? threads : omp_get_max_threads();
  std::exception_ptr first;
#pragma omp parallel for schedule(dynamic, 1) num_threads(nt) if (nt > 1)
  for (int i = 0; i < count; ++i) {
    try {
      f(i);
    } catch (...) {
#pragma omp critical(prwf_harness_error)
      if (!first) first = std::current_exception();
    }
  }
  if (first) std::rethrow_exception(first);
}

}  // namespace

TrialOutcome run_trial(const ExperimentConfig& cfg, int trial, Eigen::Index m,
                       bool keep_trace, bool init_only, const RunOptions& opts) {
  TrialOutcome out;
  out.trial = trial;
  out.seed = derive_trial_seed(cfg.master_seed, static_cast<std::uint64_t>(trial),
                               StreamTag::trial);
  out.m = m;
  out.n = cfg.n;
  out.m_over_n = static_cast<double>(m) / cfg.n;
  const MeasurementEnsemble& e = ensemble(cfg.ensemble);
  const auto start = Clock::now();
  guarded(out, [&] {
    if (e.field == Field::complex)
      trial_body<cplx>(cfg, e, m, keep_trace, init_only, opts, out);
    else
      trial_body<double>(cfg, e, m, keep_trace, init_only, opts, out);
  });
  if (cfg.timing)
    out.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  return out;
}

ConvergenceSummary summarize(const std::vector<TrialOutcome>& trials) {
  ConvergenceSummary s;
  std::vector<double> finals;
  for (const auto& t : trials) {
    if (t.final_relerr)
      finals.push_back(*t.final_relerr);
    else
      ++s.failed_trials;
  }
  if (finals.empty()) return s;
  std::sort(finals.begin(), finals.end());
  const std::size_t k = finals.size();
  s.min_final_relerr = finals.front();
  s.max_final_relerr = finals.back();
  s.median_final_relerr = k % 2 ? finals[k / 2] : 0.5 * (finals[k / 2 - 1] + finals[k / 2]);
  return s;
}

ConvergenceResult run_convergence(const ExperimentConfig& cfg, const RunOptions& opts) {
  cfg.validate();
  if (!cfg.m) throw ConfigError("m", "run needs a single m");
  ConvergenceResult r;
  r.trials.resize(static_cast<std::size_t>(cfg.trials));
  parallel_for(cfg.trials, opts.threads, [&](int t) {
    r.trials[static_cast<std::size_t>(t)] = run_trial(cfg, t, *cfg.m, cfg.traces, false, opts);
  });
  r.summary = summarize(r.trials);
  return r;
}

std::vector<TrialOutcome> run_init_study(const ExperimentConfig& cfg, const RunOptions& opts) {
  cfg.validate();
  if (!cfg.m) throw ConfigError("m", "init needs a single m");
  std::vector<TrialOutcome> out(static_cast<std::size_t>(cfg.trials));
  parallel_for(cfg.trials, opts.threads, [&](int t) {
    out[static_cast<std::size_t>(t)] = run_trial(cfg, t, *cfg.m, false, true, opts);
  });
  return out;
}

SweepResult run_success_sweep(const ExperimentConfig& cfg, const RunOptions& opts) {
  cfg.validate();
  if (cfg.m_over_n.empty()) throw ConfigError("m_over_n", "sweep needs a list of ratios");
  const int ratios = static_cast<int>(cfg.m_over_n.size());
  SweepResult r;
  r.trials.resize(static_cast<std::size_t>(ratios) * cfg.trials);
  parallel_for(ratios * cfg.trials, opts.threads, [&](int i) {
    const int ri = i / cfg.trials, t = i % cfg.trials;
    const auto m = static_cast<Eigen::Index>(std::llround(cfg.m_over_n[ri] * cfg.n));
    r.trials[static_cast<std::size_t>(i)] = run_trial(cfg, t, std::max<Eigen::Index>(m, 1),
                                                      false, false, opts);
  });

  for (int ri = 0; ri < ratios; ++ri) {
    SweepRow row;
    row.m_over_n = cfg.m_over_n[ri];
    row.trials = cfg.trials;
    double sum = 0.0;
    int finite = 0;
    for (int t = 0; t < cfg.trials; ++t) {
      const TrialOutcome& o = r.trials[static_cast<std::size_t>(ri) * cfg.trials + t];
      row.successes += o.success;
      if (o.final_relerr) {
        sum += *o.final_relerr;
        ++finite;
      }
    }
    row.success_rate = static_cast<double>(row.successes) / row.trials;
    row.mean_final_relerr = finite ? sum / finite : std::nan("");
    r.rows.push_back(row);
  }
  return r;
}

TrialOutcome run_stored_instance(const ExperimentConfig& cfg, bool init_only) {
  if (!cfg.instance_file) throw ConfigError("instance_file", "not set");
  const AnyInstance any = load_instance_file(*cfg.instance_file);
  TrialOutcome out;
  const auto start = Clock::now();
  std::visit(
      [&](const auto& inst) {
        using T = typename std::decay_t<decltype(inst)>::value_type;
        const Field field = field_of<T>();
        std::optional<MeasurementEnsemble> e;
        try {
          e = ensemble(parse_ensemble(inst.ensemble_name));
        } catch (const ArgumentError&) {
        }
        if (!cfg.solver.algorithm && !e)
          throw ConfigError("algorithm", "required for an instance of unknown ensemble '" +
                                             inst.ensemble_name + "'");
        const AlgorithmId alg = cfg.solver.algorithm.value_or(
            e ? auto_select_algorithm(*e) : AlgorithmId::A);
        const double beta1 = cfg.beta1 ? *cfg.beta1 : (e ? e->beta1 : 0.0);
        const std::optional<double> beta2 = cfg.beta2 ? cfg.beta2 : (e ? e->beta2 : std::nullopt);
        if (!cfg.beta1 && !e) throw ConfigError("beta1", "required for this instance");
        check_algorithm_params(alg, field, beta1, beta2);

        out.seed = inst.seed;
        out.m = inst.m();
        out.n = inst.n();
        out.m_over_n = static_cast<double>(out.m) / out.n;
        guarded(out, [&] {
          solve(inst, alg, beta1, beta2,
                derive_trial_seed(inst.seed, 0, StreamTag::init), cfg, cfg.traces, init_only,
                out);
        });
      },
      any);
  if (cfg.timing)
    out.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  return out;
}

void write_sweep_csv(std::ostream& os, const SweepResult& r, const std::string& comment) {
  if (!comment.empty()) os << "# " << comment << '\n';
  os << "m_over_n,trials,successes,success_rate,mean_final_relerr\n";
  for (const auto& row : r.rows)
    os << format_double(row.m_over_n) << ',' << row.trials << ',' << row.successes << ','
       << format_double(row.success_rate) << ',' << format_double(row.mean_final_relerr)
       << '\n';
}

void write_trials_csv(std::ostream& os, const std::vector<TrialOutcome>& trials,
                      const std::string& comment) {
  if (!comment.empty()) os << "# " << comment << '\n';
  os << "trial,seed,m,n,final_relerr,success,iters,wall_ms\n";
  for (const auto& t : trials)
    os << t.trial << ',' << t.seed << ',' << t.m << ',' << t.n << ','
       << format_optional(t.final_relerr) << ',' << (t.success ? 1 : 0) << ',' << t.iters
       << ',' << format_double(t.wall_ms) << '\n';
}

void write_init_csv(std::ostream& os, const std::vector<TrialOutcome>& trials,
                    const std::string& comment) {
  if (!comment.empty()) os << "# " << comment << '\n';
  os << "trial,seed,init_relerr,gamma,top_eigenvalue,power_iters\n";
  for (const auto& t : trials)
    os << t.trial << ',' << t.seed << ',' << format_optional(t.init_relerr) << ','
       << format_double(t.gamma) << ',' << format_double(t.top_eigenvalue) << ','
       << t.power_iters << '\n';
}

}  // namespace prwf
