// Acceptance checks. Prints one PASS/FAIL line per criterion; exits 1 if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "prwf/cli.hpp"
#include "prwf/diagnostics.hpp"
#include "prwf/errors.hpp"
#include "prwf/harness.hpp"
#include "prwf/kernels.hpp"
#include "prwf/linalg.hpp"
#include "prwf/rng.hpp"

namespace {

using namespace prwf;
namespace fs = std::filesystem;

struct Verdict {
  bool pass = true;
  std::vector<std::string> details;

  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    details.push_back(std::string(ok ? "ok   " : "MISS ") + what);
  }
  void note(const std::string& what) { details.push_back("     " + what); }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::optional<double> error_at(const TrialOutcome& t, int iter) {
  for (const auto& r : t.trace)
    if (r.iter == iter) return r.relative_error;
  return std::nullopt;
}

ExperimentConfig protocol_config(EnsembleName e, bool noisy) {
  ExperimentConfig cfg;
  cfg.ensemble = e;
  cfg.n = 100;
  cfg.m = 1000;
  cfg.trials = 10;
  cfg.master_seed = 20240601;
  cfg.timing = false;
  if (noisy) {
    cfg.noise = NoiseSpec{NoiseKind::gaussian, 0.05};
    cfg.solver.eta0 = 0.1;
    cfg.solver.max_iters = 400;
  } else {
    cfg.solver.eta0 = 0.2;
    cfg.solver.max_iters = 1000;
  }
  return cfg;
}

Verdict noise_free_convergence() {
  Verdict v;
  for (EnsembleName e : {EnsembleName::complex_uniform, EnsembleName::complex_discrete4}) {
    const ConvergenceResult r = run_convergence(protocol_config(e, false));
    const std::string tag(to_string(e));
    int converged = 0, linear = 0;
    double worst_drop = INFINITY;
    for (const auto& t : r.trials) {
      converged += t.final_relerr && *t.final_relerr <= 1e-5;
      const auto e100 = error_at(t, 100), e700 = error_at(t, 700);
      const double drop =
          e100 && e700 && *e700 > 0.0 ? std::log10(*e100) - std::log10(*e700)
          : e100 && e700             ? INFINITY
                                     : -INFINITY;
      worst_drop = std::min(worst_drop, drop);
      linear += drop >= 3.0;
    }
    v.require(converged == 10, tag + ": final relerr <= 1e-5 in " + std::to_string(converged) +
                                   "/10 (max " + fmt("%.3g", r.summary.max_final_relerr.value_or(NAN)) +
                                   ")");
    v.require(linear == 10, tag + ": decades lost between iterations 100 and 700 >= 3 in " +
                                std::to_string(linear) + "/10 (min " + fmt("%.3g", worst_drop) +
                                ")");
  }
  return v;
}

Verdict noisy_plateau() {
  Verdict v;
  for (EnsembleName e : {EnsembleName::complex_uniform, EnsembleName::complex_discrete4}) {
    const ConvergenceResult r = run_convergence(protocol_config(e, true));
    const std::string tag(to_string(e));
    int accurate = 0, flat = 0;
    double worst_change = 0.0;
    for (const auto& t : r.trials) {
      accurate += t.final_relerr && *t.final_relerr <= 0.05;
      const auto e250 = error_at(t, 250), e400 = error_at(t, 400);
      const double change = e250 && e400 ? std::abs(*e400 - *e250) / *e250 : INFINITY;
      worst_change = std::max(worst_change, change);
      flat += change <= 0.2;
    }
    v.require(accurate >= 9, tag + ": final relerr <= 0.05 in " + std::to_string(accurate) +
                                 "/10 (median " +
                                 fmt("%.3g", r.summary.median_final_relerr.value_or(NAN)) + ")");
    v.require(flat == 10, tag + ": |e400 - e250| / e250 <= 0.2 in " + std::to_string(flat) +
                              "/10 (max " + fmt("%.3g", worst_change) + ")");
  }
  return v;
}

Verdict success_sweep() {
  Verdict v;
  for (EnsembleName e : {EnsembleName::complex_gaussian, EnsembleName::real_gaussian}) {
    ExperimentConfig cfg;
    cfg.ensemble = e;
    cfg.n = 200;
    cfg.m_over_n = {5, 6, 7, 8, 9, 10, 11, 12};
    cfg.noise = NoiseSpec{NoiseKind::gaussian, 0.05};
    cfg.solver.eta0 = 0.1;
    cfg.solver.max_iters = 400;
    cfg.trials = 50;
    cfg.master_seed = 20240602;
    cfg.traces = false;
    cfg.timing = false;
    const SweepResult r = run_success_sweep(cfg);
    const std::string tag(to_string(e));
    std::string rates;
    for (const auto& row : r.rows) rates += fmt(" %.2f", row.success_rate);
    v.note(tag + ": success rate by m/n = 5..12:" + rates);
    const double lo = r.rows.front().success_rate, hi = r.rows.back().success_rate;
    v.require(hi >= 0.95, tag + ": rate at m/n = 12 is " + fmt("%.2f", hi) + " (>= 0.95)");
    v.require(hi - lo >= 0.3, tag + ": rate(12) - rate(5) = " + fmt("%.2f", hi - lo) +
                                  " (>= 0.3)");
  }
  return v;
}

Verdict expectation_identities() {
  Verdict v;
  std::uint64_t seed = 0;
  auto next = [&] { return derive_trial_seed(4004, seed++, StreamTag::diagnostics); };
  auto record = [&](const ExpectationReport& r) {
    v.require(r.pass, r.target + ": deviation " + fmt("%.4f", r.deviation) + " <= " +
                          fmt("%.4f", r.tolerance));
  };
  constexpr std::int64_t kSamples = 200000;

  Rng rng(next());
  const Vec<cplx> zc = standard_normal_vector<cplx>(10, rng).normalized();
  const Vec<double> zr = standard_normal_vector<double>(10, rng).normalized();
  record(mc_expected_M_check(ensemble(EnsembleName::complex_gaussian), AlgorithmId::A, zc,
                             kSamples, next()));
  record(mc_expected_M_check(ensemble(EnsembleName::complex_discrete4), AlgorithmId::B, zc,
                             kSamples, next()));
  record(mc_expected_M_check(ensemble(EnsembleName::real_gaussian), AlgorithmId::C, zr,
                             kSamples, next()));
  record(mc_expected_M_check(ensemble(EnsembleName::real_bernoulli), AlgorithmId::D,
                             flat_signal<double>(10), kSamples, next()));

  for (EnsembleName e : {EnsembleName::complex_discrete4, EnsembleName::complex_uniform,
                         EnsembleName::complex_gaussian}) {
    const Vec<cplx> z_star = standard_normal_vector<cplx>(6, rng).normalized();
    const Vec<cplx> z = standard_normal_vector<cplx>(6, rng);
    record(mc_expected_gradient_check(ensemble(e), z, z_star, kSamples, next()));
    record(mc_expected_gradient_check(ensemble(e), z_star, z_star, kSamples, next()));
  }
  return v;
}

template <class T>
void gradient_pairs(Verdict& v, EnsembleName e) {
  int ok = 0;
  double worst = 0.0;
  for (int pair = 0; pair < 20; ++pair) {
    Rng rng(derive_trial_seed(5005, pair, StreamTag::signal));
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng.below(10));
    const Vec<T> z_star = standard_normal_vector<T>(n, rng);
    const auto inst = synthesize(ensemble(e), z_star, NoiseSpec{NoiseKind::gaussian, 0.05},
                                 8 * n, derive_trial_seed(5005, pair, StreamTag::trial));
    const Vec<T> z = standard_normal_vector<T>(n, rng);
    const Vec<T> g = wirtinger_gradient(inst, z);
    const double rel = (g - oracle::fd_gradient(inst, z, 1e-6)).norm() / g.norm();
    worst = std::max(worst, rel);
    ok += rel <= 1e-6;
  }
  v.require(ok == 20, std::string(to_string(e)) + ": " + std::to_string(ok) +
                          "/20 pairs within 1e-6 relative (worst " + fmt("%.2e", worst) + ")");
}

Verdict gradient_correctness() {
  Verdict v;
  gradient_pairs<cplx>(v, EnsembleName::complex_gaussian);
  gradient_pairs<cplx>(v, EnsembleName::complex_uniform);
  gradient_pairs<cplx>(v, EnsembleName::complex_discrete4);
  gradient_pairs<double>(v, EnsembleName::real_gaussian);
  gradient_pairs<double>(v, EnsembleName::real_uniform);
  gradient_pairs<double>(v, EnsembleName::real_bernoulli);
  return v;
}

Verdict distance_oracle() {
  Verdict v;
  Rng rng(6006);
  int ok = 0, exact = 0;
  double worst = 0.0;
  for (int pair = 0; pair < 100; ++pair) {
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng.below(10));
    const Vec<cplx> a = standard_normal_vector<cplx>(n, rng);
    const Vec<cplx> b = standard_normal_vector<cplx>(n, rng);
    const double diff =
        std::abs(phase_aligned_distance(a, b) - oracle::phase_grid_distance(a, b, 100000));
    worst = std::max(worst, diff);
    ok += diff <= 1e-6;

    const Vec<double> x = standard_normal_vector<double>(n, rng);
    const Vec<double> y = standard_normal_vector<double>(n, rng);
    exact += sign_distance(x, y) == oracle::sign_enumeration_distance(x, y);
  }
  v.require(ok == 100, "phase-aligned distance within 1e-6 of the grid minimum on " +
                           std::to_string(ok) + "/100 pairs (worst " + fmt("%.2e", worst) + ")");
  v.require(exact == 100,
            "sign distance equals two-point enumeration on " + std::to_string(exact) + "/100");
  return v;
}

Verdict eigen_oracle() {
  Verdict v;
  Rng rng(7007);
  int ok = 0;
  double worst_value = 0.0, worst_align = 1.0;
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng.below(8));
    Mat<cplx> g(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) g(i, j) = cplx(rng.normal(), rng.normal());
    const Mat<cplx> h = (g + g.adjoint()) / 2.0;
    const auto ref = oracle::jacobi_hermitian(h);
    PowerIterationOptions opts;
    opts.seed = derive_trial_seed(7007, trial, StreamTag::probe);
    try {
      const auto p = leading_eigenpair(HermitianMatrix<cplx>(h), opts);
      const double dv = std::abs(p.value - ref.values.back());
      const double align = std::abs(p.vector.dot(ref.vectors.col(n - 1)));
      worst_value = std::max(worst_value, dv);
      worst_align = std::min(worst_align, align);
      ok += dv <= 1e-7 && align >= 1.0 - 1e-6;
    } catch (const ConvergenceError& e) {
      v.note(std::string("matrix ") + std::to_string(trial) + ": " + e.what());
    }
  }
  v.require(ok == 100, std::to_string(ok) + "/100 matrices agree (worst eigenvalue error " +
                           fmt("%.2e", worst_value) + ", worst alignment " +
                           fmt("%.10f", worst_align) + ")");
  return v;
}

Verdict ric_probe_batches() {
  Verdict v;
  int ok = 0;
  double max_spec = 0.0, min_quad = INFINITY;
  for (std::uint64_t b = 0; b < 100; ++b) {
    Rng rng(derive_trial_seed(8008, b, StreamTag::signal));
    const Vec<cplx> z = standard_normal_vector<cplx>(10, rng).normalized();
    const auto inst = synthesize(ensemble(EnsembleName::complex_gaussian), z, NoiseSpec{}, 2000,
                                 derive_trial_seed(8008, b, StreamTag::trial));
    const ProbeReport p = ric_probe(inst, z, 10, 0.05, derive_trial_seed(8008, b, StreamTag::probe));
    max_spec = std::max(max_spec, p.max_specnorm);
    min_quad = std::min(min_quad, p.min_quadform);
    ok += p.max_specnorm <= 15.0 && p.min_quadform >= 0.25;
  }
  v.require(ok >= 95, std::to_string(ok) + "/100 batches within both bounds (max ||H|| " +
                          fmt("%.3f", max_spec) + ", min quadform " + fmt("%.3f", min_quad) +
                          ")");
  return v;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Verdict determinism() {
  Verdict v;
  const fs::path root = fs::temp_directory_path() / "prwf_acceptance_determinism";
  fs::remove_all(root);
  fs::create_directories(root);
  const fs::path run_cfg = root / "run.cfg", sweep_cfg = root / "sweep.cfg";
  std::ofstream(run_cfg) << "ensemble = complex_uniform\nn = 40\nm = 400\ntrials = 6\n"
                            "max_iters = 300\nseed = 909\ntiming = false\n";
  std::ofstream(sweep_cfg) << "ensemble = real_gaussian\nn = 40\nm_over_n = 4,6,8\n"
                              "noise = gaussian\ntrials = 8\nmax_iters = 200\nseed = 910\n"
                              "timing = false\n";

  auto invoke = [&](const std::string& cmd, const fs::path& cfg, const fs::path& out,
                    const std::string& threads) {
    const std::string cfg_s = cfg.string(), out_s = out.string();
    const char* argv[] = {"prwf", cmd.c_str(), "--config", cfg_s.c_str(), "--out",
                          out_s.c_str(), "--threads", threads.c_str()};
    std::ostringstream o, e;
    return run_cli(8, argv, o, e);
  };

  const std::vector<std::string> settings = {"1", "1", "4"};
  std::vector<fs::path> runs, sweeps;
  bool exits_ok = true;
  for (std::size_t k = 0; k < settings.size(); ++k) {
    runs.push_back(root / ("run" + std::to_string(k)));
    sweeps.push_back(root / ("sweep" + std::to_string(k)));
    exits_ok &= invoke("run", run_cfg, runs.back(), settings[k]) == kExitOk;
    exits_ok &= invoke("sweep", sweep_cfg, sweeps.back(), settings[k]) == kExitOk;
  }
  kernels::set_num_threads(0);
  v.require(exits_ok, "all invocations exit 0");

  auto compare = [&](const std::vector<fs::path>& dirs, const std::string& label) {
    int files = 0;
    bool same = true;
    for (const auto& entry : fs::directory_iterator(dirs[0])) {
      if (entry.path().extension() != ".csv") continue;
      ++files;
      const std::string ref = slurp(entry.path());
      for (std::size_t k = 1; k < dirs.size(); ++k)
        same &= !ref.empty() && slurp(dirs[k] / entry.path().filename()) == ref;
    }
    v.require(same && files > 0, label + ": " + std::to_string(files) +
                                     " CSV files byte-identical across serial, serial repeat "
                                     "and 4 threads");
  };
  compare(runs, "run");
  compare(sweeps, "sweep");
  fs::remove_all(root);
  return v;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Verdict()> check;
  };
  const std::vector<Criterion> criteria = {
      {1, "noise-free linear convergence", noise_free_convergence},
      {2, "noisy plateau", noisy_plateau},
      {3, "success-rate sweep", success_sweep},
      {4, "expectation identities", expectation_identities},
      {5, "gradient finite differences", gradient_correctness},
      {6, "distance oracle", distance_oracle},
      {7, "eigen-solver oracle", eigen_oracle},
      {8, "RIC probe", ric_probe_batches},
      {9, "determinism", determinism},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.check();
    } catch (const std::exception& e) {
      v.require(false, std::string("exception: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += !v.pass;
    std::cout << (v.pass ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.name << " ("
              << fmt("%.1f", secs) << " s)\n";
    for (const auto& d : v.details) std::cout << "    " << d << '\n';
    std::cout.flush();
  }
  return failures == 0 ? 0 : 1;
}
