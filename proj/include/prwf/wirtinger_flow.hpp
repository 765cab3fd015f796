#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "prwf/instance.hpp"
#include "prwf/linalg.hpp"
#include "prwf/spectral_init.hpp"

namespace prwf {

enum class EtaMode {
  gamma_scaled,  ///< eta = eta0 / gamma
  fixed,         ///< eta = eta0
};

enum class StopReason { max_iters, grad_tol };

std::string_view to_string(EtaMode m);
std::string_view to_string(StopReason r);

struct SolverConfig {
  /// nullopt selects from the ensemble (auto_select_algorithm).
  std::optional<AlgorithmId> algorithm;
  double eta0 = 0.2;
  EtaMode eta_mode = EtaMode::gamma_scaled;
  int max_iters = 1000;
  /// Stop once ||grad|| <= grad_tol; 0 disables.
  double grad_tol = 0.0;
  int record_every = 1;

  /// Throws ConfigError on eta0 <= 0, max_iters < 1, record_every < 1, grad_tol < 0.
  void validate() const;
};

struct TraceRecord {
  int iter = 0;
  std::optional<double> relative_error;
  double loss = 0.0;
};

template <class T>
struct RunTrace {
  std::vector<TraceRecord> iterations;
  Vec<T> final_z;
  StopReason converged_reason = StopReason::max_iters;
  /// Gradient steps taken.
  int iters = 0;

  std::optional<double> final_relative_error() const {
    return iterations.empty() ? std::nullopt : iterations.back().relative_error;
  }
};

/// f(z) = (1/2m) sum_j (|a_j^H z|^2 - y_j)^2.
template <class T>
double loss(const Instance<T>& inst, const Vec<T>& z);

/// (1/m) sum_j (|a_j^H z|^2 - y_j) a_j a_j^H z. For a real-valued f of a
/// complex argument, df = 2 Re<grad, dz>. The real field uses the same
/// normalization, which is half the ordinary real gradient; step sizes are
/// calibrated to this choice.
template <class T>
Vec<T> wirtinger_gradient(const Instance<T>& inst, const Vec<T>& z);

/// Complex field: the 2n x 2n matrix in (z, conj z) coordinates
///   [ (1/m) sum (2|a^H z|^2 - y) a a^H     (1/m) sum (a^H z)^2 a a^T    ]
///   [ (1/m) sum (z^H a)^2 conj(a) a^H      (1/m) sum (2|a^H z|^2 - y) conj(a) a^T ]
/// with d^2/dt^2 f(z + t w) = [w; conj w]^H H [w; conj w].
/// Real field: the n x n Jacobian of wirtinger_gradient,
/// (1/m) sum (3 (a^T z)^2 - y) a a^T, with d^2/dt^2 f(z + t w) = 2 w^T H w.
template <class T>
HermitianMatrix<T> wirtinger_hessian(const Instance<T>& inst, const Vec<T>& z);

/// Relative error ||.|| modulo global phase (complex) or sign (real),
/// divided by ||z*||; nullopt when the instance has no ground truth.
template <class T>
std::optional<double> relative_error(const Instance<T>& inst, const Vec<T>& z);

/// z^{t+1} = z^t - eta grad f(z^t). Records iteration 0, every record_every-th
/// iterate and the final iterate. Throws DivergenceError on a non-finite loss
/// or gradient.
template <class T>
RunTrace<T> run_wf(const Instance<T>& inst, const Vec<T>& z0, const SolverConfig& cfg,
                   double gamma);

/// Header `iter,relative_error,loss`; preceded by `# <comment>` when comment
/// is non-empty.
void write_trace_csv(std::ostream& os, const std::vector<TraceRecord>& records,
                     const std::string& comment = {});

}  // namespace prwf
