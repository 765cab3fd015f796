#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "prwf/ensembles.hpp"
#include "prwf/instance.hpp"
#include "prwf/linalg.hpp"
#include "prwf/spectral_init.hpp"

// Monte-Carlo checks of the closed-form population quantities of the loss
// and of the spectral-initialization matrices, plus a statistical probe of
// the local smoothness/convexity bounds of the empirical Hessian.

namespace prwf {

struct ExpectationReport {
  std::string target;
  double deviation = 0.0;
  std::int64_t samples = 0;
  double tolerance = 0.0;
  bool pass = false;
};

/// diag(|z_1|^2, ..., |z_n|^2)
template <class T>
Mat<T> D1(const Vec<T>& z);
/// diag(z_1^2, ..., z_n^2)
template <class T>
Mat<T> D2(const Vec<T>& z);

/// Population gradient E grad f(z) for i.i.d. entries with parameters
/// (beta1, beta2) and mean noise mean_xi = 1^T xi / m:
///   (2||z||^2 - ||z*||^2) z - (z*^H z) z* + (1 - beta2)(conj(z) z^T - conj(z*) z*^T) z
///   - (2 - beta1 - beta2)(D1(z) - D1(z*)) z - mean_xi z
Vec<cplx> closed_form_expected_gradient(const Vec<cplx>& z, const Vec<cplx>& z_star,
                                        double beta1, double beta2, double mean_xi);

/// Averages the empirical gradient over `samples` fresh noise-free rows and
/// compares with closed_form_expected_gradient. Default tolerance is
/// 0.05 (1 + ||z||^3) in the Euclidean norm. samples >= 10^4.
ExpectationReport mc_expected_gradient_check(const MeasurementEnsemble& e,
                                             const Vec<cplx>& z, const Vec<cplx>& z_star,
                                             std::int64_t samples, std::uint64_t seed,
                                             std::optional<double> tolerance = std::nullopt);

/// E M for the algorithm's matrix under noise-free data:
///   A: ||z*||^2 I + z* z*^H          B: ||z*||^2 I + z* z*^H - D1(z*)
///   C: ||z*||^2 I + 2 z* z*^T        D: ||z*||^2 I + 2 z* z*^T - 2 D1(z*)
template <class T>
Mat<T> population_M_target(AlgorithmId id, const Vec<T>& z_star);

/// Builds M from `samples` fresh noise-free rows (samples >= 10^5, unit z*)
/// and reports the spectral-norm deviation from population_M_target.
/// Default tolerance 0.05.
template <class T>
ExpectationReport mc_expected_M_check(const MeasurementEnsemble& e, AlgorithmId id,
                                      const Vec<T>& z_star, std::int64_t samples,
                                      std::uint64_t seed,
                                      std::optional<double> tolerance = std::nullopt);

struct ProbeReport {
  double max_specnorm = 0.0;
  /// min over probed directions u of u^H H u / ||u||^2.
  double min_quadform = 0.0;
  double bound_hi = 0.0;  ///< (12 + 3 beta1) ||z*||^2
  double bound_lo = 0.0;  ///< min(beta1, beta2) / 4 * ||z*||^2
  double violation_fraction = 0.0;
  int points = 0;

  bool within_bounds() const {
    return max_specnorm <= bound_hi && min_quadform >= bound_lo;
  }
};

/// Samples points z in the ball of `radius` around z*, evaluates the Hessian
/// spectral norm at z and the quadratic form along u = (z1 - z2, conj(z1 - z2))
/// for aligned pairs z1, z2 from the same ball. The bounds are high-probability
/// statements; the report is advisory. For real data beta2 is replaced by 2
/// and the quadratic form is w^T H w / ||w||^2.
template <class T>
ProbeReport ric_probe(const Instance<T>& inst, const Vec<T>& z_star, int num_points,
                      double radius, std::uint64_t seed);

/// Standard battery used by `verify`: moment estimates, the four M
/// identities at n = 10, the gradient identity for beta1 in {0, 0.4, 1} at
/// n = 6, and the Hessian bound probe.
std::vector<ExpectationReport> standard_checks(std::uint64_t seed);

}  // namespace prwf
