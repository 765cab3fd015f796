#include "prwf/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "prwf/errors.hpp"
#include "prwf/kernels.hpp"
#include "prwf/wirtinger_flow.hpp"

namespace prwf {

template <class T>
Mat<T> D1(const Vec<T>& z) {
  return z.cwiseAbs2().template cast<T>().asDiagonal();
}

template <class T>
Mat<T> D2(const Vec<T>& z) {
  return z.array().square().matrix().asDiagonal();
}

Vec<cplx> closed_form_expected_gradient(const Vec<cplx>& z, const Vec<cplx>& z_star,
                                        double beta1, double beta2, double mean_xi) {
  if (z.size() != z_star.size())
    throw DimensionError("closed_form_expected_gradient: length mismatch");
  const double zz = z.squaredNorm();
  const double ss = z_star.squaredNorm();
  const cplx cross = z_star.dot(z);  // z*^H z
  const cplx zt_z = z.transpose() * z;
  const cplx st_z = z_star.transpose() * z;

  Vec<cplx> g = (2.0 * zz - ss) * z - cross * z_star;
  g += (1.0 - beta2) * (z.conjugate() * zt_z - z_star.conjugate() * st_z);
  const Eigen::VectorXd d = z.cwiseAbs2() - z_star.cwiseAbs2();
  g -= (2.0 - beta1 - beta2) * (d.cast<cplx>().cwiseProduct(z));
  g -= mean_xi * z;
  return g;
}

ExpectationReport mc_expected_gradient_check(const MeasurementEnsemble& e,
                                             const Vec<cplx>& z, const Vec<cplx>& z_star,
                                             std::int64_t samples, std::uint64_t seed,
                                             std::optional<double> tolerance) {
  if (samples < 10000) throw ArgumentError("mc_expected_gradient_check: samples >= 10^4");
  if (e.field != Field::complex || !e.beta2)
    throw ArgumentError("mc_expected_gradient_check: complex ensemble required");
  const Instance<cplx> inst = synthesize(e, z_star, NoiseSpec{}, samples, seed);
  const Vec<cplx> empirical = kernels::omp::loss_gradient(inst.A, inst.y, z).gradient;
  const Vec<cplx> expected = closed_form_expected_gradient(z, z_star, e.beta1, *e.beta2, 0.0);

  ExpectationReport r;
  r.target = "expected_gradient:" + std::string(to_string(e.name));
  r.deviation = (empirical - expected).norm();
  r.samples = samples;
  r.tolerance = tolerance.value_or(0.05 * (1.0 + std::pow(z.norm(), 3)));
  r.pass = r.deviation <= r.tolerance;
  return r;
}

template <class T>
Mat<T> population_M_target(AlgorithmId id, const Vec<T>& z_star) {
  const Eigen::Index n = z_star.size();
  Mat<T> target = z_star.squaredNorm() * Mat<T>::Identity(n, n);
  const Mat<T> outer = z_star * z_star.adjoint();
  switch (id) {
    case AlgorithmId::A: target += outer; break;
    case AlgorithmId::B: target += outer - D1(z_star); break;
    case AlgorithmId::C: target += 2.0 * outer; break;
    case AlgorithmId::D: target += 2.0 * outer - 2.0 * D1(z_star); break;
  }
  return target;
}

template <class T>
ExpectationReport mc_expected_M_check(const MeasurementEnsemble& e, AlgorithmId id,
                                      const Vec<T>& z_star, std::int64_t samples,
                                      std::uint64_t seed, std::optional<double> tolerance) {
  if (samples < 100000) throw ArgumentError("mc_expected_M_check: samples >= 10^5");
  if (std::abs(z_star.norm() - 1.0) > 1e-12)
    throw ArgumentError("mc_expected_M_check: z* must have unit norm");
  const Instance<T> inst = synthesize(e, z_star, NoiseSpec{}, samples, seed);
  auto [m0, gamma] = build_M0_and_gamma(inst);
  const HermitianMatrix<T> m = build_M(m0, gamma, id, e.beta1, e.beta2);
  const auto diff =
      HermitianMatrix<T>::symmetrized(m.matrix() - population_M_target(id, z_star));

  ExpectationReport r;
  r.target = "expected_M:" + std::string(to_string(id)) + ":" +
             std::string(to_string(e.name));
  r.deviation = spectral_norm(diff);
  r.samples = samples;
  r.tolerance = tolerance.value_or(0.05);
  r.pass = r.deviation <= r.tolerance;
  return r;
}

namespace {

template <class T>
Vec<T> point_in_ball(const Vec<T>& center, double radius, Rng& rng) {
  Vec<T> d = standard_normal_vector<T>(center.size(), rng);
  d.normalize();
  return center + (radius * rng.uniform()) * d;
}

}  // namespace

template <class T>
ProbeReport ric_probe(const Instance<T>& inst, const Vec<T>& z_star, int num_points,
                      double radius, std::uint64_t seed) {
  if (num_points < 1) throw ArgumentError("ric_probe: num_points >= 1");
  if (z_star.size() != inst.n()) throw DimensionError("ric_probe: z* length != n");
  const double scale = z_star.squaredNorm();
  if (radius < 0.0 || radius > 0.1 * std::sqrt(scale) + 1e-15)
    throw ArgumentError("ric_probe: radius must lie in [0, 0.1 ||z*||]");

  const MeasurementEnsemble& e = ensemble(parse_ensemble(inst.ensemble_name));
  const double beta2 = is_complex_v<T> ? e.beta2.value_or(1.0) : 2.0;
  ProbeReport r;
  r.bound_hi = (12.0 + 3.0 * e.beta1) * scale;
  r.bound_lo = std::min(e.beta1, beta2) / 4.0 * scale;
  r.max_specnorm = 0.0;
  r.min_quadform = std::numeric_limits<double>::infinity();
  r.points = num_points;

  Rng rng(seed);
  int violations = 0;
  for (int p = 0; p < num_points; ++p) {
    const Vec<T> z = point_in_ball(z_star, radius, rng);
    const HermitianMatrix<T> h = wirtinger_hessian(inst, z);
    const double spec = spectral_norm(h);

    Vec<T> z1 = point_in_ball(z_star, radius, rng);
    const Vec<T> z2 = point_in_ball(z_star, radius, rng);
    if constexpr (is_complex_v<T>) {
      z1 *= align_phase(z1, z2);
    } else {
      if ((z1 + z2).norm() < (z1 - z2).norm()) z1 = -z1;
    }
    const Vec<T> w = z1 - z2;
    double quad = 0.0;
    if constexpr (is_complex_v<T>) {
      Vec<T> u(2 * w.size());
      u << w, w.conjugate();
      quad = (u.dot(h.matrix() * u)).real() / u.squaredNorm();
    } else {
      quad = w.dot(h.matrix() * w) / w.squaredNorm();
    }

    r.max_specnorm = std::max(r.max_specnorm, spec);
    r.min_quadform = std::min(r.min_quadform, quad);
    if (spec > r.bound_hi || quad < r.bound_lo) ++violations;
  }
  r.violation_fraction = static_cast<double>(violations) / num_points;
  return r;
}

std::vector<ExpectationReport> standard_checks(std::uint64_t seed) {
  std::vector<ExpectationReport> out;
  std::uint64_t index = 0;
  auto next_seed = [&] { return derive_trial_seed(seed, index++, StreamTag::diagnostics); };

  constexpr std::int64_t kMomentSamples = 1000000;
  for (EnsembleName name : kAllEnsembles) {
    const MeasurementEnsemble& e = ensemble(name);
    Rng rng(next_seed());
    const MomentEstimate est = estimate_moments(e, kMomentSamples, rng);
    const std::string tag(to_string(name));
    out.push_back({"moment2:" + tag, std::abs(est.m2 - 1.0), kMomentSamples, 0.01, false});
    out.push_back(
        {"moment4:" + tag, std::abs(est.m4 - (1.0 + e.beta1)), kMomentSamples, 0.05, false});
    if (e.beta2)
      out.push_back({"abs_sq_mean_a2:" + tag, std::abs(est.abs_sq_m_a2 - (1.0 - *e.beta2)),
                     kMomentSamples, 0.01, false});
  }
  for (auto& r : out) r.pass = r.deviation <= r.tolerance;

  constexpr std::int64_t kMatrixSamples = 200000;
  constexpr Eigen::Index kMatrixDim = 10;
  {
    Rng rng(next_seed());
    Vec<cplx> zc = standard_normal_vector<cplx>(kMatrixDim, rng).normalized();
    out.push_back(mc_expected_M_check(ensemble(EnsembleName::complex_gaussian),
                                      AlgorithmId::A, zc, kMatrixSamples, next_seed()));
    out.push_back(mc_expected_M_check(ensemble(EnsembleName::complex_discrete4),
                                      AlgorithmId::B, zc, kMatrixSamples, next_seed()));
    Vec<double> zr = standard_normal_vector<double>(kMatrixDim, rng).normalized();
    out.push_back(mc_expected_M_check(ensemble(EnsembleName::real_gaussian), AlgorithmId::C,
                                      zr, kMatrixSamples, next_seed()));
    out.push_back(mc_expected_M_check(ensemble(EnsembleName::real_bernoulli),
                                      AlgorithmId::D, flat_signal<double>(kMatrixDim),
                                      kMatrixSamples, next_seed()));
  }

  constexpr Eigen::Index kGradDim = 6;
  for (EnsembleName name : {EnsembleName::complex_discrete4, EnsembleName::complex_uniform,
                            EnsembleName::complex_gaussian}) {
    Rng rng(next_seed());
    const Vec<cplx> zs = standard_normal_vector<cplx>(kGradDim, rng).normalized();
    const Vec<cplx> z = standard_normal_vector<cplx>(kGradDim, rng).normalized();
    out.push_back(mc_expected_gradient_check(ensemble(name), z, zs, kMatrixSamples,
                                             next_seed()));
  }

  // Hessian bounds near z*: fraction of failing probe batches, allowed <= 5%.
  constexpr int kBatches = 100;
  int smooth_fail = 0, convex_fail = 0;
  for (int b = 0; b < kBatches; ++b) {
    Rng rng(next_seed());
    const Vec<cplx> zs = standard_normal_vector<cplx>(10, rng).normalized();
    const Instance<cplx> inst =
        synthesize(ensemble(EnsembleName::complex_gaussian), zs, NoiseSpec{}, 2000,
                   next_seed());
    const ProbeReport p = ric_probe(inst, zs, 10, 0.05, next_seed());
    smooth_fail += p.max_specnorm > p.bound_hi;
    convex_fail += p.min_quadform < p.bound_lo;
  }
  out.push_back({"ric_smoothness_failed_batches", smooth_fail / double(kBatches), kBatches,
                 0.05, smooth_fail <= 5});
  out.push_back({"ric_convexity_failed_batches", convex_fail / double(kBatches), kBatches,
                 0.05, convex_fail <= 5});
  return out;
}

template Mat<double> D1(const Vec<double>&);
template Mat<cplx> D1(const Vec<cplx>&);
template Mat<double> D2(const Vec<double>&);
template Mat<cplx> D2(const Vec<cplx>&);
template Mat<double> population_M_target(AlgorithmId, const Vec<double>&);
template Mat<cplx> population_M_target(AlgorithmId, const Vec<cplx>&);
template ExpectationReport mc_expected_M_check(const MeasurementEnsemble&, AlgorithmId,
                                               const Vec<double>&, std::int64_t,
                                               std::uint64_t, std::optional<double>);
template ExpectationReport mc_expected_M_check(const MeasurementEnsemble&, AlgorithmId,
                                               const Vec<cplx>&, std::int64_t, std::uint64_t,
                                               std::optional<double>);
template ProbeReport ric_probe(const Instance<double>&, const Vec<double>&, int, double,
                               std::uint64_t);
template ProbeReport ric_probe(const Instance<cplx>&, const Vec<cplx>&, int, double,
                               std::uint64_t);

}  // namespace prwf
