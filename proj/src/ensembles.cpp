#include "prwf/ensembles.hpp"

#include <cmath>
#include <string>

#include "prwf/errors.hpp"

namespace prwf {

namespace {

// sqrt(6)/2: each of the real and imaginary parts of the complex uniform law
// then has variance 1/2.
constexpr double kComplexUniformScale = 1.2247448713915890491;
constexpr double kSqrt3 = 1.7320508075688772935;

const std::array<MeasurementEnsemble, 6> kTable = {{
    {EnsembleName::complex_gaussian, Field::complex, 1.0, 1.0, std::nullopt},
    {EnsembleName::complex_uniform, Field::complex, 0.4, 1.0, std::nullopt},
    {EnsembleName::complex_discrete4, Field::complex, 0.0, 1.0, std::nullopt},
    {EnsembleName::real_gaussian, Field::real, 2.0, std::nullopt, std::sqrt(8.0 / 3.0)},
    // Tabulated only as an upper bound ("less than sqrt(2.5)").
    {EnsembleName::real_uniform, Field::real, 0.8, std::nullopt, std::sqrt(2.5)},
    {EnsembleName::real_bernoulli, Field::real, 0.0, std::nullopt, std::nullopt},
}};

}  // namespace

std::string_view to_string(EnsembleName e) {
  switch (e) {
    case EnsembleName::complex_gaussian: return "complex_gaussian";
    case EnsembleName::complex_uniform: return "complex_uniform";
    case EnsembleName::complex_discrete4: return "complex_discrete4";
    case EnsembleName::real_gaussian: return "real_gaussian";
    case EnsembleName::real_uniform: return "real_uniform";
    case EnsembleName::real_bernoulli: return "real_bernoulli";
  }
  return "unknown";
}

EnsembleName parse_ensemble(std::string_view name) {
  for (EnsembleName e : kAllEnsembles)
    if (to_string(e) == name) return e;
  throw ArgumentError("unknown ensemble '" + std::string(name) + "'");
}

const MeasurementEnsemble& ensemble(EnsembleName e) {
  return kTable[static_cast<std::size_t>(e)];
}

MomentParams moment_params(const MeasurementEnsemble& e) {
  return {e.beta1, e.beta2};
}

template <class T>
T sample_entry(const MeasurementEnsemble& e, Rng& rng) {
  if (e.field != field_of<T>())
    throw ArgumentError("ensemble " + std::string(to_string(e.name)) + " is " +
                        std::string(to_string(e.field)) + "-valued");
  if constexpr (is_complex_v<T>) {
    switch (e.name) {
      case EnsembleName::complex_gaussian: {
        const double re = rng.normal();
        const double im = rng.normal();
        return cplx(re, im) * M_SQRT1_2;
      }
      case EnsembleName::complex_uniform: {
        const double re = rng.uniform(-1.0, 1.0);
        const double im = rng.uniform(-1.0, 1.0);
        return cplx(re, im) * kComplexUniformScale;
      }
      case EnsembleName::complex_discrete4: {
        static constexpr std::array<cplx, 4> kAtoms = {
            cplx(1, 0), cplx(-1, 0), cplx(0, 1), cplx(0, -1)};
        return kAtoms[rng.below(4)];
      }
      default: break;
    }
  } else {
    switch (e.name) {
      case EnsembleName::real_gaussian: return rng.normal();
      case EnsembleName::real_uniform: return kSqrt3 * rng.uniform(-1.0, 1.0);
      case EnsembleName::real_bernoulli: return (rng.next_u64() >> 63) ? 1.0 : -1.0;
      default: break;
    }
  }
  throw ArgumentError("unhandled ensemble");
}

template <class T>
Vec<T> sample_row(const MeasurementEnsemble& e, Eigen::Index n, Rng& rng) {
  if (n < 1) throw ArgumentError("sample_row: n must be >= 1");
  if (e.field != field_of<T>())
    throw ArgumentError("ensemble " + std::string(to_string(e.name)) + " is " +
                        std::string(to_string(e.field)) + "-valued");
  Vec<T> a(n);
  for (Eigen::Index k = 0; k < n; ++k) a(k) = sample_entry<T>(e, rng);
  return a;
}

MomentEstimate estimate_moments(const MeasurementEnsemble& e, std::int64_t samples,
                                Rng& rng) {
  if (samples < 10000) throw ArgumentError("estimate_moments: need >= 10^4 samples");
  double s2 = 0.0, s4 = 0.0;
  cplx sa2 = 0.0;
  for (std::int64_t i = 0; i < samples; ++i) {
    cplx a = e.field == Field::complex ? sample_entry<cplx>(e, rng)
                                       : cplx(sample_entry<double>(e, rng), 0.0);
    const double q = std::norm(a);
    s2 += q;
    s4 += q * q;
    sa2 += a * a;
  }
  const double count = static_cast<double>(samples);
  return {s2 / count, s4 / count, std::norm(sa2 / count)};
}

template cplx sample_entry<cplx>(const MeasurementEnsemble&, Rng&);
template double sample_entry<double>(const MeasurementEnsemble&, Rng&);
template Vec<cplx> sample_row<cplx>(const MeasurementEnsemble&, Eigen::Index, Rng&);
template Vec<double> sample_row<double>(const MeasurementEnsemble&, Eigen::Index, Rng&);

}  // namespace prwf
