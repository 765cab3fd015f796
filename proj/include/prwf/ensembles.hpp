#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "prwf/linalg.hpp"
#include "prwf/rng.hpp"

namespace prwf {

enum class EnsembleName {
  complex_gaussian,
  complex_uniform,
  complex_discrete4,
  real_gaussian,
  real_uniform,
  real_bernoulli,
};

inline constexpr std::array<EnsembleName, 6> kAllEnsembles = {
    EnsembleName::complex_gaussian, EnsembleName::complex_uniform,
    EnsembleName::complex_discrete4, EnsembleName::real_gaussian,
    EnsembleName::real_uniform,     EnsembleName::real_bernoulli,
};

/// Law of one i.i.d. entry of a sensing vector, normalized to E a = 0,
/// E|a|^2 = 1, together with its fourth-moment parameters
///   beta1 = E|a|^4 - 1,   beta2 = 1 - |E a^2|^2 (complex field only).
struct MeasurementEnsemble {
  EnsembleName name;
  Field field;
  double beta1;
  std::optional<double> beta2;
  /// Subgaussian norm bound; informational, present only where tabulated.
  std::optional<double> subgaussian_K;
};

struct MomentParams {
  double beta1;
  std::optional<double> beta2;
};

struct MomentEstimate {
  double m2;           ///< E|a|^2
  double m4;           ///< E|a|^4
  double abs_sq_m_a2;  ///< |E a^2|^2
};

/// Exact lowercase names, as used in config files and CSV output.
std::string_view to_string(EnsembleName e);
/// Throws ArgumentError on an unknown name.
EnsembleName parse_ensemble(std::string_view name);

const MeasurementEnsemble& ensemble(EnsembleName e);

MomentParams moment_params(const MeasurementEnsemble& e);

/// One entry drawn from the ensemble. T must match the ensemble's field.
template <class T>
T sample_entry(const MeasurementEnsemble& e, Rng& rng);

/// One sensing vector with n i.i.d. entries. Throws ArgumentError for n = 0
/// or when T does not match the ensemble's field.
template <class T>
Vec<T> sample_row(const MeasurementEnsemble& e, Eigen::Index n, Rng& rng);

/// Empirical E|a|^2, E|a|^4 and |E a^2|^2 from `samples` draws (>= 10^4).
MomentEstimate estimate_moments(const MeasurementEnsemble& e, std::int64_t samples,
                                Rng& rng);

}  // namespace prwf
