#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "prwf/ensembles.hpp"
#include "prwf/instance.hpp"
#include "prwf/linalg.hpp"

namespace prwf {

/// Initialization/recovery variant:
///   A  complex, beta1 > 0 (fourth-moment condition)
///   B  complex, E|a|^4 = 1, non-peaky signal
///   C  real,    beta1 > 0
///   D  real,    E a^4 = 1 (e.g. symmetric Bernoulli), non-peaky signal
enum class AlgorithmId { A, B, C, D };

std::string_view to_string(AlgorithmId id);
/// Accepts "A".."D" (either case); throws ArgumentError otherwise.
AlgorithmId parse_algorithm(std::string_view s);

Field required_field(AlgorithmId id);

/// complex & beta1 > 0 -> A; complex & beta1 = 0 -> B;
/// real & beta1 > 0 -> C; real & beta1 = 0 -> D.
AlgorithmId auto_select_algorithm(const MeasurementEnsemble& e);

/// Throws ConfigError naming the algorithm and parameter when (id, field,
/// beta1, beta2) is not admissible.
void check_algorithm_params(AlgorithmId id, Field field, double beta1,
                            std::optional<double> beta2);

/// M = c_m0 M0 + c_diag diag(M0) + c_re Re(M0) + c_identity gamma I.
struct MCoefficients {
  double c_m0 = 1.0;
  double c_diag = 0.0;
  double c_re = 0.0;
  double c_identity = 0.0;
};

MCoefficients m_coefficients(AlgorithmId id, double beta1, std::optional<double> beta2);

template <class T>
struct InitResult {
  Vec<T> z0;
  /// Mean observation; estimates ||z*||^2 + mean(xi).
  double gamma = 0.0;
  double M_top_eigenvalue = 0.0;
  int power_iters = 0;
  /// Only evaluated on request: true when the most negative eigenvalue of M
  /// exceeds the top one in magnitude, i.e. the leading singular and eigen
  /// directions differ. nullopt when not checked or undecided.
  std::optional<bool> negative_dominant;
};

/// M0 = (1/m) sum_j y_j a_j a_j^H (exactly Hermitian), gamma = mean(y).
template <class T>
std::pair<HermitianMatrix<T>, double> build_M0_and_gamma(const Instance<T>& inst);

template <class T>
HermitianMatrix<T> build_M(const HermitianMatrix<T>& M0, double gamma, AlgorithmId id,
                           double beta1, std::optional<double> beta2);

/// z0 = sqrt(gamma) * (unit leading eigenvector of M). Throws
/// InitializationError when gamma <= 0.
template <class T>
InitResult<T> scaled_leading_vector(const HermitianMatrix<T>& M, double gamma,
                                    std::uint64_t seed, bool check_dominance = false);

template <class T>
InitResult<T> spectral_initialize(const Instance<T>& inst, AlgorithmId id, double beta1,
                                  std::optional<double> beta2, std::uint64_t seed,
                                  bool check_dominance = false);

}  // namespace prwf
