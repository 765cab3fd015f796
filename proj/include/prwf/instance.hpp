#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>

#include "prwf/ensembles.hpp"
#include "prwf/linalg.hpp"
#include "prwf/rng.hpp"

namespace prwf {

enum class SignalKind { gaussian, given };
enum class NoiseKind { none, gaussian };

struct NoiseSpec {
  NoiseKind kind = NoiseKind::none;
  /// Standard deviation of each xi_j as a multiple of ||z*||^2.
  double sigma_rel = 0.0;
};

/// One phase-retrieval problem y_j = |a_j^H z*|^2 + xi_j.
template <class T>
struct Instance {
  using value_type = T;

  /// m x n; row j holds a_j^H, so (A z)_j = a_j^H z.
  RowMat<T> A;
  Eigen::VectorXd y;
  Eigen::VectorXd xi;
  std::optional<Vec<T>> z_star;
  std::string ensemble_name;
  std::uint64_t seed = 0;

  Eigen::Index m() const { return A.rows(); }
  Eigen::Index n() const { return A.cols(); }

  /// Throws DimensionError/ArgumentError if sizes disagree or m, n < 1.
  void validate() const;
};

using AnyInstance = std::variant<Instance<double>, Instance<cplx>>;

/// gaussian: i.i.d. standard normal entries ((N + iN)/sqrt(2) for complex).
/// given: returns *payload, which must have length n.
template <class T>
Vec<T> generate_signal(SignalKind kind, Eigen::Index n, Rng& rng,
                       const std::optional<Vec<T>>& payload = std::nullopt);

/// Flat unit signal (1, ..., 1)/sqrt(n).
template <class T>
Vec<T> flat_signal(Eigen::Index n);

/// Draws m sensing rows from the matrix sub-stream of `seed`, then xi from the
/// independent noise sub-stream, and forms y. Same arguments, same instance.
template <class T>
Instance<T> synthesize(const MeasurementEnsemble& e, const Vec<T>& z_star,
                       const NoiseSpec& noise, Eigen::Index m, std::uint64_t seed);

/// ||z||_inf^2 / ||z||^2, in [1/n, 1]. Throws ArgumentError for z = 0.
template <class T>
double mu_flatness(const Vec<T>& z);

struct AdmissibilityThresholds {
  double sum_abs = 0.05;
  double l2_ratio = 1.0;
  double inf_ratio = 1.0;
};

struct AdmissibilityReport {
  double sum_abs = 0.0;    ///< |1^T xi| / (m ||z*||^2)
  double l2_ratio = 0.0;   ///< ||xi|| / (sqrt(m) ||z*||^2)
  double inf_ratio = 0.0;  ///< ||xi||_inf / (log m ||z*||^2)
  bool sum_flag = false;
  bool l2_flag = false;
  bool inf_flag = false;

  bool any_flag() const { return sum_flag || l2_flag || inf_flag; }
};

/// Advisory check of the noise magnitudes the recovery guarantees assume.
/// log m is floored at 1 so that m <= 2 stays finite.
AdmissibilityReport noise_admissibility(const Eigen::VectorXd& xi, double z_norm_sq,
                                        Eigen::Index m, Eigen::Index n,
                                        const AdmissibilityThresholds& thresholds = {});

/// Text format, one record per line:
///   prwf-instance field=<real|complex> m=<m> n=<n> ensemble=<name> seed=<s> truth=<0|1>
///   z_star <n values>                  (only when truth=1)
///   <y_j> <xi_j> <row j of A>           (m lines)
/// Complex values are written as "re im". Doubles use 17 significant digits,
/// so load(save(x)) == x exactly.
template <class T>
void save_instance(std::ostream& os, const Instance<T>& inst);
AnyInstance load_instance(std::istream& is);

template <class T>
void save_instance_file(const std::filesystem::path& path, const Instance<T>& inst);
AnyInstance load_instance_file(const std::filesystem::path& path);

}  // namespace prwf
