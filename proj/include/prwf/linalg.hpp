#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <string_view>
#include <type_traits>

#include "prwf/rng.hpp"

namespace prwf {

using cplx = std::complex<double>;

enum class Field { real, complex };

std::string_view to_string(Field f);

template <class T>
inline constexpr bool is_complex_v = false;
template <>
inline constexpr bool is_complex_v<cplx> = true;

template <class T>
constexpr Field field_of() {
  return is_complex_v<T> ? Field::complex : Field::real;
}

template <class T>
using Vec = Eigen::Matrix<T, Eigen::Dynamic, 1>;
template <class T>
using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
/// Row-major storage; used for the m x n sensing matrix so that row chunks
/// are contiguous.
template <class T>
using RowMat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Complex conjugate that is the identity on reals.
template <class T>
T conj(const T& x) {
  if constexpr (is_complex_v<T>)
    return std::conj(x);
  else
    return x;
}

/// Squared modulus.
template <class T>
double abs2(const T& x) {
  return std::norm(x);
}

template <class T>
double real_part(const T& x) {
  return std::real(x);
}

/// Standard normal vector; complex entries are (N + iN)/sqrt(2) so that
/// E|v_k|^2 = 1 in both fields.
template <class T>
Vec<T> standard_normal_vector(Eigen::Index n, Rng& rng);

/// Dense Hermitian (real symmetric for T = double) matrix. The stored
/// matrix is exactly Hermitian: construction averages M and M^H.
template <class T>
class HermitianMatrix {
 public:
  /// Relative asymmetry accepted by the validating constructor.
  static constexpr double kTolerance = 1e-12;

  HermitianMatrix() = default;
  /// Validates |M - M^H| <= kTolerance * max(1, max|M|) entrywise, then
  /// symmetrizes. Throws DimensionError (non-square) or ArgumentError.
  explicit HermitianMatrix(Mat<T> m);

  /// Symmetrizes without validation; for matrices assembled by accumulation.
  static HermitianMatrix symmetrized(Mat<T> m);

  static HermitianMatrix identity(Eigen::Index n);

  Eigen::Index dim() const { return m_.rows(); }
  const Mat<T>& matrix() const { return m_; }
  T operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

  HermitianMatrix operator-() const { return symmetrized(-m_); }

 private:
  struct Unchecked {};
  HermitianMatrix(Mat<T> m, Unchecked);

  Mat<T> m_;
};

template <class T>
struct EigenPair {
  double value = 0.0;
  Vec<T> vector;
  int iterations = 0;
  double residual = 0.0;
};

struct PowerIterationOptions {
  /// Accept when ||Mv - lambda v|| / max(1, |lambda|) <= tolerance.
  double tolerance = 1e-9;
  int max_iterations = 20000;
  /// Seeds the pseudo-random start vector.
  std::uint64_t seed = 0x5eed;
};

/// min over phi of ||e^{i phi} z1 - z2|| = sqrt(||z1||^2 + ||z2||^2 - 2|z2^H z1|).
/// Nearly coincident inputs are measured as ||align_phase(z1, z2) z1 - z2||,
/// which keeps full relative accuracy where the closed form cancels.
double phase_aligned_distance(const Vec<cplx>& z1, const Vec<cplx>& z2);

/// e^{i phi*} minimizing ||e^{i phi} z1 - z2||; 1 when z2^H z1 = 0.
cplx align_phase(const Vec<cplx>& z1, const Vec<cplx>& z2);

/// min(||z1 - z2||, ||z1 + z2||).
double sign_distance(const Vec<double>& z1, const Vec<double>& z2);

/// Distance modulo the field's global ambiguity: sign for real vectors,
/// phase for complex ones.
template <class T>
double ambiguity_distance(const Vec<T>& z1, const Vec<T>& z2) {
  if constexpr (is_complex_v<T>)
    return phase_aligned_distance(z1, z2);
  else
    return sign_distance(z1, z2);
}

/// Eigenpair of the algebraically largest eigenvalue by power iteration on
/// M + cI, where c = max(0, -min_i(M_ii - sum_{j != i} |M_ij|)) is the
/// Gershgorin row-sum bound that makes M + cI positive semidefinite.
/// Throws ConvergenceError after max_iterations.
template <class T>
EigenPair<T> leading_eigenpair(const HermitianMatrix<T>& m,
                               const PowerIterationOptions& opts = {});

/// max_j |lambda_j(M)|, from a dense symmetric eigensolver.
template <class T>
double spectral_norm(const HermitianMatrix<T>& m);

}  // namespace prwf
