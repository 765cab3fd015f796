#include "prwf/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>

#include "prwf/errors.hpp"

namespace prwf {

std::string_view to_string(Field f) {
  return f == Field::real ? "real" : "complex";
}

template <class T>
Vec<T> standard_normal_vector(Eigen::Index n, Rng& rng) {
  Vec<T> v(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    if constexpr (is_complex_v<T>) {
      const double re = rng.normal();
      const double im = rng.normal();
      v(k) = cplx(re, im) * M_SQRT1_2;
    } else {
      v(k) = rng.normal();
    }
  }
  return v;
}

template <class T>
HermitianMatrix<T>::HermitianMatrix(Mat<T> m, Unchecked) : m_(std::move(m)) {}

template <class T>
HermitianMatrix<T>::HermitianMatrix(Mat<T> m) {
  if (m.rows() != m.cols())
    throw DimensionError("HermitianMatrix: matrix is " + std::to_string(m.rows()) +
                         "x" + std::to_string(m.cols()));
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double asym = m.size() == 0 ? 0.0 : (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (asym > kTolerance * scale)
    throw ArgumentError("HermitianMatrix: asymmetry " + std::to_string(asym) +
                        " exceeds tolerance");
  m_ = 0.5 * (m + m.adjoint());
}

template <class T>
HermitianMatrix<T> HermitianMatrix<T>::symmetrized(Mat<T> m) {
  if (m.rows() != m.cols())
    throw DimensionError("HermitianMatrix: matrix is not square");
  Mat<T> h = 0.5 * (m + m.adjoint());
  return HermitianMatrix(std::move(h), Unchecked{});
}

template <class T>
HermitianMatrix<T> HermitianMatrix<T>::identity(Eigen::Index n) {
  return HermitianMatrix(Mat<T>::Identity(n, n), Unchecked{});
}

namespace {

void require_same_length(Eigen::Index a, Eigen::Index b, const char* what) {
  if (a != b)
    throw DimensionError(std::string(what) + ": lengths " + std::to_string(a) +
                         " and " + std::to_string(b) + " differ");
}

// Shift making M + shift*I positive semidefinite (Gershgorin discs).
template <class T>
double gershgorin_shift(const Mat<T>& m) {
  double lowest = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    double off = 0.0;
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (j != i) off += std::abs(m(i, j));
    lowest = std::min(lowest, real_part(m(i, i)) - off);
  }
  return -lowest;
}

// Rotate so the largest-magnitude entry is real and positive.
template <class T>
void canonicalize_phase(Vec<T>& v) {
  Eigen::Index k = 0;
  v.cwiseAbs().maxCoeff(&k);
  const double a = std::abs(v(k));
  if (a == 0.0) return;
  v *= conj(v(k)) / a;
}

}  // namespace

double phase_aligned_distance(const Vec<cplx>& z1, const Vec<cplx>& z2) {
  require_same_length(z1.size(), z2.size(), "phase_aligned_distance");
  const double scale = z1.squaredNorm() + z2.squaredNorm();
  const double d2 = scale - 2.0 * std::abs(z2.dot(z1));
  // Below this level the closed form has lost most of its digits to
  // cancellation; form the aligned difference instead.
  if (d2 < 1e-6 * scale) return (align_phase(z1, z2) * z1 - z2).norm();
  return std::sqrt(d2);
}

cplx align_phase(const Vec<cplx>& z1, const Vec<cplx>& z2) {
  require_same_length(z1.size(), z2.size(), "align_phase");
  const cplx s = z2.dot(z1);
  const double a = std::abs(s);
  if (a == 0.0) return {1.0, 0.0};
  return std::conj(s) / a;
}

double sign_distance(const Vec<double>& z1, const Vec<double>& z2) {
  require_same_length(z1.size(), z2.size(), "sign_distance");
  return std::min((z1 - z2).norm(), (z1 + z2).norm());
}

template <class T>
EigenPair<T> leading_eigenpair(const HermitianMatrix<T>& h,
                               const PowerIterationOptions& opts) {
  const Mat<T>& m = h.matrix();
  const Eigen::Index n = m.rows();
  if (n < 1) throw ArgumentError("leading_eigenpair: empty matrix");

  const double shift = std::max(0.0, gershgorin_shift(m));
  Rng rng(opts.seed);
  Vec<T> v = standard_normal_vector<T>(n, rng);
  v.normalize();

  double residual = std::numeric_limits<double>::infinity();
  Vec<T> w(n);
  for (int it = 1; it <= opts.max_iterations; ++it) {
    w.noalias() = m * v;
    const double lambda = real_part(v.dot(w));
    residual = (w - lambda * v).norm() / std::max(1.0, std::abs(lambda));
    if (residual <= opts.tolerance) {
      canonicalize_phase(v);
      return {lambda, std::move(v), it, residual};
    }
    w += shift * v;
    const double nw = w.norm();
    if (!(nw > 0.0) || !std::isfinite(nw))
      throw ConvergenceError("leading_eigenpair: iterate collapsed", residual);
    v = w / nw;
  }
  throw ConvergenceError("leading_eigenpair: no convergence after " +
                             std::to_string(opts.max_iterations) +
                             " iterations (residual " + std::to_string(residual) + ")",
                         residual);
}

template <class T>
double spectral_norm(const HermitianMatrix<T>& m) {
  if (m.matrix().rows() < 1) throw ArgumentError("spectral_norm: empty matrix");
  const Eigen::SelfAdjointEigenSolver<Mat<T>> es(m.matrix(), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw ConvergenceError("spectral_norm: eigensolver failed", 0.0);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

template Vec<double> standard_normal_vector<double>(Eigen::Index, Rng&);
template Vec<cplx> standard_normal_vector<cplx>(Eigen::Index, Rng&);
template class HermitianMatrix<double>;
template class HermitianMatrix<cplx>;
template EigenPair<double> leading_eigenpair(const HermitianMatrix<double>&,
                                             const PowerIterationOptions&);
template EigenPair<cplx> leading_eigenpair(const HermitianMatrix<cplx>&,
                                           const PowerIterationOptions&);
template double spectral_norm(const HermitianMatrix<double>&);
template double spectral_norm(const HermitianMatrix<cplx>&);

}  // namespace prwf
