#include "prwf/kernels.hpp"

#include <omp.h>

#include <vector>

#include "prwf/errors.hpp"

namespace prwf::kernels {

namespace {

template <class T>
void check_shapes(const RowMat<T>& a, const Eigen::VectorXd& y, Eigen::Index zlen,
                  const char* what) {
  if (y.size() != a.rows())
    throw DimensionError(std::string(what) + ": weight length != number of rows");
  if (zlen >= 0 && zlen != a.cols())
    throw DimensionError(std::string(what) + ": vector length " + std::to_string(zlen) +
                         " != n = " + std::to_string(a.cols()));
  if (a.rows() < 1) throw ArgumentError(std::string(what) + ": no rows");
}

Eigen::Index chunk_count(Eigen::Index m) { return (m + kChunkRows - 1) / kChunkRows; }

}  // namespace

namespace serial {

template <class T>
LossGradient<T> loss_gradient(const RowMat<T>& a, const Eigen::VectorXd& y,
                              const Vec<T>& z) {
  check_shapes(a, y, z.size(), "loss_gradient");
  const Eigen::Index m = a.rows(), n = a.cols();
  LossGradient<T> out;
  out.gradient = Vec<T>::Zero(n);
  for (Eigen::Index j = 0; j < m; ++j) {
    T s = T(0);
    for (Eigen::Index k = 0; k < n; ++k) s += a(j, k) * z(k);
    const double r = abs2(s) - y(j);
    out.loss += r * r;
    const T rs = r * s;
    for (Eigen::Index k = 0; k < n; ++k) out.gradient(k) += rs * conj(a(j, k));
  }
  const double md = static_cast<double>(m);
  out.loss /= 2.0 * md;
  out.gradient /= md;
  return out;
}

template <class T>
Mat<T> weighted_gram(const RowMat<T>& a, const Eigen::VectorXd& w) {
  check_shapes(a, w, -1, "weighted_gram");
  const Eigen::Index m = a.rows(), n = a.cols();
  Mat<T> g = Mat<T>::Zero(n, n);
  for (Eigen::Index j = 0; j < m; ++j)
    for (Eigen::Index l = 0; l < n; ++l) {
      const T wl = w(j) * a(j, l);
      for (Eigen::Index k = 0; k < n; ++k) g(k, l) += conj(a(j, k)) * wl;
    }
  return g / static_cast<double>(m);
}

}  // namespace serial

namespace omp {

template <class T>
LossGradient<T> loss_gradient(const RowMat<T>& a, const Eigen::VectorXd& y,
                              const Vec<T>& z) {
  check_shapes(a, y, z.size(), "loss_gradient");
  const Eigen::Index m = a.rows(), n = a.cols();
  const Eigen::Index chunks = chunk_count(m);
  std::vector<double> loss_part(chunks, 0.0);
  std::vector<Vec<T>> grad_part(chunks);

#pragma omp parallel for schedule(static) if (chunks > 1 && !omp_in_parallel())
  for (Eigen::Index c = 0; c < chunks; ++c) {
    const Eigen::Index r0 = c * kChunkRows;
    const Eigen::Index len = std::min(kChunkRows, m - r0);
    const auto block = a.middleRows(r0, len);
    Vec<T> s = block * z;
    double acc = 0.0;
    for (Eigen::Index j = 0; j < len; ++j) {
      const double r = abs2(s(j)) - y(r0 + j);
      acc += r * r;
      s(j) *= r;
    }
    loss_part[c] = acc;
    grad_part[c].noalias() = block.adjoint() * s;
  }

  LossGradient<T> out;
  out.gradient = Vec<T>::Zero(n);
  for (Eigen::Index c = 0; c < chunks; ++c) {
    out.loss += loss_part[c];
    out.gradient += grad_part[c];
  }
  const double md = static_cast<double>(m);
  out.loss /= 2.0 * md;
  out.gradient /= md;
  return out;
}

template <class T>
Mat<T> weighted_gram(const RowMat<T>& a, const Eigen::VectorXd& w) {
  check_shapes(a, w, -1, "weighted_gram");
  const Eigen::Index m = a.rows(), n = a.cols();
  const Eigen::Index chunks = chunk_count(m);
  std::vector<Mat<T>> part(chunks);

#pragma omp parallel for schedule(static) if (chunks > 1 && !omp_in_parallel())
  for (Eigen::Index c = 0; c < chunks; ++c) {
    const Eigen::Index r0 = c * kChunkRows;
    const Eigen::Index len = std::min(kChunkRows, m - r0);
    const auto block = a.middleRows(r0, len);
    RowMat<T> scaled = w.segment(r0, len).asDiagonal() * block;
    part[c].noalias() = block.adjoint() * scaled;
  }

  Mat<T> g = Mat<T>::Zero(n, n);
  for (Eigen::Index c = 0; c < chunks; ++c) g += part[c];
  return g / static_cast<double>(m);
}

}  // namespace omp

void set_num_threads(int threads) {
  if (threads > 0) omp_set_num_threads(threads);
}

template LossGradient<double> serial::loss_gradient(const RowMat<double>&,
                                                    const Eigen::VectorXd&,
                                                    const Vec<double>&);
template LossGradient<cplx> serial::loss_gradient(const RowMat<cplx>&,
                                                  const Eigen::VectorXd&, const Vec<cplx>&);
template Mat<double> serial::weighted_gram(const RowMat<double>&, const Eigen::VectorXd&);
template Mat<cplx> serial::weighted_gram(const RowMat<cplx>&, const Eigen::VectorXd&);
template LossGradient<double> omp::loss_gradient(const RowMat<double>&,
                                                 const Eigen::VectorXd&,
                                                 const Vec<double>&);
template LossGradient<cplx> omp::loss_gradient(const RowMat<cplx>&, const Eigen::VectorXd&,
                                               const Vec<cplx>&);
template Mat<double> omp::weighted_gram(const RowMat<double>&, const Eigen::VectorXd&);
template Mat<cplx> omp::weighted_gram(const RowMat<cplx>&, const Eigen::VectorXd&);

}  // namespace prwf::kernels
