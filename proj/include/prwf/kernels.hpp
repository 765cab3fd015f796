#pragma once

#include "prwf/linalg.hpp"

// Data-parallel kernels over the m measurement rows.
//
// `serial::` holds straightforward reference loops kept for testing and
// benchmarking. `omp::` partitions the rows into fixed chunks of kChunkRows,
// evaluates each chunk independently (OpenMP over chunks) and adds the chunk
// partials in chunk order. The partition does not depend on the thread count,
// so omp:: results are bit-identical for any number of threads.

namespace prwf::kernels {

inline constexpr Eigen::Index kChunkRows = 256;

template <class T>
struct LossGradient {
  /// (1/2m) sum_j (|a_j^H z|^2 - y_j)^2
  double loss = 0.0;
  /// (1/m) sum_j (|a_j^H z|^2 - y_j) a_j a_j^H z
  Vec<T> gradient;
};

namespace serial {

template <class T>
LossGradient<T> loss_gradient(const RowMat<T>& a, const Eigen::VectorXd& y,
                              const Vec<T>& z);

/// (1/m) sum_j w_j a_j a_j^H, not symmetrized.
template <class T>
Mat<T> weighted_gram(const RowMat<T>& a, const Eigen::VectorXd& w);

}  // namespace serial

namespace omp {

template <class T>
LossGradient<T> loss_gradient(const RowMat<T>& a, const Eigen::VectorXd& y,
                              const Vec<T>& z);

template <class T>
Mat<T> weighted_gram(const RowMat<T>& a, const Eigen::VectorXd& w);

}  // namespace omp

/// Number of OpenMP threads the omp:: kernels may use (0 = runtime default).
void set_num_threads(int threads);

}  // namespace prwf::kernels
