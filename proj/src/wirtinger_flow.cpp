#include "prwf/wirtinger_flow.hpp"

#include <cmath>
#include <ostream>

#include "prwf/csv.hpp"
#include "prwf/errors.hpp"
#include "prwf/kernels.hpp"

namespace prwf {

std::string_view to_string(EtaMode m) {
  return m == EtaMode::gamma_scaled ? "gamma_scaled" : "fixed";
}

std::string_view to_string(StopReason r) {
  return r == StopReason::max_iters ? "max_iters" : "grad_tol";
}

void SolverConfig::validate() const {
  if (!(eta0 > 0.0) || !std::isfinite(eta0)) throw ConfigError("eta0", "must be > 0");
  if (max_iters < 1) throw ConfigError("max_iters", "must be >= 1");
  if (record_every < 1) throw ConfigError("record_every", "must be >= 1");
  if (!(grad_tol >= 0.0)) throw ConfigError("grad_tol", "must be >= 0");
}

namespace {

template <class T>
void require_dim(const Instance<T>& inst, const Vec<T>& z, const char* what) {
  if (z.size() != inst.n())
    throw DimensionError(std::string(what) + ": z has length " + std::to_string(z.size()) +
                         ", instance has n = " + std::to_string(inst.n()));
}

}  // namespace

template <class T>
double loss(const Instance<T>& inst, const Vec<T>& z) {
  require_dim(inst, z, "loss");
  return kernels::omp::loss_gradient(inst.A, inst.y, z).loss;
}

template <class T>
Vec<T> wirtinger_gradient(const Instance<T>& inst, const Vec<T>& z) {
  require_dim(inst, z, "wirtinger_gradient");
  return kernels::omp::loss_gradient(inst.A, inst.y, z).gradient;
}

template <class T>
HermitianMatrix<T> wirtinger_hessian(const Instance<T>& inst, const Vec<T>& z) {
  require_dim(inst, z, "wirtinger_hessian");
  const Eigen::Index m = inst.m(), n = inst.n();
  const Vec<T> s = inst.A * z;
  Eigen::VectorXd w(m);

  if constexpr (is_complex_v<T>) {
    for (Eigen::Index j = 0; j < m; ++j) w(j) = 2.0 * abs2(s(j)) - inst.y(j);
    const Mat<T> diag_block = kernels::omp::weighted_gram(inst.A, w);
    // (a_j^H z)^2 a_j a_j^T summed: A^H diag(s^2) conj(A).
    const Vec<T> sq = s.array().square().matrix();
    const RowMat<T> scaled = sq.asDiagonal() * inst.A.conjugate();
    const Mat<T> off_block = inst.A.adjoint() * scaled / static_cast<double>(m);

    Mat<T> h(2 * n, 2 * n);
    h.topLeftCorner(n, n) = diag_block;
    h.topRightCorner(n, n) = off_block;
    h.bottomLeftCorner(n, n) = off_block.adjoint();
    h.bottomRightCorner(n, n) = diag_block.conjugate();
    return HermitianMatrix<T>::symmetrized(std::move(h));
  } else {
    for (Eigen::Index j = 0; j < m; ++j) w(j) = 3.0 * s(j) * s(j) - inst.y(j);
    return HermitianMatrix<T>::symmetrized(kernels::omp::weighted_gram(inst.A, w));
  }
}

template <class T>
std::optional<double> relative_error(const Instance<T>& inst, const Vec<T>& z) {
  if (!inst.z_star) return std::nullopt;
  const double scale = inst.z_star->norm();
  if (!(scale > 0.0)) return std::nullopt;
  return ambiguity_distance(z, *inst.z_star) / scale;
}

template <class T>
RunTrace<T> run_wf(const Instance<T>& inst, const Vec<T>& z0, const SolverConfig& cfg,
                   double gamma) {
  cfg.validate();
  inst.validate();
  require_dim(inst, z0, "run_wf");
  if (!(z0.norm() > 0.0)) throw ArgumentError("run_wf: z0 must be nonzero");

  double eta = cfg.eta0;
  if (cfg.eta_mode == EtaMode::gamma_scaled) {
    if (!(gamma > 0.0))
      throw ArgumentError("run_wf: gamma-scaled step needs gamma > 0, got " +
                          std::to_string(gamma));
    eta = cfg.eta0 / gamma;
  }

  RunTrace<T> trace;
  Vec<T> z = z0;
  int t = 0;
  for (;; ++t) {
    auto lg = kernels::omp::loss_gradient(inst.A, inst.y, z);
    if (!std::isfinite(lg.loss) || !lg.gradient.allFinite())
      throw DivergenceError("run_wf: non-finite loss or gradient at iteration " +
                                std::to_string(t),
                            t);
    const bool last = t == cfg.max_iters;
    const bool small_grad = cfg.grad_tol > 0.0 && lg.gradient.norm() <= cfg.grad_tol;
    if (t % cfg.record_every == 0 || last || small_grad)
      trace.iterations.push_back({t, relative_error(inst, z), lg.loss});
    if (small_grad) {
      trace.converged_reason = StopReason::grad_tol;
      break;
    }
    if (last) {
      trace.converged_reason = StopReason::max_iters;
      break;
    }
    z.noalias() -= eta * lg.gradient;
  }
  trace.iters = t;
  trace.final_z = std::move(z);
  return trace;
}

void write_trace_csv(std::ostream& os, const std::vector<TraceRecord>& records,
                     const std::string& comment) {
  if (!comment.empty()) os << "# " << comment << '\n';
  os << "iter,relative_error,loss\n";
  for (const auto& r : records)
    os << r.iter << ',' << format_optional(r.relative_error) << ','
       << format_double(r.loss) << '\n';
}

template double loss(const Instance<double>&, const Vec<double>&);
template double loss(const Instance<cplx>&, const Vec<cplx>&);
template Vec<double> wirtinger_gradient(const Instance<double>&, const Vec<double>&);
template Vec<cplx> wirtinger_gradient(const Instance<cplx>&, const Vec<cplx>&);
template HermitianMatrix<double> wirtinger_hessian(const Instance<double>&,
                                                   const Vec<double>&);
template HermitianMatrix<cplx> wirtinger_hessian(const Instance<cplx>&, const Vec<cplx>&);
template std::optional<double> relative_error(const Instance<double>&, const Vec<double>&);
template std::optional<double> relative_error(const Instance<cplx>&, const Vec<cplx>&);
template RunTrace<double> run_wf(const Instance<double>&, const Vec<double>&,
                                 const SolverConfig&, double);
template RunTrace<cplx> run_wf(const Instance<cplx>&, const Vec<cplx>&, const SolverConfig&,
                               double);

}  // namespace prwf
