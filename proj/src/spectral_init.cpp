#include "prwf/spectral_init.hpp"

#include <cctype>
#include <cmath>
#include <string>

#include "prwf/errors.hpp"
#include "prwf/kernels.hpp"

namespace prwf {

std::string_view to_string(AlgorithmId id) {
  switch (id) {
    case AlgorithmId::A: return "A";
    case AlgorithmId::B: return "B";
    case AlgorithmId::C: return "C";
    case AlgorithmId::D: return "D";
  }
  return "?";
}

AlgorithmId parse_algorithm(std::string_view s) {
  if (s.size() == 1) {
    switch (std::toupper(static_cast<unsigned char>(s[0]))) {
      case 'A': return AlgorithmId::A;
      case 'B': return AlgorithmId::B;
      case 'C': return AlgorithmId::C;
      case 'D': return AlgorithmId::D;
      default: break;
    }
  }
  throw ArgumentError("unknown algorithm '" + std::string(s) + "'");
}

Field required_field(AlgorithmId id) {
  return (id == AlgorithmId::A || id == AlgorithmId::B) ? Field::complex : Field::real;
}

AlgorithmId auto_select_algorithm(const MeasurementEnsemble& e) {
  const bool fourth_moment = e.beta1 > 0.0;
  if (e.field == Field::complex) return fourth_moment ? AlgorithmId::A : AlgorithmId::B;
  return fourth_moment ? AlgorithmId::C : AlgorithmId::D;
}

void check_algorithm_params(AlgorithmId id, Field field, double beta1,
                            std::optional<double> beta2) {
  const std::string name = "algorithm " + std::string(to_string(id));
  if (field != required_field(id))
    throw ConfigError("algorithm", name + " requires a " +
                                       std::string(to_string(required_field(id))) +
                                       " ensemble");
  if ((id == AlgorithmId::A || id == AlgorithmId::C) && !(beta1 > 0.0))
    throw ConfigError("beta1", name + " requires beta1 > 0");
  if (!(beta1 >= 0.0)) throw ConfigError("beta1", name + " requires beta1 >= 0");
  if (id == AlgorithmId::A || id == AlgorithmId::B) {
    if (!beta2 || !(*beta2 > 0.0 && *beta2 <= 1.0))
      throw ConfigError("beta2", name + " requires beta2 in (0, 1]");
  }
}

MCoefficients m_coefficients(AlgorithmId id, double beta1, std::optional<double> beta2) {
  check_algorithm_params(id, required_field(id), beta1, beta2);
  MCoefficients c;
  switch (id) {
    case AlgorithmId::A: {
      const double b1 = beta1, b2 = *beta2;
      c.c_m0 = 1.0 / b2;
      c.c_diag = (2.0 - b1 - b2) / (b1 * (2.0 - b2));
      c.c_re = -(2.0 - 2.0 * b2) / (b2 * (2.0 - b2));
      c.c_identity = (b1 - 1.0) / b1;
      break;
    }
    case AlgorithmId::B: {
      const double b2 = *beta2;
      c.c_m0 = 1.0 / b2;
      c.c_re = -(2.0 - 2.0 * b2) / (b2 * (2.0 - b2));
      c.c_identity = (1.0 - b2) / (2.0 - b2);
      break;
    }
    case AlgorithmId::C:
      c.c_diag = (2.0 - beta1) / beta1;
      c.c_identity = (beta1 - 2.0) / beta1;
      break;
    case AlgorithmId::D:
      break;
  }
  return c;
}

template <class T>
std::pair<HermitianMatrix<T>, double> build_M0_and_gamma(const Instance<T>& inst) {
  inst.validate();
  Mat<T> m0 = kernels::omp::weighted_gram(inst.A, inst.y);
  return {HermitianMatrix<T>::symmetrized(std::move(m0)), inst.y.mean()};
}

template <class T>
HermitianMatrix<T> build_M(const HermitianMatrix<T>& M0, double gamma, AlgorithmId id,
                           double beta1, std::optional<double> beta2) {
  check_algorithm_params(id, field_of<T>(), beta1, beta2);
  const MCoefficients c = m_coefficients(id, beta1, beta2);
  const Mat<T>& m0 = M0.matrix();
  const Eigen::Index n = m0.rows();

  Mat<T> m = c.c_m0 * m0;
  if (c.c_re != 0.0) m += c.c_re * m0.real().template cast<T>();
  for (Eigen::Index k = 0; k < n; ++k)
    m(k, k) += c.c_diag * real_part(m0(k, k)) + c.c_identity * gamma;
  return HermitianMatrix<T>::symmetrized(std::move(m));
}

template <class T>
InitResult<T> scaled_leading_vector(const HermitianMatrix<T>& M, double gamma,
                                    std::uint64_t seed, bool check_dominance) {
  if (!(gamma > 0.0))
    throw InitializationError("spectral initialization: mean observation gamma = " +
                              std::to_string(gamma) + " is not positive");
  PowerIterationOptions opts;
  opts.seed = seed;
  EigenPair<T> top = leading_eigenpair(M, opts);

  InitResult<T> out;
  out.gamma = gamma;
  out.M_top_eigenvalue = top.value;
  out.power_iters = top.iterations;
  out.z0 = std::sqrt(gamma) * top.vector;

  if (check_dominance) {
    PowerIterationOptions loose = opts;
    loose.tolerance = 1e-6;
    loose.max_iterations = 2000;
    try {
      const double bottom = -leading_eigenpair(-M, loose).value;
      out.negative_dominant = std::abs(bottom) > std::abs(top.value);
    } catch (const ConvergenceError&) {
      out.negative_dominant.reset();
    }
  }
  return out;
}

template <class T>
InitResult<T> spectral_initialize(const Instance<T>& inst, AlgorithmId id, double beta1,
                                  std::optional<double> beta2, std::uint64_t seed,
                                  bool check_dominance) {
  auto [m0, gamma] = build_M0_and_gamma(inst);
  const HermitianMatrix<T> m = build_M(m0, gamma, id, beta1, beta2);
  return scaled_leading_vector(m, gamma, seed, check_dominance);
}

template std::pair<HermitianMatrix<double>, double> build_M0_and_gamma(
    const Instance<double>&);
template std::pair<HermitianMatrix<cplx>, double> build_M0_and_gamma(const Instance<cplx>&);
template HermitianMatrix<double> build_M(const HermitianMatrix<double>&, double,
                                         AlgorithmId, double, std::optional<double>);
template HermitianMatrix<cplx> build_M(const HermitianMatrix<cplx>&, double, AlgorithmId,
                                       double, std::optional<double>);
template InitResult<double> scaled_leading_vector(const HermitianMatrix<double>&, double,
                                                  std::uint64_t, bool);
template InitResult<cplx> scaled_leading_vector(const HermitianMatrix<cplx>&, double,
                                                std::uint64_t, bool);
template InitResult<double> spectral_initialize(const Instance<double>&, AlgorithmId,
                                                double, std::optional<double>,
                                                std::uint64_t, bool);
template InitResult<cplx> spectral_initialize(const Instance<cplx>&, AlgorithmId, double,
                                              std::optional<double>, std::uint64_t, bool);

}  // namespace prwf
