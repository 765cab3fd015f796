#include "prwf/instance.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "prwf/csv.hpp"
#include "prwf/errors.hpp"

namespace prwf {

template <class T>
void Instance<T>::validate() const {
  if (m() < 1 || n() < 1) throw ArgumentError("instance: m and n must be >= 1");
  if (y.size() != m() || xi.size() != m())
    throw DimensionError("instance: y/xi length must equal m = " + std::to_string(m()));
  if (z_star && z_star->size() != n())
    throw DimensionError("instance: z_star length must equal n = " + std::to_string(n()));
}

template <class T>
Vec<T> generate_signal(SignalKind kind, Eigen::Index n, Rng& rng,
                       const std::optional<Vec<T>>& payload) {
  if (n < 1) throw ArgumentError("generate_signal: n must be >= 1");
  if (kind == SignalKind::given) {
    if (!payload) throw ArgumentError("generate_signal: kind=given requires a payload");
    if (payload->size() != n)
      throw DimensionError("generate_signal: payload length " +
                           std::to_string(payload->size()) + " != n = " + std::to_string(n));
    return *payload;
  }
  return standard_normal_vector<T>(n, rng);
}

template <class T>
Vec<T> flat_signal(Eigen::Index n) {
  if (n < 1) throw ArgumentError("flat_signal: n must be >= 1");
  return Vec<T>::Constant(n, T(1.0 / std::sqrt(static_cast<double>(n))));
}

template <class T>
Instance<T> synthesize(const MeasurementEnsemble& e, const Vec<T>& z_star,
                       const NoiseSpec& noise, Eigen::Index m, std::uint64_t seed) {
  if (m < 1) throw ArgumentError("synthesize: m must be >= 1");
  if (noise.sigma_rel < 0.0) throw ArgumentError("synthesize: sigma_rel must be >= 0");
  const Eigen::Index n = z_star.size();
  if (n < 1) throw ArgumentError("synthesize: empty signal");

  Instance<T> inst;
  inst.ensemble_name = std::string(to_string(e.name));
  inst.seed = seed;
  inst.z_star = z_star;
  inst.A.resize(m, n);

  Rng matrix_rng(derive_trial_seed(seed, 0, StreamTag::matrix));
  for (Eigen::Index j = 0; j < m; ++j)
    inst.A.row(j) = sample_row<T>(e, n, matrix_rng).adjoint();

  inst.xi = Eigen::VectorXd::Zero(m);
  if (noise.kind == NoiseKind::gaussian && noise.sigma_rel > 0.0) {
    Rng noise_rng(derive_trial_seed(seed, 0, StreamTag::noise));
    const double sigma = noise.sigma_rel * z_star.squaredNorm();
    for (Eigen::Index j = 0; j < m; ++j) inst.xi(j) = sigma * noise_rng.normal();
  }

  const Vec<T> az = inst.A * z_star;
  inst.y.resize(m);
  for (Eigen::Index j = 0; j < m; ++j) inst.y(j) = abs2(az(j)) + inst.xi(j);
  return inst;
}

template <class T>
double mu_flatness(const Vec<T>& z) {
  const double total = z.squaredNorm();
  if (!(total > 0.0)) throw ArgumentError("mu_flatness: zero vector");
  return z.cwiseAbs2().maxCoeff() / total;
}

AdmissibilityReport noise_admissibility(const Eigen::VectorXd& xi, double z_norm_sq,
                                        Eigen::Index m, Eigen::Index /*n*/,
                                        const AdmissibilityThresholds& thresholds) {
  if (xi.size() != m)
    throw DimensionError("noise_admissibility: xi length must equal m");
  AdmissibilityReport r;
  if (m < 1) return r;
  const double md = static_cast<double>(m);
  const double log_m = std::max(1.0, std::log(md));
  r.sum_abs = std::abs(xi.sum()) / (md * z_norm_sq);
  r.l2_ratio = xi.norm() / (std::sqrt(md) * z_norm_sq);
  r.inf_ratio = xi.cwiseAbs().maxCoeff() / (log_m * z_norm_sq);
  r.sum_flag = r.sum_abs > thresholds.sum_abs;
  r.l2_flag = r.l2_ratio > thresholds.l2_ratio;
  r.inf_flag = r.inf_ratio > thresholds.inf_ratio;
  return r;
}

namespace {

template <class T>
void write_scalar(std::ostream& os, const T& v) {
  if constexpr (is_complex_v<T>)
    os << ' ' << format_double17(v.real()) << ' ' << format_double17(v.imag());
  else
    os << ' ' << format_double17(v);
}

double parse_number(std::istream& is, const char* what) {
  std::string tok;
  if (!(is >> tok)) throw IoError(std::string("instance file: missing ") + what);
  try {
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw IoError(std::string("instance file: bad number '") + tok + "' in " + what);
  }
}

template <class T>
T read_scalar(std::istream& is, const char* what) {
  if constexpr (is_complex_v<T>) {
    const double re = parse_number(is, what);
    const double im = parse_number(is, what);
    return {re, im};
  } else {
    return parse_number(is, what);
  }
}

template <class T>
Instance<T> read_body(std::istream& is, Eigen::Index m, Eigen::Index n, bool truth) {
  Instance<T> inst;
  std::string line;
  if (truth) {
    if (!std::getline(is, line)) throw IoError("instance file: missing z_star line");
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag != "z_star") throw IoError("instance file: expected z_star line");
    Vec<T> z(n);
    for (Eigen::Index k = 0; k < n; ++k) z(k) = read_scalar<T>(ls, "z_star");
    inst.z_star = std::move(z);
  }
  inst.A.resize(m, n);
  inst.y.resize(m);
  inst.xi.resize(m);
  for (Eigen::Index j = 0; j < m; ++j) {
    if (!std::getline(is, line))
      throw IoError("instance file: expected " + std::to_string(m) + " rows, got " +
                    std::to_string(j));
    std::istringstream ls(line);
    inst.y(j) = parse_number(ls, "y");
    inst.xi(j) = parse_number(ls, "xi");
    for (Eigen::Index k = 0; k < n; ++k) inst.A(j, k) = read_scalar<T>(ls, "row");
    std::string extra;
    if (ls >> extra) throw IoError("instance file: trailing data on row " + std::to_string(j));
  }
  return inst;
}

}  // namespace

template <class T>
void save_instance(std::ostream& os, const Instance<T>& inst) {
  inst.validate();
  os << "prwf-instance field=" << to_string(field_of<T>()) << " m=" << inst.m()
     << " n=" << inst.n() << " ensemble=" << inst.ensemble_name << " seed=" << inst.seed
     << " truth=" << (inst.z_star ? 1 : 0) << '\n';
  if (inst.z_star) {
    os << "z_star";
    for (Eigen::Index k = 0; k < inst.n(); ++k) write_scalar(os, (*inst.z_star)(k));
    os << '\n';
  }
  for (Eigen::Index j = 0; j < inst.m(); ++j) {
    os << format_double17(inst.y(j)) << ' ' << format_double17(inst.xi(j));
    for (Eigen::Index k = 0; k < inst.n(); ++k) write_scalar(os, inst.A(j, k));
    os << '\n';
  }
}

AnyInstance load_instance(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw IoError("instance file: empty");
  std::istringstream hs(line);
  std::string magic;
  hs >> magic;
  if (magic != "prwf-instance") throw IoError("instance file: bad header");
  std::map<std::string, std::string> kv;
  for (std::string tok; hs >> tok;) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) throw IoError("instance file: bad header token " + tok);
    kv[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  for (const char* key : {"field", "m", "n", "ensemble", "seed", "truth"})
    if (!kv.count(key)) throw IoError(std::string("instance file: header lacks ") + key);

  Eigen::Index m = 0, n = 0;
  std::uint64_t seed = 0;
  try {
    m = std::stol(kv["m"]);
    n = std::stol(kv["n"]);
    seed = std::stoull(kv["seed"]);
  } catch (const std::exception&) {
    throw IoError("instance file: bad m/n/seed in header");
  }
  if (m < 1 || n < 1) throw IoError("instance file: m and n must be >= 1");
  const bool truth = kv["truth"] == "1";

  auto finish = [&](auto inst) -> AnyInstance {
    inst.ensemble_name = kv["ensemble"];
    inst.seed = seed;
    inst.validate();
    return inst;
  };
  if (kv["field"] == "complex") return finish(read_body<cplx>(is, m, n, truth));
  if (kv["field"] == "real") return finish(read_body<double>(is, m, n, truth));
  throw IoError("instance file: unknown field " + kv["field"]);
}

template <class T>
void save_instance_file(const std::filesystem::path& path, const Instance<T>& inst) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot write " + path.string());
  save_instance(os, inst);
  if (!os) throw IoError("write failed: " + path.string());
}

AnyInstance load_instance_file(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot read " + path.string());
  return load_instance(is);
}

template struct Instance<double>;
template struct Instance<cplx>;
template Vec<double> generate_signal(SignalKind, Eigen::Index, Rng&,
                                     const std::optional<Vec<double>>&);
template Vec<cplx> generate_signal(SignalKind, Eigen::Index, Rng&,
                                   const std::optional<Vec<cplx>>&);
template Vec<double> flat_signal<double>(Eigen::Index);
template Vec<cplx> flat_signal<cplx>(Eigen::Index);
template Instance<double> synthesize(const MeasurementEnsemble&, const Vec<double>&,
                                     const NoiseSpec&, Eigen::Index, std::uint64_t);
template Instance<cplx> synthesize(const MeasurementEnsemble&, const Vec<cplx>&,
                                   const NoiseSpec&, Eigen::Index, std::uint64_t);
template double mu_flatness(const Vec<double>&);
template double mu_flatness(const Vec<cplx>&);
template void save_instance(std::ostream&, const Instance<double>&);
template void save_instance(std::ostream&, const Instance<cplx>&);
template void save_instance_file(const std::filesystem::path&, const Instance<double>&);
template void save_instance_file(const std::filesystem::path&, const Instance<cplx>&);

}  // namespace prwf
