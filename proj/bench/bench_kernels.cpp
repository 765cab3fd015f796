#include <benchmark/benchmark.h>

#include "prwf/ensembles.hpp"
#include "prwf/instance.hpp"
#include "prwf/kernels.hpp"

namespace {

using prwf::cplx;

prwf::Instance<cplx> make_instance(Eigen::Index m, Eigen::Index n) {
  prwf::Rng rng(11);
  const prwf::Vec<cplx> z = prwf::standard_normal_vector<cplx>(n, rng);
  return prwf::synthesize(prwf::ensemble(prwf::EnsembleName::complex_gaussian), z,
                          prwf::NoiseSpec{}, m, 12);
}

template <bool Parallel>
void BM_LossGradient(benchmark::State& state) {
  const Eigen::Index n = state.range(0), m = 10 * n;
  const auto inst = make_instance(m, n);
  prwf::Rng rng(13);
  const prwf::Vec<cplx> z = prwf::standard_normal_vector<cplx>(n, rng);
  for (auto _ : state) {
    if constexpr (Parallel)
      benchmark::DoNotOptimize(prwf::kernels::omp::loss_gradient(inst.A, inst.y, z));
    else
      benchmark::DoNotOptimize(prwf::kernels::serial::loss_gradient(inst.A, inst.y, z));
  }
  state.SetItemsProcessed(state.iterations() * m);
}

template <bool Parallel>
void BM_WeightedGram(benchmark::State& state) {
  const Eigen::Index n = state.range(0), m = 10 * n;
  const auto inst = make_instance(m, n);
  for (auto _ : state) {
    if constexpr (Parallel)
      benchmark::DoNotOptimize(prwf::kernels::omp::weighted_gram(inst.A, inst.y));
    else
      benchmark::DoNotOptimize(prwf::kernels::serial::weighted_gram(inst.A, inst.y));
  }
  state.SetItemsProcessed(state.iterations() * m);
}

}  // namespace

BENCHMARK(BM_LossGradient<false>)->Arg(100)->Arg(200)->Arg(400);
BENCHMARK(BM_LossGradient<true>)->Arg(100)->Arg(200)->Arg(400);
BENCHMARK(BM_WeightedGram<false>)->Arg(50)->Arg(100)->Arg(200);
BENCHMARK(BM_WeightedGram<true>)->Arg(50)->Arg(100)->Arg(200);

BENCHMARK_MAIN();
