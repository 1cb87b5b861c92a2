#include <benchmark/benchmark.h>

#include <lina/mdlina.hpp>
#include <lina/synth.hpp>
#include <lina/triad.hpp>

#include <random>

using namespace lina;

namespace {

Matrix random_square(int q, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix B(q, q);
  for (int j = 0; j < q; ++j)
    for (int i = 0; i < q; ++i) B(i, j) = u(rng);
  return B;
}

void BM_acyclicity_h(benchmark::State& state) {
  const int q = static_cast<int>(state.range(0));
  const Matrix B = random_square(q, 1);
  for (auto _ : state) benchmark::DoNotOptimize(acyclicity_h(B));
}
BENCHMARK(BM_acyclicity_h)->Arg(5)->Arg(10)->Arg(25)->Arg(50);

void BM_acyclicity_grad(benchmark::State& state) {
  const int q = static_cast<int>(state.range(0));
  const Matrix B = random_square(q, 2);
  for (auto _ : state) benchmark::DoNotOptimize(acyclicity_grad(B));
}
BENCHMARK(BM_acyclicity_grad)->Arg(5)->Arg(10)->Arg(25);

void BM_hsic(benchmark::State& state) {
  const long n = state.range(0);
  std::mt19937 rng(3);
  std::normal_distribution<double> g;
  Vector u(n), v(n);
  for (long i = 0; i < n; ++i) {
    u[i] = g(rng);
    v[i] = g(rng);
  }
  IndependenceTestConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(independence_test(u, v, cfg));
}
BENCHMARK(BM_hsic)->Arg(200)->Arg(500)->Arg(1000);

void BM_fit_structure(benchmark::State& state) {
  GenConfig cfg;
  cfg.q = static_cast<int>(state.range(0));
  cfg.n = state.range(1);
  cfg.seed = 4;
  const GroundTruth gt = gen_single(cfg);
  Matrix X = gt.X;
  standardize_in_place(X);
  const MeasurementModel model = fit_cfa(X, gt.clusters);
  Hyperparams hp;
  for (auto _ : state)
    benchmark::DoNotOptimize(fit_structure(model, X, hp));
}
BENCHMARK(BM_fit_structure)
    ->Args({3, 500})
    ->Args({5, 1000})
    ->Unit(benchmark::kMillisecond);

void BM_fit_md(benchmark::State& state) {
  GenConfig cfg;
  cfg.q = 2;
  cfg.n = state.range(0);
  cfg.edge_density = 1.0;
  cfg.seed = 5;
  const MultiDomainTruth mdt = gen_multidomain(2, cfg, true, 5);
  MultiDomainDataset std_md;
  for (const auto& d : mdt.data.domains) std_md.domains.push_back(standardize(d));
  const AugmentedDataset aug = augment(std_md);
  ClusterSpec spec;
  for (int d = 0; d < 2; ++d)
    for (const auto& c : mdt.truths[d].clusters.clusters) {
      std::vector<int> shifted;
      for (int v : c) shifted.push_back(v + d * 4);
      spec.clusters.push_back(shifted);
    }
  const MeasurementModel model = fit_cfa(aug.data, spec);
  Hyperparams hp;
  hp.threshold_eps = 0.05;
  for (auto _ : state)
    benchmark::DoNotOptimize(fit_md(model, aug, 2, hp));
}
BENCHMARK(BM_fit_md)->Arg(500)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
