#include <benchmark/benchmark.h>

#include <vector>

#include "fa4p/diagnostics.hpp"
#include "fa4p/model.hpp"
#include "fa4p/probability.hpp"
#include "fa4p/random.hpp"
#include "fa4p/sampler.hpp"
#include "fa4p/simulate.hpp"

namespace {

std::vector<fa4p::FAItemParams> bench_items(std::size_t m) {
  std::vector<fa4p::FAItemParams> items;
  for (std::size_t i = 0; i < m; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(m);
    items.emplace_back(0.4 + 0.4 * t, -1.0 + 2.0 * t, 0.05 + 0.1 * t, 0.9 + 0.08 * t);
  }
  return items;
}

void BM_LinkCdf(benchmark::State& state) {
  const auto link = static_cast<fa4p::LinkFunction>(state.range(0));
  double x = -3.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fa4p::link_cdf(link, x));
    x = x > 3.0 ? -3.0 : x + 1e-3;
  }
}
BENCHMARK(BM_LinkCdf)
    ->Arg(static_cast<int>(fa4p::LinkFunction::Logistic))
    ->Arg(static_cast<int>(fa4p::LinkFunction::NormalOgive));

void BM_MarginalProduct(benchmark::State& state) {
  const auto items = bench_items(static_cast<std::size_t>(state.range(0)));
  const fa4p::ResponsePattern y = fa4p::pattern_from_index(0x5555, items.size());
  const auto& rule = fa4p::default_quadrature();
  for (auto _ : state) {
    benchmark::DoNotOptimize(fa4p::marginal_pattern_prob_fa_product(
        y, items, fa4p::LinkFunction::Logistic, rule));
  }
}
BENCHMARK(BM_MarginalProduct)->Arg(4)->Arg(20)->Arg(60);

// Exponential in m; kept small.
void BM_MarginalEnum(benchmark::State& state) {
  const auto items = bench_items(static_cast<std::size_t>(state.range(0)));
  const fa4p::ResponsePattern y = fa4p::pattern_from_index(0x55, items.size());
  const auto& rule = fa4p::default_quadrature();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        fa4p::marginal_pattern_prob_fa_enum(y, items, fa4p::LinkFunction::Logistic, rule));
  }
}
BENCHMARK(BM_MarginalEnum)->Arg(4)->Arg(8);

void BM_GaussHermite(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(fa4p::gauss_hermite(static_cast<int>(state.range(0))));
}
BENCHMARK(BM_GaussHermite)->Arg(61);

void BM_Sweep(benchmark::State& state) {
  const auto items = bench_items(20);
  const auto data =
      fa4p::simulate(items, static_cast<std::size_t>(state.range(0)), fa4p::LinkFunction::Logistic, 11)
          .matrix();
  fa4p::SamplerConfig config;
  config.seed = 11;
  auto chain = fa4p::init_chain(data, config, 0);
  for (auto _ : state) fa4p::sweep(chain, data, config);
  state.SetItemsProcessed(state.iterations() * state.range(0) * 20);
}
BENCHMARK(BM_Sweep)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_SplitRhat(benchmark::State& state) {
  fa4p::Engine rng(3);
  std::vector<std::vector<double>> chains(2, std::vector<double>(4000));
  for (auto& c : chains)
    for (auto& v : c) v = fa4p::std_normal(rng);
  for (auto _ : state) benchmark::DoNotOptimize(fa4p::split_rhat(chains));
}
BENCHMARK(BM_SplitRhat);

void BM_Ess(benchmark::State& state) {
  fa4p::Engine rng(4);
  std::vector<double> trace(4000);
  for (auto& v : trace) v = fa4p::std_normal(rng);
  for (auto _ : state) benchmark::DoNotOptimize(fa4p::ess(trace));
}
BENCHMARK(BM_Ess);

}  // namespace

BENCHMARK_MAIN();
