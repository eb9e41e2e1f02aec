#include <vector>

#include <benchmark/benchmark.h>

#include "polybound/bounds.hpp"
#include "polybound/oracle.hpp"

namespace {

using namespace polybound;

Instance table_instance(std::size_t n, int d, std::size_t t, std::uint64_t seed) {
  InstanceSpec spec;
  spec.n = n;
  spec.d = d;
  spec.t = t;
  spec.seed = seed;
  return generate_instance(spec);
}

void BM_EllipsoidBound(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto d = static_cast<int>(state.range(1));
  const auto t = static_cast<std::size_t>(state.range(2));
  const Instance inst = table_instance(n, d, t, 1);
  for (auto _ : state) benchmark::DoNotOptimize(ellipsoid_lower_bound(inst.f, inst.cs).bound);
}
BENCHMARK(BM_EllipsoidBound)
    ->Args({5, 10, 20})
    ->Args({10, 20, 50})
    ->Args({20, 20, 50})
    ->Unit(benchmark::kMillisecond);

void BM_GpBound(benchmark::State& state) {
  const Polynomial f = parse_polynomial("x1^40 + x2^40 + x3^40 - x1*x2*x3", 3);
  for (auto _ : state) benchmark::DoNotOptimize(gp_lower_bound(f, 40).bound);
}
BENCHMARK(BM_GpBound)->Unit(benchmark::kMicrosecond);

void BM_Parse(benchmark::State& state) {
  const std::string text = table_instance(10, 20, 100, 3).f.to_string();
  for (auto _ : state) benchmark::DoNotOptimize(parse_polynomial(text, 10));
}
BENCHMARK(BM_Parse);

void BM_Evaluate(benchmark::State& state) {
  const Polynomial f = table_instance(10, 20, 100, 4).f;
  const std::vector<double> x(10, 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(f.evaluate(x));
}
BENCHMARK(BM_Evaluate);

}  // namespace

BENCHMARK_MAIN();
