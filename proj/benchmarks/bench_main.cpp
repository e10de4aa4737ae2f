#include <benchmark/benchmark.h>

#include <random>

#include "isoperim/bellman.hpp"
#include "isoperim/certificate.hpp"
#include "isoperim/claims.hpp"
#include "isoperim/cube_oracle.hpp"
#include "isoperim/gaussian_profile.hpp"

using namespace isoperim;

namespace {

void BM_IntervalMulAdd(benchmark::State& state) {
  PrecisionScope s{Precision(static_cast<int>(state.range(0)))};
  const Interval a(0.3, 0.31), b(-1.0, 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(a * b + a);
}
BENCHMARK(BM_IntervalMulAdd)->Arg(64)->Arg(256);

void BM_Quantile(benchmark::State& state) {
  PrecisionScope s{Precision(static_cast<int>(state.range(0)))};
  const Interval x = Interval::from_literal("0.975");
  for (auto _ : state) benchmark::DoNotOptimize(norm_quantile(x));
}
BENCHMARK(BM_Quantile)->Arg(64)->Arg(128)->Arg(512);

void BM_J(benchmark::State& state) {
  const BellmanParams& p = BellmanParams::defaults();
  const Interval x(0.7, 0.7001);
  for (auto _ : state) benchmark::DoNotOptimize(j_value(x, p));
}
BENCHMARK(BM_J);

// One bound evaluation on a small box in the middle of each region.
void BM_BoundFunction(benchmark::State& state) {
  const ClaimSpec& c = registered_claims()[static_cast<std::size_t>(state.range(0))];
  Box b = c.box();
  for (int axis = 0; axis < b.dim; ++axis) {
    const double mid = (b.lo[axis] + b.hi[axis]) / 2, w = (b.hi[axis] - b.lo[axis]) / 1024;
    b.lo[axis] = mid;
    b.hi[axis] = mid + w;
  }
  const BellmanParams& p = BellmanParams::defaults();
  state.SetLabel(c.id);
  for (auto _ : state) benchmark::DoNotOptimize(c.bound(b, p));
}
BENCHMARK(BM_BoundFunction)->DenseRange(0, 8);

void BM_VerifyClaim(benchmark::State& state) {
  const ClaimSpec& c = find_claim("LJ1");
  for (auto _ : state) benchmark::DoNotOptimize(verify_claim(c, default_w(), SubdivisionOptions{}));
}
BENCHMARK(BM_VerifyClaim)->Unit(benchmark::kMillisecond);

void BM_BoundaryProfile(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  CubeSet a = CubeSet::hamming_ball(n, n / 2);
  for (auto _ : state) benchmark::DoNotOptimize(boundary_profile(a));
}
BENCHMARK(BM_BoundaryProfile)->Arg(8)->Arg(16)->Unit(benchmark::kMicrosecond);

void BM_NoiseOperator(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(1);
  const auto f = random_balanced(n, rng);
  const std::vector<long double> fl(f.begin(), f.end());
  for (auto _ : state) benchmark::DoNotOptimize(noise_operator(fl, n, 0.98L));
}
BENCHMARK(BM_NoiseOperator)->Arg(10)->Arg(16)->Unit(benchmark::kMicrosecond);

void BM_MainTheoremExhaustive(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(check_main_theorem(4));
}
BENCHMARK(BM_MainTheoremExhaustive)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
