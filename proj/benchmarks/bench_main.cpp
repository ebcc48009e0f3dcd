#include <benchmark/benchmark.h>

#include "ffmop/model.hpp"
#include "ffmop/mop.hpp"
#include "ffmop/polynomial.hpp"
#include "ffmop/rmt.hpp"
#include "ffmop/specialfn.hpp"
#include "ffmop/transform.hpp"

using namespace ffmop;

static void BM_MellinNumeric(benchmark::State& state) {
  QuadratureConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(mellin_numeric(BetaDensity{1, 3}, cplx(2.5, 1.0), cfg));
}
BENCHMARK(BM_MellinNumeric);

static void BM_LaplaceNumeric(benchmark::State& state) {
  QuadratureConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(laplace_numeric(BeDensity{1, 0.5, 0.7, 2}, cplx(1.5), cfg));
}
BENCHMARK(BM_LaplaceNumeric);

static void BM_AiValue(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(ai_value(1, 0.5, 0.4));
}
BENCHMARK(BM_AiValue);

static void BM_FfMulConv(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::vector<double> r(n);
  for (int i = 0; i < n; ++i) r[i] = 0.5 + i;
  Poly p = from_roots(r);
  for (auto _ : state) benchmark::DoNotOptimize(ff_mul_conv(p, p, n));
}
BENCHMARK(BM_FfMulConv)->Arg(4)->Arg(16)->Arg(64);

static void BM_FfAddConv(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::vector<double> r(n);
  for (int i = 0; i < n; ++i) r[i] = 0.5 + i;
  Poly p = from_roots(r);
  for (auto _ : state) benchmark::DoNotOptimize(ff_add_conv(p, p, n));
}
BENCHMARK(BM_FfAddConv)->Arg(4)->Arg(16)->Arg(64);

static void BM_MopMdt(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto spec = specs::gamma_product({0, 0.5, 1});
  for (auto _ : state) benchmark::DoNotOptimize(mop_mdt(spec, n));
}
BENCHMARK(BM_MopMdt)->Arg(4)->Arg(16);

static void BM_MopAdt(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto spec = specs::gaussian_lue_mixture();
  for (auto _ : state) benchmark::DoNotOptimize(mop_adt(spec, n));
}
BENCHMARK(BM_MopAdt)->Arg(4)->Arg(16);

static void BM_OrthogonalityResiduals(benchmark::State& state) {
  auto spec = specs::jue(1, 3);
  Poly p = mop_mdt(spec, 4);
  for (auto _ : state) benchmark::DoNotOptimize(orthogonality_residuals(p, spec, 4));
}
BENCHMARK(BM_OrthogonalityResiduals)->Unit(benchmark::kMillisecond);

static void BM_HermitianEigenvalues(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  RngState rng(1);
  auto h = sample_gue(rng, n);
  for (auto _ : state) benchmark::DoNotOptimize(hermitian_eigenvalues(h));
}
BENCHMARK(BM_HermitianEigenvalues)->Arg(4)->Arg(16)->Arg(32);

static void BM_HaarUnitary(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  RngState rng(2);
  for (auto _ : state) benchmark::DoNotOptimize(sample_haar_unitary(rng, n));
}
BENCHMARK(BM_HaarUnitary)->Arg(4)->Arg(16);

static void BM_ExpectedCharPoly(benchmark::State& state) {
  auto model = parse_model("ssv(prod(ginibre(3,3), ginibre(3,3)))");
  for (auto _ : state) benchmark::DoNotOptimize(expected_char_poly(model, 3, 10000, 7, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_ExpectedCharPoly)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

static void BM_SamplePeDirect(benchmark::State& state) {
  RngState rng(3);
  auto pe = pe_from_density(BetaDensity{1, 3}, 2);
  for (auto _ : state) benchmark::DoNotOptimize(sample_pe_direct(rng, pe, 1000));
}
BENCHMARK(BM_SamplePeDirect)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
