#include <benchmark/benchmark.h>

#include "codedfl/fixed_point.hpp"
#include "codedfl/rng.hpp"

using namespace codedfl;

namespace {

fxp::FxMatrix random_fx(int rows, int cols, const fxp::FxConfig& cfg, Rng& rng) {
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  fxp::FxMatrix m(rows, cols, cfg);
  for (auto& v : m.raw_data()) v = fxp::quantize(dist(rng), cfg).raw;
  return m;
}

void FxMatmul(benchmark::State& state) {
  const int d = int(state.range(0));
  const fxp::FxConfig cfg(48, 24);
  Rng rng = make_rng(1);
  const auto a = random_fx(d, d, cfg, rng);
  const auto b = random_fx(d, 10, cfg, rng);
  for (auto _ : state) {
    auto out = fxp::matmul(a, b);
    benchmark::DoNotOptimize(out);
  }
  state.SetComplexityN(d);
}
BENCHMARK(FxMatmul)->Arg(64)->Arg(128)->Arg(256)->Complexity();

void PadApply(benchmark::State& state) {
  const int d = int(state.range(0));
  const fxp::FxConfig cfg(48, 24);
  Rng rng = make_rng(2);
  const auto m = random_fx(d, d, cfg, rng);
  const auto pad = fxp::make_pad(d, d, cfg, true, rng);
  for (auto _ : state) {
    auto out = fxp::pad_apply(m, pad);
    benchmark::DoNotOptimize(out);
  }
}
BENCHMARK(PadApply)->Arg(256);

}  // namespace
