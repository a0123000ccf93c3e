#include <benchmark/benchmark.h>

#include "codedfl/gradient_code.hpp"

using namespace codedfl;

namespace {

void BuildEncoding(benchmark::State& state) {
  const int gamma = int(state.range(0));
  const fxp::FxConfig cfg(48, 24);
  std::uint64_t seed = 1;
  for (auto _ : state) {
    auto code = coding::build_encoding(gamma - 2, gamma, cfg, seed++);
    benchmark::DoNotOptimize(code);
  }
}
BENCHMARK(BuildEncoding)->Arg(8)->Arg(16)->Arg(25);

void DecodeVector(benchmark::State& state) {
  const int gamma = int(state.range(0));
  const fxp::FxConfig cfg(48, 24);
  const auto code = coding::build_encoding(gamma - 2, gamma, cfg, 9);
  std::vector<int> survivors{0, gamma / 2, gamma - 1};
  for (auto _ : state) {
    auto dv = coding::decode_vector(code, survivors);
    benchmark::DoNotOptimize(dv);
  }
}
BENCHMARK(DecodeVector)->Arg(8)->Arg(16)->Arg(25);

}  // namespace

BENCHMARK_MAIN();
