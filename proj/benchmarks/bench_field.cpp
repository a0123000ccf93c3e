#include <benchmark/benchmark.h>

#include "codedfl/prime_field.hpp"
#include "codedfl/rng.hpp"

using namespace codedfl;

namespace {

void FieldMul(benchmark::State& state) {
  const field::PrimeField f = field::PrimeField::for_fixed_point(fxp::FxConfig(48, 24));
  Rng rng = make_rng(3);
  const field::u128 a = f.sample(rng);
  field::u128 b = f.sample(rng);
  for (auto _ : state) {
    b = f.mul(a, b);
    benchmark::DoNotOptimize(b);
  }
}
BENCHMARK(FieldMul);

void FieldMatmul(benchmark::State& state) {
  const int d = int(state.range(0));
  const field::PrimeField f = field::PrimeField::for_fixed_point(fxp::FxConfig(48, 24));
  Rng rng = make_rng(4);
  field::FieldMatrix a(d, d), b(d, 10);
  for (auto& v : a.data()) v = f.sample(rng);
  for (auto& v : b.data()) v = f.sample(rng);
  for (auto _ : state) {
    auto out = field::matmul(f, a, b);
    benchmark::DoNotOptimize(out);
  }
  state.SetComplexityN(d);
}
BENCHMARK(FieldMatmul)->Arg(64)->Arg(128)->Arg(256)->Complexity();

void FieldInverse(benchmark::State& state) {
  const field::PrimeField f = field::PrimeField::for_fixed_point(fxp::FxConfig(48, 24));
  Rng rng = make_rng(5);
  field::u128 a = f.sample(rng);
  for (auto _ : state) {
    a = f.inv(a == 0 ? 1 : a);
    benchmark::DoNotOptimize(a);
  }
}
BENCHMARK(FieldInverse);

}  // namespace
