#include <benchmark/benchmark.h>

#include "codedfl/rng.hpp"
#include "codedfl/secret_sharing.hpp"

using namespace codedfl;

namespace {

void ShareMatrix(benchmark::State& state) {
  const int d = int(state.range(0));
  const field::PrimeField f = field::PrimeField::for_fixed_point(fxp::FxConfig(48, 24));
  Rng rng = make_rng(6);
  field::FieldMatrix secret(d, d);
  for (auto& v : secret.data()) v = f.sample(rng);
  for (auto _ : state) {
    auto shares = secret::share_matrix(secret, 5, 3, f, rng, /*symmetric=*/true);
    benchmark::DoNotOptimize(shares);
  }
}
BENCHMARK(ShareMatrix)->Arg(64)->Arg(128);

void Reconstruct(benchmark::State& state) {
  const int d = int(state.range(0));
  const field::PrimeField f = field::PrimeField::for_fixed_point(fxp::FxConfig(48, 24));
  Rng rng = make_rng(7);
  field::FieldMatrix secret(d, 10);
  for (auto& v : secret.data()) v = f.sample(rng);
  const auto shares = secret::share_matrix(secret, 5, 3, f, rng);
  for (auto _ : state) {
    auto out = secret::reconstruct(std::span(shares).subspan(1, 3), 3, f);
    benchmark::DoNotOptimize(out);
  }
}
BENCHMARK(Reconstruct)->Arg(128)->Arg(256);

}  // namespace
