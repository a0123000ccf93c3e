#pragma once

// Independent reference paths for the protocol tests. These recompute what
// the protocols should produce using only the module primitives (or raw
// 128-bit integer arithmetic), never the protocol implementations themselves.

#include <vector>

#include "codedfl/fixed_point.hpp"
#include "codedfl/learning.hpp"
#include "codedfl/prime_field.hpp"

namespace codedfl::test {

/// Uncoded fixed-point aggregate: sum_i (XtX_i * delta - XtY_i), all in
/// Q<k,f> with the same matmul semantics the devices use.
inline fxp::FxMatrix uncoded_fx_aggregate(const std::vector<learning::DevicePartition>& parts,
                                          const fxp::FxMatrix& delta) {
  const fxp::FxConfig cfg = delta.config();
  fxp::FxMatrix sum = fxp::FxMatrix::zeros(parts[0].fx_gram_xy.rows(),
                                           parts[0].fx_gram_xy.cols(), cfg);
  for (const auto& p : parts) sum = fxp::add(sum, learning::local_gradient_fx(p, delta));
  return sum;
}

/// Exact integer aggregate with postponed scaling: sum_i (2^f * G_i^(1) +
/// XtX_i * delta) over plain 128-bit integers (no field, no wrap), then a
/// single floor-scale. Mirrors what the secure-aggregation decode must equal
/// bit for bit.
struct IntegerAggregate {
  std::vector<field::i128> raw;  // row-major, pre-scale
  int rows = 0;
  int cols = 0;
};

inline IntegerAggregate integer_oracle_aggregate(
    const std::vector<learning::DevicePartition>& parts, const fxp::FxMatrix& delta) {
  const int d = parts[0].fx_gram_xx.rows();
  const int c = parts[0].fx_gram_xy.cols();
  const int f = delta.config().frac_bits;
  IntegerAggregate agg;
  agg.rows = d;
  agg.cols = c;
  agg.raw.assign(std::size_t(d) * c, 0);
  for (const auto& p : parts) {
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < c; ++j) {
        field::i128 acc = -(field::i128(p.fx_gram_xy.raw(i, j)) << f);  // 2^f * G1
        for (int t = 0; t < d; ++t)
          acc += field::i128(p.fx_gram_xx.raw(i, t)) * field::i128(delta.raw(t, j));
        agg.raw[std::size_t(i) * c + j] += acc;
      }
  }
  return agg;
}

inline fxp::FxMatrix floor_scaled(const IntegerAggregate& agg, const fxp::FxConfig& cfg) {
  fxp::FxMatrix out(agg.rows, agg.cols, cfg);
  for (int i = 0; i < agg.rows; ++i)
    for (int j = 0; j < agg.cols; ++j)
      out.set_raw(i, j,
                  std::int64_t(agg.raw[std::size_t(i) * agg.cols + j] >> cfg.frac_bits));
  return out;
}

/// Small two-class dataset helper for protocol-level tests.
inline learning::Dataset tiny_dataset(int m, int d, int classes, std::uint64_t seed) {
  learning::SyntheticParams p;
  p.train_samples = m;
  p.test_samples = std::max(8, m / 4);
  p.dim = d;
  p.classes = classes;
  return learning::make_synthetic(p, seed);
}

}  // namespace codedfl::test
