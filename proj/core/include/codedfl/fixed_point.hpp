#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "codedfl/rng.hpp"

namespace codedfl::fxp {

using int128 = __int128;

/// Layout of the fixed-point datatype Q<k,f>: values are signed integers in
/// [-2^(k-1), 2^(k-1)-1] scaled by 2^-f. Arithmetic wraps modulo 2^k
/// (two's complement), which is what makes one-time padding exact.
struct FxConfig {
  int total_bits = 48;  // k
  int frac_bits = 24;   // f

  FxConfig() = default;
  FxConfig(int k, int f);

  std::int64_t raw_min() const { return -(std::int64_t(1) << (total_bits - 1)); }
  std::int64_t raw_max() const { return (std::int64_t(1) << (total_bits - 1)) - 1; }
  double resolution() const { return std::ldexp(1.0, -frac_bits); }
  /// Raw representation of 1.0; requires f <= k-2.
  std::int64_t one_raw() const;

  friend bool operator==(const FxConfig&, const FxConfig&) = default;
};

/// Wraps an arbitrary-width integer into Z<k> two's-complement style:
/// ((v + 2^(k-1)) mod 2^k) - 2^(k-1).
std::int64_t wrap_raw(int128 v, const FxConfig& cfg);

struct FxValue {
  std::int64_t raw = 0;
  FxConfig cfg;

  double to_real() const { return std::ldexp(double(raw), -cfg.frac_bits); }
  friend bool operator==(const FxValue&, const FxValue&) = default;
};

/// Rounds half away from zero. Throws std::overflow_error when r is outside
/// the representable range of cfg.
FxValue quantize(double r, const FxConfig& cfg);

FxValue add(const FxValue& a, const FxValue& b);
/// Integer multiply, floor-scale by 2^-f, wrap. The double-width intermediate
/// product is exact.
FxValue mul(const FxValue& a, const FxValue& b);
FxValue negate(const FxValue& a);

/// Dense row-major fixed-point matrix.
class FxMatrix {
 public:
  FxMatrix() = default;
  FxMatrix(int rows, int cols, FxConfig cfg)
      : rows_(rows), cols_(cols), cfg_(cfg), raw_(std::size_t(rows) * cols, 0) {}

  static FxMatrix zeros(int rows, int cols, FxConfig cfg) { return FxMatrix(rows, cols, cfg); }
  static FxMatrix identity(int n, FxConfig cfg);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  const FxConfig& config() const { return cfg_; }

  std::int64_t raw(int i, int j) const { return raw_[std::size_t(i) * cols_ + j]; }
  void set_raw(int i, int j, std::int64_t v) { raw_[std::size_t(i) * cols_ + j] = v; }
  FxValue at(int i, int j) const { return FxValue{raw(i, j), cfg_}; }

  const std::vector<std::int64_t>& raw_data() const { return raw_; }
  std::vector<std::int64_t>& raw_data() { return raw_; }

  FxMatrix transposed() const;
  bool is_symmetric() const;

  friend bool operator==(const FxMatrix&, const FxMatrix&) = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  FxConfig cfg_;
  std::vector<std::int64_t> raw_;
};

/// How matrix products apply the 2^-f scale.
enum class MatmulScaling {
  /// Accumulate exact double-width integer products over the inner dimension,
  /// then floor-scale and wrap once per output entry (default).
  kPerEntry,
  /// Floor-scale and wrap every scalar product before accumulating.
  kPerProduct,
};

FxMatrix add(const FxMatrix& a, const FxMatrix& b);
FxMatrix sub(const FxMatrix& a, const FxMatrix& b);
FxMatrix matmul(const FxMatrix& a, const FxMatrix& b,
                MatmulScaling scaling = MatmulScaling::kPerEntry);
/// Per-entry fixed-point multiply by a scalar coefficient.
FxMatrix scalar_mul(const FxValue& c, const FxMatrix& m);

Eigen::MatrixXd to_real(const FxMatrix& m);
FxMatrix from_real(const Eigen::MatrixXd& m, const FxConfig& cfg);

/// Additive one-time pad over Z<k>. For d x d pads protecting symmetric
/// matrices the symmetric flag mirrors the upper triangle.
struct PadMatrix {
  FxMatrix values;
  bool symmetric = false;
};

PadMatrix make_pad(int rows, int cols, const FxConfig& cfg, bool symmetric, Rng& rng);
PadMatrix zero_pad(int rows, int cols, const FxConfig& cfg, bool symmetric);

FxMatrix pad_apply(const FxMatrix& m, const PadMatrix& r);
FxMatrix pad_remove(const FxMatrix& m, const PadMatrix& r);

}  // namespace codedfl::fxp
