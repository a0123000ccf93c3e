#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "codedfl/fixed_point.hpp"
#include "codedfl/rng.hpp"

namespace codedfl::field {

using u128 = unsigned __int128;
using i128 = __int128;

std::string to_string(u128 v);

/// Deterministic Miller-Rabin; valid for n below 2^81.
bool is_prime(u128 n);
u128 next_prime_above(u128 n);

/// Arithmetic modulo a prime q. Supports moduli up to 2^80 via split
/// multiply-reduce on 128-bit intermediates; q > 2^(k+f) lets fixed-point raw
/// values scaled by 2^f live in the field with postponed scaling.
class PrimeField {
 public:
  explicit PrimeField(u128 q);

  /// Smallest prime exceeding 2^(k+f) for the given fixed-point layout.
  static PrimeField for_fixed_point(const fxp::FxConfig& cfg);

  u128 modulus() const { return q_; }
  int payload_bits() const { return bits_; }  // ceil(log2 q)

  u128 add(u128 a, u128 b) const {
    u128 s = a + b;  // both < q <= 2^80, no overflow
    return s >= q_ ? s - q_ : s;
  }
  u128 sub(u128 a, u128 b) const { return a >= b ? a - b : a + q_ - b; }
  u128 neg(u128 a) const { return a == 0 ? 0 : q_ - a; }
  u128 mul(u128 a, u128 b) const;
  u128 pow(u128 base, u128 exp) const;
  u128 inv(u128 a) const;

  /// Signed integer -> field: v >= 0 maps to v, v < 0 maps to q - |v|.
  /// Requires |v| < q/2.
  u128 encode_signed(i128 v) const;
  /// Field -> signed integer: values above q/2 map to negatives.
  i128 decode_signed(u128 v) const;

  /// Uniform element of [0, q) by rejection.
  u128 sample(Rng& rng) const;

 private:
  u128 q_;
  int bits_;
  u128 mask_;
};

/// Dense row-major matrix with entries in [0, q). The field is passed to the
/// operations rather than stored per matrix.
class FieldMatrix {
 public:
  FieldMatrix() = default;
  FieldMatrix(int rows, int cols) : rows_(rows), cols_(cols), e_(std::size_t(rows) * cols, 0) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  u128 at(int i, int j) const { return e_[std::size_t(i) * cols_ + j]; }
  void set(int i, int j, u128 v) { e_[std::size_t(i) * cols_ + j] = v; }
  const std::vector<u128>& data() const { return e_; }
  std::vector<u128>& data() { return e_; }

  friend bool operator==(const FieldMatrix&, const FieldMatrix&) = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<u128> e_;
};

FieldMatrix add(const PrimeField& f, const FieldMatrix& a, const FieldMatrix& b);
FieldMatrix sub(const PrimeField& f, const FieldMatrix& a, const FieldMatrix& b);
FieldMatrix matmul(const PrimeField& f, const FieldMatrix& a, const FieldMatrix& b);

/// Field image of a fixed-point matrix's raw integers, optionally premultiplied
/// by 2^extra_shift_bits (the postponed-scaling trick applies shift = f to the
/// standalone term so a single final floor-scale is correct).
FieldMatrix encode_fx(const fxp::FxMatrix& m, const PrimeField& f, int extra_shift_bits = 0);

/// Inverts encode_fx's sign mapping and applies the postponed floor-scale by
/// 2^-f; the result is a Q<k,f> matrix. Throws when a decoded value does not
/// fit Z<k>.
fxp::FxMatrix decode_to_fx(const FieldMatrix& m, const PrimeField& f, const fxp::FxConfig& cfg);

}  // namespace codedfl::field
