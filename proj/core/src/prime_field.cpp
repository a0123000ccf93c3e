#include "codedfl/prime_field.hpp"

#include <algorithm>
#include <stdexcept>

namespace codedfl::field {

namespace {

constexpr int kSplitShift = 41;  // supports moduli up to ~2^83

int bit_width_u128(u128 v) {
  int b = 0;
  while (v) {
    v >>= 1;
    ++b;
  }
  return b;
}

// (a * b) mod q with a, b < q. Splits a so every intermediate fits 128 bits.
u128 mulmod(u128 a, u128 b, u128 q) {
  const u128 hi = a >> kSplitShift;
  const u128 lo = a & ((u128(1) << kSplitShift) - 1);
  u128 r = (hi * b) % q;
  r = (r << kSplitShift) % q;
  return (r + (lo * b) % q) % q;
}

u128 powmod(u128 base, u128 exp, u128 q) {
  u128 result = 1 % q;
  base %= q;
  while (exp) {
    if (exp & 1) result = mulmod(result, base, q);
    base = mulmod(base, base, q);
    exp >>= 1;
  }
  return result;
}

}  // namespace

std::string to_string(u128 v) {
  if (v == 0) return "0";
  std::string s;
  while (v) {
    s.push_back(char('0' + int(v % 10)));
    v /= 10;
  }
  std::reverse(s.begin(), s.end());
  return s;
}

bool is_prime(u128 n) {
  if (n < 2) return false;
  for (u128 p : {u128(2), u128(3), u128(5), u128(7), u128(11), u128(13)}) {
    if (n == p) return true;
    if (n % p == 0) return false;
  }
  u128 d = n - 1;
  int r = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++r;
  }
  // Deterministic witness set for n < 3.3e24 (~2^81).
  for (u128 a : {u128(2), u128(3), u128(5), u128(7), u128(11), u128(13), u128(17), u128(19),
                 u128(23), u128(29), u128(31), u128(37)}) {
    u128 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < r; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

u128 next_prime_above(u128 n) {
  u128 c = n + 1;
  if (c <= 2) return 2;
  if ((c & 1) == 0) ++c;
  while (!is_prime(c)) c += 2;
  return c;
}

PrimeField::PrimeField(u128 q) : q_(q) {
  if (q >= (u128(1) << 81))
    throw std::invalid_argument("modulus above 2^81 is not supported");
  if (!is_prime(q)) throw std::invalid_argument("modulus is not prime");
  bits_ = bit_width_u128(q - 1);
  mask_ = (bits_ >= 128) ? ~u128(0) : ((u128(1) << bits_) - 1);
}

PrimeField PrimeField::for_fixed_point(const fxp::FxConfig& cfg) {
  const int width = cfg.total_bits + cfg.frac_bits;
  if (width > 80)
    throw std::invalid_argument("k + f above 80 bits is not supported by the field layer");
  return PrimeField(next_prime_above(u128(1) << width));
}

u128 PrimeField::mul(u128 a, u128 b) const { return mulmod(a, b, q_); }

u128 PrimeField::pow(u128 base, u128 exp) const { return powmod(base, exp, q_); }

u128 PrimeField::inv(u128 a) const {
  if (a == 0) throw std::invalid_argument("zero has no inverse");
  return powmod(a, q_ - 2, q_);
}

u128 PrimeField::encode_signed(i128 v) const {
  if (v >= 0) {
    const u128 u = u128(v);
    if (u >= (q_ + 1) / 2) throw std::overflow_error("value too large for field encoding");
    return u;
  }
  const u128 mag = u128(-v);
  if (mag > q_ / 2) throw std::overflow_error("value too negative for field encoding");
  return q_ - mag;
}

i128 PrimeField::decode_signed(u128 v) const {
  if (v > q_ / 2) return -i128(q_ - v);
  return i128(v);
}

u128 PrimeField::sample(Rng& rng) const {
  while (true) {
    u128 v = (u128(rng()) << 64) | u128(rng());
    v &= mask_;
    if (v < q_) return v;
  }
}

FieldMatrix add(const PrimeField& f, const FieldMatrix& a, const FieldMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("matrix shapes differ");
  FieldMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.data().size(); ++i)
    out.data()[i] = f.add(a.data()[i], b.data()[i]);
  return out;
}

FieldMatrix sub(const PrimeField& f, const FieldMatrix& a, const FieldMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("matrix shapes differ");
  FieldMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.data().size(); ++i)
    out.data()[i] = f.sub(a.data()[i], b.data()[i]);
  return out;
}

FieldMatrix matmul(const PrimeField& f, const FieldMatrix& a, const FieldMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("inner dimensions differ");
  FieldMatrix out(a.rows(), b.cols());
  // Products are < q <= 2^80; summing up to 2^47 of them cannot overflow, so
  // the inner loop reduces only once.
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < b.cols(); ++j) {
      u128 acc = 0;
      for (int t = 0; t < a.cols(); ++t) acc += f.mul(a.at(i, t), b.at(t, j));
      out.set(i, j, acc % f.modulus());
    }
  return out;
}

FieldMatrix encode_fx(const fxp::FxMatrix& m, const PrimeField& f, int extra_shift_bits) {
  FieldMatrix out(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) {
      const i128 v = i128(m.raw(i, j)) << extra_shift_bits;
      out.set(i, j, f.encode_signed(v));
    }
  return out;
}

fxp::FxMatrix decode_to_fx(const FieldMatrix& m, const PrimeField& f, const fxp::FxConfig& cfg) {
  fxp::FxMatrix out(m.rows(), m.cols(), cfg);
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) {
      const i128 v = f.decode_signed(m.at(i, j)) >> cfg.frac_bits;  // floor
      if (v < cfg.raw_min() || v > cfg.raw_max())
        throw std::overflow_error("decoded value does not fit the fixed-point range");
      out.set_raw(i, j, std::int64_t(v));
    }
  return out;
}

}  // namespace codedfl::field
