#include "codedfl/fixed_point.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace codedfl::fxp {

namespace {
using uint128 = unsigned __int128;

void check_same_config(const FxConfig& a, const FxConfig& b) {
  if (!(a == b)) throw std::invalid_argument("fixed-point configs differ");
}

void check_same_shape(const FxMatrix& a, const FxMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("matrix shapes differ");
}
}  // namespace

FxConfig::FxConfig(int k, int f) : total_bits(k), frac_bits(f) {
  if (!(1 <= f && f < k && k <= 63))
    throw std::invalid_argument("fixed-point config requires 1 <= f < k <= 63");
}

std::int64_t FxConfig::one_raw() const {
  if (frac_bits > total_bits - 2)
    throw std::overflow_error("1.0 is not representable: f > k-2");
  return std::int64_t(1) << frac_bits;
}

std::int64_t wrap_raw(int128 v, const FxConfig& cfg) {
  const uint128 span = uint128(1) << cfg.total_bits;
  const uint128 half = uint128(1) << (cfg.total_bits - 1);
  uint128 u = (uint128(v) + half) & (span - 1);
  return std::int64_t(int128(u) - int128(half));
}

FxValue quantize(double r, const FxConfig& cfg) {
  const double scaled = std::ldexp(r, cfg.frac_bits);
  if (!std::isfinite(scaled) || scaled >= std::ldexp(1.0, cfg.total_bits - 1) + 0.5 ||
      scaled <= -std::ldexp(1.0, cfg.total_bits - 1) - 0.5)
    throw std::overflow_error("value outside representable fixed-point range");
  const std::int64_t raw = std::llround(scaled);
  if (raw < cfg.raw_min() || raw > cfg.raw_max())
    throw std::overflow_error("value outside representable fixed-point range");
  return FxValue{raw, cfg};
}

FxValue add(const FxValue& a, const FxValue& b) {
  check_same_config(a.cfg, b.cfg);
  return FxValue{wrap_raw(int128(a.raw) + int128(b.raw), a.cfg), a.cfg};
}

FxValue mul(const FxValue& a, const FxValue& b) {
  check_same_config(a.cfg, b.cfg);
  const int128 prod = int128(a.raw) * int128(b.raw);
  return FxValue{wrap_raw(prod >> a.cfg.frac_bits, a.cfg), a.cfg};
}

FxValue negate(const FxValue& a) {
  return FxValue{wrap_raw(-int128(a.raw), a.cfg), a.cfg};
}

FxMatrix FxMatrix::identity(int n, FxConfig cfg) {
  FxMatrix m(n, n, cfg);
  const std::int64_t one = cfg.one_raw();
  for (int i = 0; i < n; ++i) m.set_raw(i, i, one);
  return m;
}

FxMatrix FxMatrix::transposed() const {
  FxMatrix t(cols_, rows_, cfg_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) t.set_raw(j, i, raw(i, j));
  return t;
}

bool FxMatrix::is_symmetric() const {
  if (rows_ != cols_) return false;
  for (int i = 0; i < rows_; ++i)
    for (int j = i + 1; j < cols_; ++j)
      if (raw(i, j) != raw(j, i)) return false;
  return true;
}

FxMatrix add(const FxMatrix& a, const FxMatrix& b) {
  check_same_shape(a, b);
  check_same_config(a.config(), b.config());
  FxMatrix out(a.rows(), a.cols(), a.config());
  for (std::size_t i = 0; i < a.raw_data().size(); ++i)
    out.raw_data()[i] = wrap_raw(int128(a.raw_data()[i]) + int128(b.raw_data()[i]), a.config());
  return out;
}

FxMatrix sub(const FxMatrix& a, const FxMatrix& b) {
  check_same_shape(a, b);
  check_same_config(a.config(), b.config());
  FxMatrix out(a.rows(), a.cols(), a.config());
  for (std::size_t i = 0; i < a.raw_data().size(); ++i)
    out.raw_data()[i] = wrap_raw(int128(a.raw_data()[i]) - int128(b.raw_data()[i]), a.config());
  return out;
}

FxMatrix matmul(const FxMatrix& a, const FxMatrix& b, MatmulScaling scaling) {
  if (a.cols() != b.rows()) throw std::invalid_argument("inner dimensions differ");
  check_same_config(a.config(), b.config());
  const FxConfig& cfg = a.config();
  FxMatrix out(a.rows(), b.cols(), cfg);
  // Accumulation is exact in 128-bit; callers keep k small enough that
  // inner_dim * 2^(2k-2) stays below 2^127.
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < b.cols(); ++j) {
      if (scaling == MatmulScaling::kPerEntry) {
        int128 acc = 0;
        for (int t = 0; t < a.cols(); ++t)
          acc += int128(a.raw(i, t)) * int128(b.raw(t, j));
        out.set_raw(i, j, wrap_raw(acc >> cfg.frac_bits, cfg));
      } else {
        std::int64_t acc = 0;
        for (int t = 0; t < a.cols(); ++t) {
          const int128 prod = int128(a.raw(i, t)) * int128(b.raw(t, j));
          const std::int64_t scaled = wrap_raw(prod >> cfg.frac_bits, cfg);
          acc = wrap_raw(int128(acc) + int128(scaled), cfg);
        }
        out.set_raw(i, j, acc);
      }
    }
  }
  return out;
}

FxMatrix scalar_mul(const FxValue& c, const FxMatrix& m) {
  check_same_config(c.cfg, m.config());
  const FxConfig& cfg = m.config();
  FxMatrix out(m.rows(), m.cols(), cfg);
  for (std::size_t i = 0; i < m.raw_data().size(); ++i) {
    const int128 prod = int128(c.raw) * int128(m.raw_data()[i]);
    out.raw_data()[i] = wrap_raw(prod >> cfg.frac_bits, cfg);
  }
  return out;
}

Eigen::MatrixXd to_real(const FxMatrix& m) {
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      out(i, j) = std::ldexp(double(m.raw(i, j)), -m.config().frac_bits);
  return out;
}

FxMatrix from_real(const Eigen::MatrixXd& m, const FxConfig& cfg) {
  FxMatrix out(int(m.rows()), int(m.cols()), cfg);
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) out.set_raw(i, j, quantize(m(i, j), cfg).raw);
  return out;
}

PadMatrix make_pad(int rows, int cols, const FxConfig& cfg, bool symmetric, Rng& rng) {
  if (symmetric && rows != cols)
    throw std::invalid_argument("symmetric pad requires a square shape");
  std::uniform_int_distribution<std::int64_t> dist(cfg.raw_min(), cfg.raw_max());
  PadMatrix pad{FxMatrix(rows, cols, cfg), symmetric};
  if (symmetric) {
    for (int i = 0; i < rows; ++i)
      for (int j = i; j < cols; ++j) {
        const std::int64_t v = dist(rng);
        pad.values.set_raw(i, j, v);
        pad.values.set_raw(j, i, v);
      }
  } else {
    for (auto& v : pad.values.raw_data()) v = dist(rng);
  }
  return pad;
}

PadMatrix zero_pad(int rows, int cols, const FxConfig& cfg, bool symmetric) {
  return PadMatrix{FxMatrix(rows, cols, cfg), symmetric};
}

FxMatrix pad_apply(const FxMatrix& m, const PadMatrix& r) { return add(m, r.values); }

FxMatrix pad_remove(const FxMatrix& m, const PadMatrix& r) { return sub(m, r.values); }

}  // namespace codedfl::fxp
