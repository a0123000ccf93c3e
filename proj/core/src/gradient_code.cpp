#include "codedfl/gradient_code.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "codedfl/rng.hpp"

namespace codedfl::coding {

namespace {

std::int64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::int64_t r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > (std::int64_t(1) << 40)) return std::int64_t(1) << 40;  // saturate
  }
  return r;
}

// Enumerates all k-subsets of [0, n) in lexicographic order.
template <typename Fn>
void for_each_subset(int n, int k, Fn&& fn) {
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    fn(idx);
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

Eigen::MatrixXd real_rows(const EncodingMatrix& code, const std::vector<int>& rows) {
  Eigen::MatrixXd m(std::ptrdiff_t(rows.size()), code.length);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (int j = 0; j < code.length; ++j)
      m(std::ptrdiff_t(r), j) =
          std::ldexp(double(code.coeffs.raw(rows[r], j)), -code.coeffs.config().frac_bits);
  return m;
}

// Codes short enough for the exhaustive decodability invariant are held to
// the flat tolerance at build time; longer codes accept the conditioning-aware
// bound that decode_vector itself applies.
constexpr int kStrictLengthCap = 8;

bool pattern_decodes(const EncodingMatrix& code, const std::vector<int>& survivors) {
  try {
    const DecodeVector dv = decode_vector(code, survivors);
    if (code.length <= kStrictLengthCap)
      return residual_inf_norm(code, dv) <= decode_tolerance(code);
    return true;
  } catch (const DecodeError&) {
    return false;
  }
}

bool verify_encoding(const EncodingMatrix& code, const BuildOptions& opts, Rng& rng) {
  const int need = code.min_survivors();
  const std::int64_t count = binomial(code.length, need);
  if (count <= opts.exhaustive_cap) {
    bool ok = true;
    for_each_subset(code.length, need, [&](const std::vector<int>& s) {
      if (ok && !pattern_decodes(code, s)) ok = false;
    });
    return ok;
  }
  // Cyclic windows cover every contiguous straggler burst.
  for (int start = 0; start < code.length; ++start) {
    std::vector<int> s(need);
    for (int i = 0; i < need; ++i) s[i] = (start + i) % code.length;
    std::sort(s.begin(), s.end());
    if (!pattern_decodes(code, s)) return false;
  }
  std::vector<int> all(code.length);
  for (int i = 0; i < code.length; ++i) all[i] = i;
  for (int t = 0; t < opts.sampled_patterns; ++t) {
    std::vector<int> pool = all;
    std::shuffle(pool.begin(), pool.end(), rng);
    std::vector<int> s(pool.begin(), pool.begin() + need);
    std::sort(s.begin(), s.end());
    if (!pattern_decodes(code, s)) return false;
  }
  return true;
}

}  // namespace

AssignmentMatrix build_assignment(int redundancy, int num_devices) {
  if (redundancy < 1 || redundancy > num_devices)
    throw std::invalid_argument("assignment requires 1 <= redundancy <= num_devices");
  AssignmentMatrix m;
  m.redundancy = redundancy;
  m.num_devices = num_devices;
  m.entries.resize(std::size_t(redundancy) * num_devices);
  for (int i = 0; i < redundancy; ++i)
    for (int j = 0; j < num_devices; ++j)
      m.entries[std::size_t(i) * num_devices + j] = (j + i) % num_devices + 1;
  return m;
}

std::vector<int> EncodingMatrix::row_support(int row) const {
  std::vector<int> s(support_size);
  for (int t = 0; t < support_size; ++t) s[t] = (row + t) % length;
  return s;
}

EncodingMatrix build_encoding(int support_size, int length, const fxp::FxConfig& cfg,
                              std::uint64_t seed, const BuildOptions& opts) {
  if (support_size < 1 || support_size > length)
    throw std::invalid_argument("encoding requires 1 <= support_size <= length");

  EncodingMatrix code;
  code.support_size = support_size;
  code.length = length;
  code.seed = seed;

  if (support_size == 1) {
    code.coeffs = fxp::FxMatrix::identity(length, cfg);
    return code;
  }

  const int aux_rows = support_size - 1;
  for (int attempt = 0; attempt < opts.max_retries; ++attempt) {
    Rng rng = make_rng(derive_seed(seed, {stream::kCode, std::uint64_t(attempt)}));
    std::uniform_real_distribution<double> unit(-1.0, 1.0);

    // Auxiliary matrix whose rows sum to zero; every row of the code is built
    // orthogonal to it, so all rows live in a fixed (length-support_size+1)-dim
    // subspace that contains the all-ones vector.
    Eigen::MatrixXd aux(aux_rows, length);
    for (int i = 0; i < aux_rows; ++i) {
      double row_sum = 0.0;
      for (int j = 0; j < length - 1; ++j) {
        aux(i, j) = unit(rng);
        row_sum += aux(i, j);
      }
      aux(i, length - 1) = -row_sum;
    }

    // Row i is the (unique up to scale) vector of null(aux) supported on the
    // cyclic window; the restricted kernel is computed with full-pivot LU and
    // normalized to unit max magnitude, which keeps every coefficient in
    // [-1, 1] regardless of the draw's conditioning.
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(length, length);
    bool draw_ok = true;
    for (int i = 0; i < length && draw_ok; ++i) {
      std::vector<int> support(support_size);
      for (int t = 0; t < support_size; ++t) support[t] = (i + t) % length;
      Eigen::MatrixXd restricted(aux_rows, support_size);
      for (int r = 0; r < aux_rows; ++r)
        for (int t = 0; t < support_size; ++t) restricted(r, t) = aux(r, support[t]);
      Eigen::FullPivLU<Eigen::MatrixXd> lu(restricted);
      const Eigen::MatrixXd kernel = lu.kernel();
      if (kernel.cols() != 1) {
        draw_ok = false;
        break;
      }
      Eigen::VectorXd row = kernel.col(0);
      int peak = 0;
      row.cwiseAbs().maxCoeff(&peak);
      row /= row(peak);  // largest entry becomes +1
      const double smallest = row.cwiseAbs().minCoeff();
      if (smallest * std::ldexp(1.0, cfg.frac_bits) < 4.0) {
        draw_ok = false;  // a coefficient would quantize to (almost) zero
        break;
      }
      for (int t = 0; t < support_size; ++t) b(i, support[t]) = row(t);
    }
    if (!draw_ok) continue;

    try {
      code.coeffs = fxp::from_real(b, cfg);
    } catch (const std::overflow_error&) {
      continue;
    }
    if (verify_encoding(code, opts, rng)) return code;
  }
  throw std::runtime_error("encoding construction failed after " +
                           std::to_string(opts.max_retries) + " draws");
}

DecodeVector decode_vector(const EncodingMatrix& code, std::vector<int> survivors) {
  const int need = code.min_survivors();
  if (int(survivors.size()) != need)
    throw std::invalid_argument("survivor set must have exactly length-support_size+1 entries");
  std::vector<int> sorted = survivors;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end() || sorted.front() < 0 ||
      sorted.back() >= code.length)
    throw std::invalid_argument("survivor indices must be distinct and in range");

  const Eigen::MatrixXd rows = real_rows(code, survivors);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(rows.transpose());
  if (qr.rank() < need) throw DecodeError("survivor rows are rank-deficient");
  const Eigen::VectorXd w = qr.solve(Eigen::VectorXd::Ones(code.length));

  DecodeVector dv;
  dv.survivors = survivors;
  dv.weights.reserve(survivors.size());
  const fxp::FxConfig& cfg = code.coeffs.config();
  double weight_l1 = 0.0;
  for (int i = 0; i < need; ++i) {
    try {
      dv.weights.push_back(fxp::quantize(w(i), cfg));
    } catch (const std::overflow_error&) {
      throw DecodeError("decode weight exceeds the fixed-point range");
    }
    weight_l1 += std::abs(w(i));
  }
  // Ill-conditioned survivor sets produce large weights, and the quantization
  // of both the weights and the coefficients then moves the residual by up to
  // ~2^-f-1 * (||a||_1 + n). Accept the larger of the flat default and that
  // conditioning-aware bound; anything beyond it signals an unlucky draw.
  const double conditioning_bound = std::ldexp(weight_l1 + double(need), -cfg.frac_bits + 2);
  if (residual_inf_norm(code, dv) > std::max(decode_tolerance(code), conditioning_bound))
    throw DecodeError("quantized decode residual exceeds tolerance");
  return dv;
}

double decode_tolerance(const EncodingMatrix& code) {
  return std::ldexp(double(code.length), -code.coeffs.config().frac_bits + 4);
}

double residual_inf_norm(const EncodingMatrix& code, const DecodeVector& dv) {
  const int f = code.coeffs.config().frac_bits;
  double worst = 0.0;
  for (int j = 0; j < code.length; ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < dv.survivors.size(); ++i)
      sum += std::ldexp(double(dv.weights[i].raw), -f) *
             std::ldexp(double(code.coeffs.raw(dv.survivors[i], j)), -f);
    worst = std::max(worst, std::abs(sum - 1.0));
  }
  return worst;
}

}  // namespace codedfl::coding
