#include "codedfl/secret_sharing.hpp"

#include <algorithm>
#include <stdexcept>

namespace codedfl::secret {

using field::FieldMatrix;
using field::PrimeField;
using field::u128;

namespace {

void check_share_params(const FieldMatrix& secret, int n_shares, int threshold,
                        const PrimeField& f, bool symmetric) {
  if (threshold < 1 || threshold > n_shares)
    throw std::invalid_argument("requires 1 <= threshold <= n_shares");
  if (u128(n_shares) >= f.modulus())
    throw std::invalid_argument("n_shares must be below the field modulus");
  if (symmetric && secret.rows() != secret.cols())
    throw std::invalid_argument("symmetric sharing requires a square secret");
}

// Evaluates the entry polynomials at t = 1..n_shares given explicit
// coefficient matrices (coeffs[0] is unused; the secret is the constant term).
std::vector<SssShare> evaluate_shares(const FieldMatrix& secret, int n_shares, int threshold,
                                      const PrimeField& f,
                                      const std::vector<const FieldMatrix*>& coeffs,
                                      bool symmetric) {
  std::vector<SssShare> shares(n_shares);
  for (int t = 1; t <= n_shares; ++t) {
    shares[t - 1].index = t;
    shares[t - 1].payload = FieldMatrix(secret.rows(), secret.cols());
  }
  const u128 q = f.modulus();
  for (int i = 0; i < secret.rows(); ++i) {
    const int j0 = symmetric ? i : 0;
    for (int j = j0; j < secret.cols(); ++j) {
      for (int t = 1; t <= n_shares; ++t) {
        const u128 x = u128(t) % q;
        // Horner from the highest coefficient down to the secret.
        u128 v = 0;
        for (int deg = threshold - 1; deg >= 1; --deg)
          v = f.mul(f.add(v, coeffs[deg - 1]->at(i, j)), x);
        v = f.add(v, secret.at(i, j));
        shares[t - 1].payload.set(i, j, v);
        if (symmetric) shares[t - 1].payload.set(j, i, v);
      }
    }
  }
  return shares;
}

}  // namespace

std::vector<SssShare> share_matrix(const FieldMatrix& secret, int n_shares, int threshold,
                                   const PrimeField& f, Rng& rng, bool symmetric) {
  check_share_params(secret, n_shares, threshold, f, symmetric);
  std::vector<FieldMatrix> coeffs;
  coeffs.reserve(threshold - 1);
  for (int deg = 1; deg < threshold; ++deg) {
    FieldMatrix c(secret.rows(), secret.cols());
    for (int i = 0; i < secret.rows(); ++i) {
      const int j0 = symmetric ? i : 0;
      for (int j = j0; j < secret.cols(); ++j) {
        const u128 v = f.sample(rng);
        c.set(i, j, v);
        if (symmetric) c.set(j, i, v);
      }
    }
    coeffs.push_back(std::move(c));
  }
  std::vector<const FieldMatrix*> ptrs;
  for (const auto& c : coeffs) ptrs.push_back(&c);
  return evaluate_shares(secret, n_shares, threshold, f, ptrs, symmetric);
}

std::vector<SssShare> share_matrix_with_randomness(const FieldMatrix& secret, int n_shares,
                                                   int threshold, const PrimeField& f,
                                                   std::span<const FieldMatrix> coeffs) {
  check_share_params(secret, n_shares, threshold, f, false);
  if (int(coeffs.size()) != threshold - 1)
    throw std::invalid_argument("expected threshold-1 coefficient matrices");
  std::vector<const FieldMatrix*> ptrs;
  for (const auto& c : coeffs) {
    if (c.rows() != secret.rows() || c.cols() != secret.cols())
      throw std::invalid_argument("coefficient shape differs from the secret");
    ptrs.push_back(&c);
  }
  return evaluate_shares(secret, n_shares, threshold, f, ptrs, false);
}

field::FieldMatrix reconstruct(std::span<const SssShare> shares, int threshold,
                               const PrimeField& f) {
  if (int(shares.size()) < threshold)
    throw std::invalid_argument("fewer shares than the reconstruction threshold");
  std::vector<int> indices;
  for (int i = 0; i < threshold; ++i) indices.push_back(shares[i].index);
  std::vector<int> sorted = indices;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw std::invalid_argument("duplicate share indices");

  const int rows = shares[0].payload.rows();
  const int cols = shares[0].payload.cols();
  // Lagrange weights at t = 0: w_i = prod_{j != i} x_j / (x_j - x_i).
  std::vector<u128> weights(threshold);
  for (int i = 0; i < threshold; ++i) {
    const u128 xi = f.encode_signed(indices[i]);
    u128 w = 1;
    for (int j = 0; j < threshold; ++j) {
      if (j == i) continue;
      const u128 xj = f.encode_signed(indices[j]);
      w = f.mul(w, f.mul(xj, f.inv(f.sub(xj, xi))));
    }
    weights[i] = w;
  }
  FieldMatrix out(rows, cols);
  for (int i = 0; i < threshold; ++i) {
    const auto& p = shares[i].payload;
    if (p.rows() != rows || p.cols() != cols)
      throw std::invalid_argument("share payload shapes differ");
    for (std::size_t t = 0; t < out.data().size(); ++t)
      out.data()[t] = f.add(out.data()[t], f.mul(weights[i], p.data()[t]));
  }
  return out;
}

SssShare add_shares(const SssShare& a, const SssShare& b, const PrimeField& f) {
  if (a.index != b.index) throw std::invalid_argument("share indices differ");
  return SssShare{a.index, field::add(f, a.payload, b.payload)};
}

}  // namespace codedfl::secret
