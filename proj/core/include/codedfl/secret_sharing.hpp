#pragma once

#include <span>
#include <vector>

#include "codedfl/prime_field.hpp"

namespace codedfl::secret {

/// One Shamir share of a matrix secret: the evaluation-point index (1-based)
/// and the per-entry polynomial evaluations.
struct SssShare {
  int index = 0;
  field::FieldMatrix payload;
};

/// Splits `secret` into n_shares shares with reconstruction threshold
/// `threshold`; every entry gets its own degree-(threshold-1) polynomial with
/// uniform coefficients, evaluated at points 1..n_shares. With symmetric=true
/// (square secrets only) the randomness is mirrored so shares stay symmetric
/// and only the upper triangle needs transmitting.
std::vector<SssShare> share_matrix(const field::FieldMatrix& secret, int n_shares, int threshold,
                                   const field::PrimeField& f, Rng& rng, bool symmetric = false);

/// Same, with caller-provided coefficient matrices (threshold-1 of them). Test
/// hook for frozen-randomness oracles.
std::vector<SssShare> share_matrix_with_randomness(const field::FieldMatrix& secret, int n_shares,
                                                   int threshold, const field::PrimeField& f,
                                                   std::span<const field::FieldMatrix> coeffs);

/// Lagrange interpolation at t=0 from the first `threshold` shares; exact.
/// Throws on duplicate indices or fewer than `threshold` shares.
field::FieldMatrix reconstruct(std::span<const SssShare> shares, int threshold,
                               const field::PrimeField& f);

/// Entrywise sum of two shares with equal indices; the result is a valid share
/// of the summed secrets.
SssShare add_shares(const SssShare& a, const SssShare& b, const field::PrimeField& f);

}  // namespace codedfl::secret
