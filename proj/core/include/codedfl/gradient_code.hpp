#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "codedfl/fixed_point.hpp"

namespace codedfl::coding {

/// Raised when a survivor set cannot be decoded against the drawn encoding
/// matrix (an unlucky draw; callers rebuild with a fresh seed).
class DecodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Cyclic data-sharing table: `redundancy` rows by `num_devices` columns.
/// Column j (1-based devices) lists the devices whose data device j holds:
/// {j, j+1, ..., j+redundancy-1} cyclically. Entries are 1-based device ids;
/// accessor indices are 0-based.
struct AssignmentMatrix {
  int redundancy = 1;
  int num_devices = 1;
  std::vector<int> entries;  // row-major, redundancy x num_devices

  int at(int row, int col) const { return entries[std::size_t(row) * num_devices + col]; }
};

AssignmentMatrix build_assignment(int redundancy, int num_devices);

struct BuildOptions {
  int max_retries = 16;
  /// Verify all survivor patterns when their count is at most this; otherwise
  /// verify all cyclic windows plus `sampled_patterns` random subsets.
  std::int64_t exhaustive_cap = 4096;
  int sampled_patterns = 64;
};

/// Cyclic encoding matrix: row i has support {i, i+1, ..., i+support_size-1}
/// (mod length) and any (length - support_size + 1) rows span the all-ones
/// vector, so the sum of all codewords is recoverable from that many rows.
struct EncodingMatrix {
  int support_size = 1;  // nonzeros per row and per column
  int length = 1;        // number of codewords == number of data partitions
  fxp::FxMatrix coeffs;  // length x length, zeros off support
  std::uint64_t seed = 0;

  std::vector<int> row_support(int row) const;
  int min_survivors() const { return length - support_size + 1; }
};

/// Draws the randomized cyclic construction in high precision, quantizes to
/// cfg, verifies decodability over survivor patterns, and re-draws on failure
/// (bounded by opts.max_retries). Throws std::runtime_error when the retry
/// budget is exhausted.
EncodingMatrix build_encoding(int support_size, int length, const fxp::FxConfig& cfg,
                              std::uint64_t seed, const BuildOptions& opts = {});

/// Weights reconstructing the all-ones combination from the survivor rows.
struct DecodeVector {
  std::vector<int> survivors;          // 0-based codeword indices, |.| == min_survivors
  std::vector<fxp::FxValue> weights;   // aligned with survivors
};

/// Solves weights such that sum_i w_i * row(survivors[i]) ~= all-ones, in high
/// precision, then quantizes. Throws DecodeError when the system is singular
/// or the quantized residual exceeds decode_tolerance().
DecodeVector decode_vector(const EncodingMatrix& code, std::vector<int> survivors);

/// Default residual tolerance: 2^(-f+4) * length in the infinity norm.
double decode_tolerance(const EncodingMatrix& code);

/// || w * B_A - 1 ||_inf computed on the quantized weights and coefficients.
double residual_inf_norm(const EncodingMatrix& code, const DecodeVector& dv);

}  // namespace codedfl::coding
