#pragma once

#include <cstdint>
#include <vector>

#include "codedfl/fixed_point.hpp"
#include "codedfl/gradient_code.hpp"
#include "codedfl/learning.hpp"

namespace codedfl::proto {

/// Straggler-resilient FL via one-time-padded data sharing and a cyclic
/// gradient code. Devices pad their first gradient and Gram matrix, share the
/// padded pair inside their group, and encode; every epoch the server decodes
/// the aggregate gradient from the fastest (group_size - redundancy + 1)
/// devices per group after removing the pads it holds.
struct PaddedConfig {
  int redundancy = 1;         // devices holding each padded pair (alpha)
  int num_groups = 1;         // groups need not divide the device count
  std::uint64_t protocol_seed = 0;
  coding::BuildOptions code_options;
  /// Test hook: all-zero pads make the data plane bit-comparable to plain
  /// federated fixed-point gradient descent.
  bool zero_pads = false;
};

struct PaddedGroup {
  std::vector<int> device_ids;         // 1-based global ids, ascending
  coding::AssignmentMatrix assignment; // sharing table for the group
  coding::EncodingMatrix code;

  // Device-side state, indexed by position within the group.
  std::vector<fxp::FxMatrix> coded_gradient;  // C_i
  std::vector<fxp::FxMatrix> coded_gram;      // symmetric

  // Server-side pad registry, pre-combined with the code coefficients so pad
  // removal per received device is one d x c subtraction plus one d x d by
  // d x c product.
  std::vector<fxp::FxMatrix> combined_pad_gradient;
  std::vector<fxp::FxMatrix> combined_pad_gram;

  // Raw padded matrices, kept for tests that check the sharing phase itself.
  std::vector<fxp::FxMatrix> padded_gradient;  // Psi
  std::vector<fxp::FxMatrix> padded_gram;      // Phi
  std::vector<fxp::PadMatrix> pad_gradient;
  std::vector<fxp::PadMatrix> pad_gram;

  int min_survivors() const { return int(device_ids.size()) - code.support_size + 1; }
};

class PaddedProtocol {
 public:
  /// Runs the data plane of the sharing phase: pads, padded matrices, group
  /// codes, encodings, and the server's combined pad registry. Latency is the
  /// simulator's concern. Throws when redundancy exceeds the smallest group.
  PaddedProtocol(const std::vector<learning::DevicePartition>& partitions,
                 const PaddedConfig& config);

  struct EpochResult {
    fxp::FxMatrix decoded_gradient;  // d x c aggregate over all devices
    std::vector<int> contributors;   // 1-based global ids, ascending
  };

  /// Data plane of one epoch: the listed survivors per group (group-local
  /// 0-based positions, exactly min_survivors() many) compute their coded
  /// updates on the broadcast model delta; the server removes pads, applies
  /// the decode weights, and sums group aggregates. Throws coding::DecodeError
  /// when a group's survivor set cannot be decoded within the flat tolerance
  /// (an unlucky code draw); call redraw_codes() and retry the epoch.
  EpochResult run_epoch(const fxp::FxMatrix& model_delta,
                        const std::vector<std::vector<int>>& survivors_per_group) const;

  /// Redraws every group's encoding matrix with a fresh seed and re-encodes
  /// locally. The padded matrices are already shared, so this is pure local
  /// compute for the devices plus a pad re-combination at the server; only
  /// the new code seed needs broadcasting.
  void redraw_codes();

  const std::vector<PaddedGroup>& groups() const { return groups_; }
  const PaddedConfig& config() const { return config_; }
  int feature_dim() const { return dim_; }
  int label_dim() const { return classes_; }

 private:
  void encode_groups();

  PaddedConfig config_;
  fxp::FxConfig fx_;
  int dim_ = 0;
  int classes_ = 0;
  int code_attempt_ = 0;
  std::vector<PaddedGroup> groups_;
};

/// Round-robin group assignment by device index: device i (0-based) joins
/// group i mod num_groups. Returns per-group lists of 1-based device ids.
std::vector<std::vector<int>> assign_groups(int num_devices, int num_groups);

}  // namespace codedfl::proto
