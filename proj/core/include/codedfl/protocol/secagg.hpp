#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "codedfl/fixed_point.hpp"
#include "codedfl/learning.hpp"
#include "codedfl/prime_field.hpp"
#include "codedfl/secret_sharing.hpp"

namespace codedfl::proto {

/// Secure aggregation with straggler resiliency: devices secret-share their
/// scaled first gradient and Gram matrix inside equally-sized groups, sum the
/// received shares, and compute every epoch's update in pure field arithmetic
/// (no intermediate rescaling). Groups relay partial-sum shares down a binary
/// tree into the master group (group 1), whose threshold fastest devices let
/// the server reconstruct exactly; the single floor-scale happens after
/// reconstruction.
struct SecAggConfig {
  int threshold = 2;     // shares needed to reconstruct (k')
  int num_groups = 1;    // must divide the device count
  int collusion = 1;     // tolerated colluding agents (z); threshold must exceed it
  std::uint64_t protocol_seed = 0;
  /// Field modulus override; 0 selects the smallest prime above 2^(k+f).
  field::u128 modulus = 0;
};

/// Which (sharing, evaluation index) pairs an agent has seen. Agents are
/// device ids (1-based) or 0 for the server. The test suite uses this to check
/// that no agent coalition below the threshold can reconstruct anything but
/// the global aggregate.
struct ObservationLedger {
  // sharing id -> agent -> observed evaluation indices
  std::map<std::string, std::map<int, std::vector<int>>> observed;

  void note(const std::string& sharing, int agent, int index) {
    observed[sharing][agent].push_back(index);
  }
};

class SecAggProtocol {
 public:
  SecAggProtocol(const std::vector<learning::DevicePartition>& partitions,
                 const SecAggConfig& config);

  struct EpochResult {
    fxp::FxMatrix decoded_gradient;       // floor-scaled aggregate
    field::FieldMatrix field_aggregate;   // reconstructed value before scaling
    std::vector<int> contributors;        // 1-based master-group device ids
  };

  /// Data plane of one epoch for the given device slots (0-based positions
  /// within every group, exactly `threshold` of them): each listed slot in
  /// every group computes its field update, slots accumulate the relayed
  /// group partial sums, and the server reconstructs from the master group.
  EpochResult run_epoch(const fxp::FxMatrix& model_delta, const std::vector<int>& slots);

  const field::PrimeField& prime_field() const { return field_; }
  const SecAggConfig& config() const { return config_; }
  int num_groups() const { return config_.num_groups; }
  int group_size() const { return group_size_; }
  int feature_dim() const { return dim_; }
  int label_dim() const { return classes_; }
  /// Device id (1-based) of slot `slot` in group `group` (both 0-based).
  int device_id(int group, int slot) const { return layout_[group][slot]; }
  const ObservationLedger& ledger() const { return ledger_; }

 private:
  SecAggConfig config_;
  fxp::FxConfig fx_;
  field::PrimeField field_;
  int dim_ = 0;
  int classes_ = 0;
  int group_size_ = 0;
  std::vector<std::vector<int>> layout_;  // group -> slot -> 1-based device id
  // group -> slot -> summed shares of the group's scaled gradient / Gram.
  std::vector<std::vector<field::FieldMatrix>> gradient_share_;
  std::vector<std::vector<field::FieldMatrix>> gram_share_;
  ObservationLedger ledger_;
  int epoch_counter_ = 0;
};

/// Groups transmitting at relay step s (1-based), per the binary collection
/// tree: {j in [1, groups] : j mod 2^s == (2^(s-1) + 1) mod 2^s}. Group j
/// sends to group j - 2^(s-1); the tree finishes in ceil(log2 groups) steps.
std::vector<int> group_transmitters(int step, int groups);

/// Number of relay steps: ceil(log2 groups).
int relay_steps(int groups);

}  // namespace codedfl::proto
