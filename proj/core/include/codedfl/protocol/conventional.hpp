#pragma once

#include <cstdint>
#include <vector>

#include "codedfl/learning.hpp"

namespace codedfl::proto {

/// Conventional federated mini-batch gradient descent. Devices rotate
/// deterministically through fixed contiguous slices of their local data; the
/// server aggregates whatever subset arrived in time (the simulator decides
/// who contributes) with m set to the contributed sample count.
struct ConventionalConfig {
  double minibatch_fraction = 0.2;  // slice size as a fraction of local data
  int drop_count = 0;               // slowest devices ignored per epoch
};

class ConventionalProtocol {
 public:
  ConventionalProtocol(const std::vector<learning::DevicePartition>& partitions,
                       const ConventionalConfig& config);

  struct EpochResult {
    learning::RealMatrix gradient_sum;
    std::int64_t contributing_samples = 0;
    std::vector<int> contributors;  // 1-based device ids, ascending
  };

  /// Sum of mini-batch gradients over `contributors` (1-based device ids) for
  /// the given epoch's rotation slice.
  EpochResult run_epoch(const learning::RealMatrix& theta, int epoch,
                        const std::vector<int>& contributors) const;

  /// Samples in device `device_id`'s slice at `epoch` (drives the compute
  /// workload accounting).
  int batch_size(int device_id, int epoch) const;

  int num_slices() const { return slices_; }
  const ConventionalConfig& config() const { return config_; }

 private:
  struct Slice {
    int begin = 0;
    int end = 0;
  };
  Slice slice_for(int device_id, int epoch) const;

  ConventionalConfig config_;
  const std::vector<learning::DevicePartition>* partitions_;
  int slices_ = 1;
};

}  // namespace codedfl::proto
