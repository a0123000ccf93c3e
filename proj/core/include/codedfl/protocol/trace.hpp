#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace codedfl::proto {

/// One per-epoch record of the simulated run.
struct EpochTraceRow {
  int epoch = 0;
  double cumulative_seconds = 0.0;
  double train_loss = 0.0;
  double test_accuracy = 0.0;
  std::vector<int> contributors;  // 1-based device ids, ascending
};

struct RunTrace {
  std::string scheme;
  std::uint64_t config_hash = 0;
  double phase1_seconds = 0.0;
  /// FNV-1a over every decoded aggregate's raw entries, epoch by epoch.
  std::uint64_t aggregate_checksum = 0;
  std::vector<EpochTraceRow> rows;
};

inline std::uint64_t fnv1a(std::uint64_t h, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (8 * i)) & 0xff;
    h *= 0x100000001b3ULL;
  }
  return h;
}

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;

}  // namespace codedfl::proto
