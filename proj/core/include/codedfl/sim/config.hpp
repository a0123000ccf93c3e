#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "codedfl/learning.hpp"

namespace codedfl::sim {

enum class Scheme { kPadded, kSecAgg, kConventional };
enum class DatasetKind { kSynthetic, kMnist, kFashionMnist, kDigits };

std::string to_string(Scheme s);
std::string to_string(DatasetKind d);

/// `count` devices sharing one MAC rate; devices are numbered 1..D in class
/// order, so slower classes listed last get the highest ids.
struct DeviceClass {
  int count = 0;
  double mac_rate = 0.0;
};

struct ConfigIssue {
  std::string field;
  std::string message;
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<ConfigIssue> issues);
  const std::vector<ConfigIssue>& issues() const { return issues_; }

 private:
  std::vector<ConfigIssue> issues_;
};

struct ExperimentConfig {
  Scheme scheme = Scheme::kPadded;

  // Dataset.
  DatasetKind dataset = DatasetKind::kSynthetic;
  std::string data_dir;  // directory with IDX files; defaulted per kind when empty
  int train_limit = 0;   // 0 keeps everything
  int test_limit = 0;
  learning::SyntheticParams synthetic;

  // Kernel embedding (image datasets).
  bool embed_enabled = true;
  double kernel_gamma = 5.0;
  int embed_features = 256;
  std::string cache_dir;  // empty disables the embedding cache

  // Fixed point.
  int fx_total_bits = 48;
  int fx_frac_bits = 24;

  // Devices and server.
  std::vector<DeviceClass> device_classes{{4, 25e6}};
  double server_mac_rate = 8.24e12;
  /// Mean random setup time as a fraction of the deterministic per-epoch
  /// compute time; 0 disables the random term.
  double setup_mean_ratio = 0.5;

  // Links.
  double up_bps = 5e6;
  double down_bps = 10e6;
  double loss_prob = 0.1;
  double header_overhead = 0.1;

  // Scheme parameters.
  int redundancy = 1;               // padded: devices holding each padded pair
  int threshold = 2;                // secagg: shares needed to reconstruct
  int collusion = 1;                // secagg: tolerated colluding agents
  int num_groups = 1;               // padded/secagg
  double minibatch_fraction = 0.2;  // conventional
  int drop_count = 0;               // conventional

  // Training.
  int epochs = 100;
  learning::LearningRateSchedule schedule;
  double regularization = 9e-6;

  // Seeds (independent streams).
  std::uint64_t data_seed = 1;
  std::uint64_t protocol_seed = 2;
  std::uint64_t latency_seed = 3;

  // Output.
  std::string out_dir = "out";
  std::vector<double> accuracy_targets{0.95};

  int num_devices() const;
  /// Effective dataset directory (per-kind default when unset).
  std::string dataset_dir() const;
  /// Throws ConfigError with field-level messages.
  void validate() const;
};

ExperimentConfig default_config();

/// Parses JSON text over the defaults, then applies dotted-key overrides
/// ("scheme_params.redundancy=16"); unknown keys are validation errors.
ExperimentConfig parse_config(const std::string& json_text,
                              const std::vector<std::string>& overrides = {});

/// Canonical JSON (sorted keys, stable formatting); serialize(parse(x)) is
/// idempotent.
std::string serialize_config(const ExperimentConfig& cfg);

std::uint64_t config_hash(const ExperimentConfig& cfg);

}  // namespace codedfl::sim
