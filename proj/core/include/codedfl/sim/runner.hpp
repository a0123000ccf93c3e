#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "codedfl/latency.hpp"
#include "codedfl/learning.hpp"
#include "codedfl/protocol/trace.hpp"
#include "codedfl/sim/config.hpp"

namespace codedfl::sim {

struct RunArtifact {
  ExperimentConfig config;
  std::uint64_t hash = 0;
  proto::RunTrace trace;
  double final_accuracy = 0.0;
  double max_accuracy = 0.0;
  double final_train_loss = 0.0;
  std::map<double, std::optional<double>> time_to_target;
  std::string trace_path;
  std::string summary_path;
};

/// Builds (or loads from cache) the configured dataset, embedded and one-hot.
learning::Dataset prepare_dataset(const ExperimentConfig& cfg);

/// Runs setup plus `epochs` simulated epochs; fully deterministic in
/// (config, seeds). Does not touch the filesystem except for dataset loading
/// and the embedding cache.
RunArtifact run(const ExperimentConfig& cfg);

/// First cumulative latency at which test accuracy reaches `target`.
std::optional<double> time_to_accuracy(const proto::RunTrace& trace, double target);

/// Writes trace.csv and summary.json under `out_dir` and records the paths.
void write_artifact(RunArtifact& artifact, const std::string& out_dir);

std::string trace_to_csv(const proto::RunTrace& trace);
std::string summary_to_json(const RunArtifact& artifact);

struct SweepAxis {
  std::string key;                  // dotted config key
  std::vector<std::string> values;  // JSON scalars, applied one per run
};

struct SweepEntry {
  std::string value;
  std::optional<RunArtifact> artifact;  // empty on error
  std::string error;
};

/// One run per axis value with the shared data seed; per-run errors are
/// collected and the sweep continues.
std::vector<SweepEntry> sweep(const ExperimentConfig& base, const SweepAxis& axis);

/// Device profiles in id order, with the setup rate derived from the
/// per-epoch workload (mean setup = setup_mean_ratio x deterministic time).
std::vector<latency::DeviceProfile> build_profiles(const ExperimentConfig& cfg, int feature_dim,
                                                   int label_dim,
                                                   const std::vector<int>& batch_sizes);

}  // namespace codedfl::sim
