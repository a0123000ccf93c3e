#include "codedfl/protocol/conventional.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace codedfl::proto {

ConventionalProtocol::ConventionalProtocol(
    const std::vector<learning::DevicePartition>& partitions, const ConventionalConfig& config)
    : config_(config), partitions_(&partitions) {
  if (partitions.empty()) throw std::invalid_argument("no device partitions");
  if (!(config.minibatch_fraction > 0.0 && config.minibatch_fraction <= 1.0))
    throw std::invalid_argument("minibatch fraction must be in (0, 1]");
  if (config.drop_count < 0 || config.drop_count >= int(partitions.size()))
    throw std::invalid_argument("drop count must be in [0, devices)");
  slices_ = std::max(1, int(std::lround(1.0 / config.minibatch_fraction)));
}

ConventionalProtocol::Slice ConventionalProtocol::slice_for(int device_id, int epoch) const {
  const auto& part = (*partitions_)[std::size_t(device_id) - 1];
  const int n = part.samples;
  const int w = (epoch - 1) % slices_;  // deterministic rotation
  Slice s;
  s.begin = int(std::int64_t(w) * n / slices_);
  s.end = int(std::int64_t(w + 1) * n / slices_);
  return s;
}

int ConventionalProtocol::batch_size(int device_id, int epoch) const {
  const Slice s = slice_for(device_id, epoch);
  return s.end - s.begin;
}

ConventionalProtocol::EpochResult ConventionalProtocol::run_epoch(
    const learning::RealMatrix& theta, int epoch, const std::vector<int>& contributors) const {
  EpochResult result;
  result.gradient_sum =
      learning::RealMatrix::Zero((*partitions_)[0].x.cols(), theta.cols());
  result.contributors = contributors;
  std::sort(result.contributors.begin(), result.contributors.end());
  for (int id : result.contributors) {
    const auto& part = (*partitions_)[std::size_t(id) - 1];
    const Slice s = slice_for(id, epoch);
    const int n = s.end - s.begin;
    if (n == 0) continue;
    const auto xb = part.x.middleRows(s.begin, n);
    const auto yb = part.y.middleRows(s.begin, n);
    result.gradient_sum += xb.transpose() * (xb * theta) - xb.transpose() * yb;
    result.contributing_samples += n;
  }
  return result;
}

}  // namespace codedfl::proto
