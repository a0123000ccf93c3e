#include "codedfl/protocol/secagg.hpp"

#include <algorithm>
#include <stdexcept>

#include "codedfl/protocol/padded.hpp"
#include "codedfl/rng.hpp"

namespace codedfl::proto {

using field::FieldMatrix;
using field::PrimeField;

std::vector<int> group_transmitters(int step, int groups) {
  if (step < 1) throw std::invalid_argument("relay steps are 1-based");
  std::vector<int> out;
  const int span = 1 << step;            // 2^s
  const int target = (span / 2 + 1) % span;  // (2^(s-1) + 1) mod 2^s
  for (int j = 1; j <= groups; ++j)
    if (j % span == target) out.push_back(j);
  return out;
}

int relay_steps(int groups) {
  int steps = 0;
  while ((1 << steps) < groups) ++steps;
  return steps;
}

namespace {

PrimeField select_field(const SecAggConfig& config, const fxp::FxConfig& fx) {
  if (config.modulus != 0) return PrimeField(config.modulus);
  return PrimeField::for_fixed_point(fx);
}

std::string phase1_sharing_id(int device_id, const char* kind) {
  return "phase1/dev" + std::to_string(device_id) + "/" + kind;
}

}  // namespace

SecAggProtocol::SecAggProtocol(const std::vector<learning::DevicePartition>& partitions,
                               const SecAggConfig& config)
    : config_(config),
      fx_(partitions.empty() ? fxp::FxConfig{} : partitions[0].fx_gram_xy.config()),
      field_(select_field(config, fx_)) {
  if (partitions.empty()) throw std::invalid_argument("no device partitions");
  const int devices = int(partitions.size());
  if (config.num_groups < 1 || devices % config.num_groups != 0)
    throw std::invalid_argument("group count must divide the device count");
  group_size_ = devices / config.num_groups;
  if (config.threshold < 1 || config.threshold > group_size_)
    throw std::invalid_argument("threshold must be in [1, group size]");
  if (config.threshold <= config.collusion)
    throw std::invalid_argument("threshold must exceed the collusion level");

  dim_ = partitions[0].fx_gram_xx.rows();
  classes_ = partitions[0].fx_gram_xy.cols();
  layout_ = assign_groups(devices, config.num_groups);

  gradient_share_.assign(config.num_groups,
                         std::vector<FieldMatrix>(group_size_, FieldMatrix(dim_, classes_)));
  gram_share_.assign(config.num_groups,
                     std::vector<FieldMatrix>(group_size_, FieldMatrix(dim_, dim_)));

  for (int g = 0; g < config.num_groups; ++g) {
    for (int slot = 0; slot < group_size_; ++slot) {
      const int device_id = layout_[g][slot];
      const auto& part = partitions[std::size_t(device_id) - 1];
      Rng rng = make_rng(
          derive_seed(config.protocol_seed, {stream::kShares, std::uint64_t(device_id)}));

      // The first gradient is premultiplied by 2^f before sharing so the
      // standalone term of the epoch update carries the same postponed scale
      // as the Gram-times-delta product.
      const fxp::FxMatrix g1 =
          fxp::sub(fxp::FxMatrix::zeros(dim_, classes_, fx_), part.fx_gram_xy);
      const FieldMatrix secret_grad = field::encode_fx(g1, field_, fx_.frac_bits);
      const FieldMatrix secret_gram = field::encode_fx(part.fx_gram_xx, field_, 0);

      const auto grad_shares =
          secret::share_matrix(secret_grad, group_size_, config.threshold, field_, rng, false);
      const auto gram_shares =
          secret::share_matrix(secret_gram, group_size_, config.threshold, field_, rng, true);
      for (int r = 0; r < group_size_; ++r) {
        gradient_share_[g][r] = field::add(field_, gradient_share_[g][r], grad_shares[r].payload);
        gram_share_[g][r] = field::add(field_, gram_share_[g][r], gram_shares[r].payload);
        ledger_.note(phase1_sharing_id(device_id, "grad"), layout_[g][r], r + 1);
        ledger_.note(phase1_sharing_id(device_id, "gram"), layout_[g][r], r + 1);
      }
    }
  }
}

SecAggProtocol::EpochResult SecAggProtocol::run_epoch(const fxp::FxMatrix& model_delta,
                                                      const std::vector<int>& slots) {
  if (int(slots.size()) != config_.threshold)
    throw std::invalid_argument("need exactly `threshold` device slots");
  for (int s : slots)
    if (s < 0 || s >= group_size_) throw std::invalid_argument("slot out of range");
  ++epoch_counter_;
  const std::string epoch_tag = "epoch" + std::to_string(epoch_counter_);

  const FieldMatrix delta_field = field::encode_fx(model_delta, field_, 0);
  const int groups = config_.num_groups;

  // Every listed slot in every group computes its field update; the relay tree
  // then accumulates, per slot, the group partial sums into the master group.
  std::vector<std::vector<FieldMatrix>> update(groups);
  for (int g = 0; g < groups; ++g) {
    update[g].reserve(slots.size());
    for (int slot : slots)
      update[g].push_back(field::add(field_, gradient_share_[g][slot],
                                     field::matmul(field_, gram_share_[g][slot], delta_field)));
  }

  // acc[g][si] holds sum_{j'=g..} of updates, built leaves-to-root.
  std::vector<std::vector<FieldMatrix>>& acc = update;
  for (int step = 1; step <= relay_steps(groups); ++step) {
    for (int j : group_transmitters(step, groups)) {
      const int dst = j - (1 << (step - 1));
      for (std::size_t si = 0; si < slots.size(); ++si) {
        acc[dst - 1][si] = field::add(field_, acc[dst - 1][si], acc[j - 1][si]);
        // The receiving device sees one share of the transmitted partial sum.
        ledger_.note(epoch_tag + "/partial/from-g" + std::to_string(j),
                     layout_[dst - 1][slots[si]], slots[si] + 1);
      }
    }
  }

  EpochResult result;
  std::vector<secret::SssShare> master_shares;
  for (std::size_t si = 0; si < slots.size(); ++si) {
    master_shares.push_back(secret::SssShare{slots[si] + 1, std::move(acc[0][si])});
    result.contributors.push_back(layout_[0][slots[si]]);
    ledger_.note(epoch_tag + "/global", 0, slots[si] + 1);
  }
  std::sort(result.contributors.begin(), result.contributors.end());

  result.field_aggregate = secret::reconstruct(master_shares, config_.threshold, field_);
  result.decoded_gradient = field::decode_to_fx(result.field_aggregate, field_, fx_);
  return result;
}

}  // namespace codedfl::proto
