#include "codedfl/protocol/padded.hpp"

#include <algorithm>
#include <stdexcept>

#include "codedfl/rng.hpp"

namespace codedfl::proto {

std::vector<std::vector<int>> assign_groups(int num_devices, int num_groups) {
  if (num_groups < 1 || num_groups > num_devices)
    throw std::invalid_argument("need 1 <= groups <= devices");
  std::vector<std::vector<int>> groups(num_groups);
  for (int i = 0; i < num_devices; ++i) groups[i % num_groups].push_back(i + 1);
  return groups;
}

PaddedProtocol::PaddedProtocol(const std::vector<learning::DevicePartition>& partitions,
                               const PaddedConfig& config)
    : config_(config) {
  if (partitions.empty()) throw std::invalid_argument("no device partitions");
  fx_ = partitions[0].fx_gram_xy.config();
  dim_ = partitions[0].fx_gram_xx.rows();
  classes_ = partitions[0].fx_gram_xy.cols();

  const auto layout = assign_groups(int(partitions.size()), config.num_groups);
  for (const auto& ids : layout)
    if (config.redundancy > int(ids.size()))
      throw std::invalid_argument("redundancy exceeds the smallest group size");

  for (std::size_t gi = 0; gi < layout.size(); ++gi) {
    PaddedGroup group;
    group.device_ids = layout[gi];
    const int g = int(group.device_ids.size());
    group.assignment = coding::build_assignment(config.redundancy, g);

    group.padded_gradient.reserve(g);
    group.padded_gram.reserve(g);
    for (int pos = 0; pos < g; ++pos) {
      const auto& part = partitions[std::size_t(group.device_ids[pos]) - 1];
      Rng pad_rng = make_rng(
          derive_seed(config.protocol_seed, {stream::kPads, std::uint64_t(part.device_id)}));
      fxp::PadMatrix pad_g = config.zero_pads
                                 ? fxp::zero_pad(dim_, classes_, fx_, false)
                                 : fxp::make_pad(dim_, classes_, fx_, false, pad_rng);
      fxp::PadMatrix pad_x = config.zero_pads ? fxp::zero_pad(dim_, dim_, fx_, true)
                                              : fxp::make_pad(dim_, dim_, fx_, true, pad_rng);
      // First-epoch gradient with an all-zero initial model: -X^T Y.
      const fxp::FxMatrix g1 =
          fxp::sub(fxp::FxMatrix::zeros(dim_, classes_, fx_), part.fx_gram_xy);
      group.padded_gradient.push_back(fxp::pad_apply(g1, pad_g));
      group.padded_gram.push_back(fxp::pad_apply(part.fx_gram_xx, pad_x));
      group.pad_gradient.push_back(std::move(pad_g));
      group.pad_gram.push_back(std::move(pad_x));
    }
    groups_.push_back(std::move(group));
  }
  encode_groups();
}

void PaddedProtocol::encode_groups() {
  for (std::size_t gi = 0; gi < groups_.size(); ++gi) {
    PaddedGroup& group = groups_[gi];
    const int g = int(group.device_ids.size());
    group.code = coding::build_encoding(
        config_.redundancy, g, fx_,
        derive_seed(config_.protocol_seed,
                    {stream::kCode, std::uint64_t(gi), std::uint64_t(code_attempt_)}),
        config_.code_options);

    group.coded_gradient.clear();
    group.coded_gram.clear();
    group.combined_pad_gradient.clear();
    group.combined_pad_gram.clear();
    // Device-side encoding and the server's combined pad registry use the
    // same quantized coefficients, so pad removal cancels to within the
    // floor-scaling error.
    for (int pos = 0; pos < g; ++pos) {
      fxp::FxMatrix coded_g = fxp::FxMatrix::zeros(dim_, classes_, fx_);
      fxp::FxMatrix coded_x = fxp::FxMatrix::zeros(dim_, dim_, fx_);
      fxp::FxMatrix comb_pad_g = fxp::FxMatrix::zeros(dim_, classes_, fx_);
      fxp::FxMatrix comb_pad_x = fxp::FxMatrix::zeros(dim_, dim_, fx_);
      for (int src : group.code.row_support(pos)) {
        const fxp::FxValue coeff = group.code.coeffs.at(pos, src);
        coded_g = fxp::add(coded_g, fxp::scalar_mul(coeff, group.padded_gradient[src]));
        coded_x = fxp::add(coded_x, fxp::scalar_mul(coeff, group.padded_gram[src]));
        comb_pad_g =
            fxp::add(comb_pad_g, fxp::scalar_mul(coeff, group.pad_gradient[src].values));
        comb_pad_x = fxp::add(comb_pad_x, fxp::scalar_mul(coeff, group.pad_gram[src].values));
      }
      group.coded_gradient.push_back(std::move(coded_g));
      group.coded_gram.push_back(std::move(coded_x));
      group.combined_pad_gradient.push_back(std::move(comb_pad_g));
      group.combined_pad_gram.push_back(std::move(comb_pad_x));
    }
  }
}

void PaddedProtocol::redraw_codes() {
  ++code_attempt_;
  encode_groups();
}

PaddedProtocol::EpochResult PaddedProtocol::run_epoch(
    const fxp::FxMatrix& model_delta,
    const std::vector<std::vector<int>>& survivors_per_group) const {
  if (survivors_per_group.size() != groups_.size())
    throw std::invalid_argument("survivor lists do not match the group count");

  EpochResult result;
  result.decoded_gradient = fxp::FxMatrix::zeros(dim_, classes_, fx_);
  for (std::size_t gi = 0; gi < groups_.size(); ++gi) {
    const PaddedGroup& group = groups_[gi];
    const auto& survivors = survivors_per_group[gi];
    if (int(survivors.size()) != group.min_survivors())
      throw std::invalid_argument("wrong survivor count for group");

    const coding::DecodeVector dv = coding::decode_vector(group.code, survivors);
    // The decoded combination must honor the flat tolerance: a residual above
    // it feeds errors proportional to the summed gradient magnitudes into the
    // model. Such survivor sets exist for unlucky draws; redraw and retry.
    if (coding::residual_inf_norm(group.code, dv) > coding::decode_tolerance(group.code))
      throw coding::DecodeError("survivor set is too ill-conditioned for this code draw");

    fxp::FxMatrix group_sum = fxp::FxMatrix::zeros(dim_, classes_, fx_);
    for (std::size_t si = 0; si < survivors.size(); ++si) {
      const int pos = survivors[si];
      // Device computes its coded update on the broadcast delta.
      const fxp::FxMatrix update =
          fxp::add(group.coded_gradient[pos], fxp::matmul(group.coded_gram[pos], model_delta));
      // Server strips the combined pads.
      const fxp::FxMatrix unpadded =
          fxp::sub(fxp::sub(update, group.combined_pad_gradient[pos]),
                   fxp::matmul(group.combined_pad_gram[pos], model_delta));
      group_sum = fxp::add(group_sum, fxp::scalar_mul(dv.weights[si], unpadded));
      result.contributors.push_back(group.device_ids[pos]);
    }
    result.decoded_gradient = fxp::add(result.decoded_gradient, group_sum);
  }
  std::sort(result.contributors.begin(), result.contributors.end());
  return result;
}

}  // namespace codedfl::proto
