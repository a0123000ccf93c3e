#include "codedfl/latency.hpp"

#include <cmath>
#include <stdexcept>

namespace codedfl::latency {

void DeviceProfile::validate() const {
  if (!(mac_rate > 0)) throw std::invalid_argument("mac_rate must be positive");
  if (!(setup_rate > 0)) throw std::invalid_argument("setup_rate must be positive");
  if (!(up_bps > 0) || !(down_bps > 0)) throw std::invalid_argument("link rates must be positive");
  if (!(loss_prob >= 0.0 && loss_prob < 1.0))
    throw std::invalid_argument("loss probability must be in [0, 1)");
  if (!(header_overhead >= 0.0)) throw std::invalid_argument("header overhead must be >= 0");
}

double sample_compute(double macs, const DeviceProfile& dp, Rng& rng) {
  if (macs < 0) throw std::invalid_argument("MAC count must be nonnegative");
  double setup = 0.0;
  if (std::isfinite(dp.setup_rate)) {
    std::exponential_distribution<double> exp(dp.setup_rate);
    setup = exp(rng);
  }
  return macs / dp.mac_rate + setup;
}

double sample_link(double payload_bits, double rate_bps, double loss_prob, double header_overhead,
                   Rng& rng) {
  if (payload_bits < 0) throw std::invalid_argument("payload must be nonnegative");
  if (payload_bits == 0) return 0.0;
  std::geometric_distribution<int> failures(1.0 - loss_prob);
  const double tries = 1.0 + double(failures(rng));
  return tries * payload_bits * (1.0 + header_overhead) / rate_bps;
}

double sample_upload(double payload_bits, const DeviceProfile& dp, Rng& rng) {
  return sample_link(payload_bits, dp.up_bps, dp.loss_prob, dp.header_overhead, rng);
}

double sample_download(double payload_bits, const DeviceProfile& dp, Rng& rng) {
  return sample_link(payload_bits, dp.down_bps, dp.loss_prob, dp.header_overhead, rng);
}

double shared_pair_entries(int d, int c) {
  return double(d) * (double(d + 1) / 2.0 + double(c));
}

double model_update_entries(int d, int c) { return double(d) * double(c); }

double mac_count(const WorkloadDescriptor& w) {
  using Kind = WorkloadDescriptor::Kind;
  switch (w.kind) {
    case Kind::kEpochGradient:
      return double(w.d) * double(w.d) * double(w.c);
    case Kind::kPadEncode:
      return double(w.alpha - 1) * shared_pair_entries(w.d, w.c);
    case Kind::kShareSum:
      return double(w.group_size - 1) * shared_pair_entries(w.d, w.c);
    case Kind::kPaddedDecodePerDevice:
      return double(w.d) * double(w.d) * double(w.c);
    case Kind::kPaddedCombine:
      return double(w.received) * model_update_entries(w.d, w.c);
    case Kind::kSecaggDecode:
      return double(w.threshold + 1) * model_update_entries(w.d, w.c);
    case Kind::kRelayAdd:
      return model_update_entries(w.d, w.c);
    case Kind::kConventionalMinibatch:
      return 2.0 * double(w.batch) * double(w.d) * double(w.c);
    case Kind::kServerAggregate:
      return double(w.contributors) * model_update_entries(w.d, w.c);
  }
  throw std::invalid_argument("unknown workload descriptor");
}

}  // namespace codedfl::latency
