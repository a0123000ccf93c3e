#pragma once

#include <cstdint>

#include "codedfl/rng.hpp"

namespace codedfl::latency {

/// Per-device computation and link parameters. Compute times are shifted
/// exponential (rho/tau plus Exp with rate eta); transmissions retry with
/// geometric try counts and a fractional header overhead per leg.
struct DeviceProfile {
  double mac_rate = 25e6;        // tau, MAC/s
  double setup_rate = 1.0;       // eta, 1/s; +inf disables the random term
  double up_bps = 5e6;           // gamma^u
  double down_bps = 10e6;        // gamma^d
  double loss_prob = 0.1;        // p
  double header_overhead = 0.1;  // fraction added per transmission leg

  void validate() const;
};

/// rho/tau + Exp(eta).
double sample_compute(double macs, const DeviceProfile& dp, Rng& rng);

/// N * bits*(1+h) / rate with N geometric on {1,2,...}, success prob 1-p.
double sample_link(double payload_bits, double rate_bps, double loss_prob, double header_overhead,
                   Rng& rng);

double sample_upload(double payload_bits, const DeviceProfile& dp, Rng& rng);
double sample_download(double payload_bits, const DeviceProfile& dp, Rng& rng);

/// Closed-form MAC counts for the protocol workloads.
struct WorkloadDescriptor {
  enum class Kind {
    kEpochGradient,          // d^2 c: coded/secure epoch update
    kPadEncode,              // (alpha-1) d ((d+1)/2 + c): one-time-pad encoding
    kShareSum,               // (group_size-1) d ((d+1)/2 + c): summing received shares
    kPaddedDecodePerDevice,  // d^2 c: pad removal per received device
    kPaddedCombine,          // received * d * c: decode linear combination
    kSecaggDecode,           // (threshold + 1) * d * c: interpolation + final scaling
    kRelayAdd,               // d * c: one share addition during relaying
    kConventionalMinibatch,  // 2 * batch * d * c
    kServerAggregate,        // contributors * d * c
  };
  Kind kind = Kind::kEpochGradient;
  int d = 0;
  int c = 0;
  int alpha = 0;
  int group_size = 0;
  int received = 0;
  int threshold = 0;
  int batch = 0;
  int contributors = 0;
};

double mac_count(const WorkloadDescriptor& w);

/// Entries in one Psi+Phi payload (the Phi half is symmetric, so only the
/// upper triangle travels): d((d+1)/2 + c).
double shared_pair_entries(int d, int c);

/// Entries in one model update / model delta: d * c.
double model_update_entries(int d, int c);

}  // namespace codedfl::latency
