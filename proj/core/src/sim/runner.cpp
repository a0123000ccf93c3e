#include "codedfl/sim/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "codedfl/protocol/conventional.hpp"
#include "codedfl/protocol/padded.hpp"
#include "codedfl/protocol/secagg.hpp"
#include "codedfl/rng.hpp"

namespace codedfl::sim {

namespace fs = std::filesystem;
using latency::DeviceProfile;
using learning::Dataset;
using learning::RealMatrix;
using nlohmann::json;

namespace {

// ---------------------------------------------------------------------------
// Dataset preparation and the embedding cache.

constexpr std::uint64_t kCacheMagic = 0x43464c454d423031ULL;  // "CFLEMB01"

std::uint64_t dataset_key(const ExperimentConfig& cfg) {
  std::uint64_t h = proto::kFnvOffset;
  auto mixs = [&h](const std::string& s) {
    for (unsigned char ch : s) {
      h ^= ch;
      h *= 0x100000001b3ULL;
    }
  };
  mixs(to_string(cfg.dataset));
  mixs(cfg.dataset_dir());
  mixs(std::to_string(cfg.train_limit) + "/" + std::to_string(cfg.test_limit));
  mixs(cfg.embed_enabled ? "embed" : "raw");
  mixs(std::to_string(cfg.kernel_gamma) + "/" + std::to_string(cfg.embed_features));
  mixs(std::to_string(cfg.data_seed));
  return h;
}

void write_matrix(std::ofstream& out, const RealMatrix& m) {
  const std::int64_t r = m.rows(), c = m.cols();
  out.write(reinterpret_cast<const char*>(&r), 8);
  out.write(reinterpret_cast<const char*>(&c), 8);
  for (std::int64_t i = 0; i < r; ++i)
    for (std::int64_t j = 0; j < c; ++j) {
      const double v = m(i, j);
      out.write(reinterpret_cast<const char*>(&v), 8);
    }
}

RealMatrix read_matrix(std::ifstream& in) {
  std::int64_t r = 0, c = 0;
  in.read(reinterpret_cast<char*>(&r), 8);
  in.read(reinterpret_cast<char*>(&c), 8);
  RealMatrix m(r, c);
  for (std::int64_t i = 0; i < r; ++i)
    for (std::int64_t j = 0; j < c; ++j) {
      double v = 0;
      in.read(reinterpret_cast<char*>(&v), 8);
      m(i, j) = v;
    }
  return m;
}

void write_labels(std::ofstream& out, const std::vector<int>& labels) {
  const std::int64_t n = std::int64_t(labels.size());
  out.write(reinterpret_cast<const char*>(&n), 8);
  for (int v : labels) out.write(reinterpret_cast<const char*>(&v), 4);
}

std::vector<int> read_labels(std::ifstream& in) {
  std::int64_t n = 0;
  in.read(reinterpret_cast<char*>(&n), 8);
  std::vector<int> labels(static_cast<std::size_t>(n), 0);
  for (auto& v : labels) in.read(reinterpret_cast<char*>(&v), 4);
  return labels;
}

std::string cache_path(const ExperimentConfig& cfg) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(dataset_key(cfg)));
  return (fs::path(cfg.cache_dir) / (std::string("embed-") + buf + ".bin")).string();
}

bool load_cached(const ExperimentConfig& cfg, Dataset& ds) {
  std::ifstream in(cache_path(cfg), std::ios::binary);
  if (!in) return false;
  std::uint64_t magic = 0, key = 0;
  in.read(reinterpret_cast<char*>(&magic), 8);
  in.read(reinterpret_cast<char*>(&key), 8);
  if (magic != kCacheMagic || key != dataset_key(cfg)) return false;
  std::int32_t classes = 0;
  in.read(reinterpret_cast<char*>(&classes), 4);
  ds.classes = classes;
  ds.train_x = read_matrix(in);
  ds.train_labels = read_labels(in);
  ds.test_x = read_matrix(in);
  ds.test_labels = read_labels(in);
  if (!in) return false;
  ds.train_y = learning::one_hot(ds.train_labels, ds.classes);
  ds.test_y = learning::one_hot(ds.test_labels, ds.classes);
  return true;
}

void store_cached(const ExperimentConfig& cfg, const Dataset& ds) {
  fs::create_directories(cfg.cache_dir);
  std::ofstream out(cache_path(cfg), std::ios::binary);
  if (!out) return;
  const std::uint64_t key = dataset_key(cfg);
  out.write(reinterpret_cast<const char*>(&kCacheMagic), 8);
  out.write(reinterpret_cast<const char*>(&key), 8);
  const std::int32_t classes = ds.classes;
  out.write(reinterpret_cast<const char*>(&classes), 4);
  write_matrix(out, ds.train_x);
  write_labels(out, ds.train_labels);
  write_matrix(out, ds.test_x);
  write_labels(out, ds.test_labels);
}

Dataset load_idx_dataset(const ExperimentConfig& cfg) {
  const fs::path dir = cfg.dataset_dir();
  const auto images = learning::load_idx_images((dir / "train-images-idx3-ubyte").string());
  const auto labels = learning::load_idx_labels((dir / "train-labels-idx1-ubyte").string());
  const auto test_images = learning::load_idx_images((dir / "t10k-images-idx3-ubyte").string());
  const auto test_labels = learning::load_idx_labels((dir / "t10k-labels-idx1-ubyte").string());
  if (images.count != labels.count || test_images.count != test_labels.count)
    throw std::runtime_error(dir.string() + ": image/label counts differ");

  Dataset ds;
  ds.classes = 10;
  RealMatrix train_x = learning::images_to_features(images);
  RealMatrix test_x = learning::images_to_features(test_images);
  ds.train_labels.assign(labels.labels.begin(), labels.labels.end());
  ds.test_labels.assign(test_labels.labels.begin(), test_labels.labels.end());

  const int train_n =
      cfg.train_limit > 0 ? std::min(cfg.train_limit, int(train_x.rows())) : int(train_x.rows());
  const int test_n =
      cfg.test_limit > 0 ? std::min(cfg.test_limit, int(test_x.rows())) : int(test_x.rows());
  train_x.conservativeResize(train_n, Eigen::NoChange);
  test_x.conservativeResize(test_n, Eigen::NoChange);
  ds.train_labels.resize(train_n);
  ds.test_labels.resize(test_n);

  if (cfg.embed_enabled) {
    const auto embedding = learning::RbfEmbedding::make(int(train_x.cols()), cfg.embed_features,
                                                        cfg.kernel_gamma, cfg.data_seed);
    ds.train_x = embedding.apply(train_x);
    ds.test_x = embedding.apply(test_x);
  } else {
    ds.train_x = std::move(train_x);
    ds.test_x = std::move(test_x);
  }
  ds.train_y = learning::one_hot(ds.train_labels, ds.classes);
  ds.test_y = learning::one_hot(ds.test_labels, ds.classes);
  return ds;
}

// ---------------------------------------------------------------------------
// Latency sampling helpers. Every draw gets its own derived stream so results
// do not depend on evaluation order.

struct LinkParams {
  double bits = 0;
  std::uint64_t leg = 0;
};

double draw_compute(const ExperimentConfig& cfg, const DeviceProfile& dp, double macs,
                    std::uint64_t epoch, int device_id) {
  Rng rng = make_rng(derive_seed(cfg.latency_seed,
                                 {stream::kCompute, epoch, std::uint64_t(device_id)}));
  return latency::sample_compute(macs, dp, rng);
}

double draw_upload(const ExperimentConfig& cfg, const DeviceProfile& dp, double bits,
                   std::uint64_t epoch, int device_id, std::uint64_t tag = 0) {
  Rng rng = make_rng(derive_seed(cfg.latency_seed,
                                 {stream::kUpload, epoch, std::uint64_t(device_id), tag}));
  return latency::sample_upload(bits, dp, rng);
}

double draw_download(const ExperimentConfig& cfg, const DeviceProfile& dp, double bits,
                     std::uint64_t epoch, int device_id, std::uint64_t tag = 0) {
  Rng rng = make_rng(derive_seed(cfg.latency_seed,
                                 {stream::kDownload, epoch, std::uint64_t(device_id), tag}));
  return latency::sample_download(bits, dp, rng);
}

/// Indices (0-based) of the `take` smallest values, ties broken by position;
/// also reports the take-th smallest value (the completion time).
std::pair<std::vector<int>, double> earliest(const std::vector<double>& times, int take) {
  std::vector<int> order(times.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return times[a] < times[b]; });
  std::vector<int> picked(order.begin(), order.begin() + take);
  const double completion = times[picked.back()];
  std::sort(picked.begin(), picked.end());
  return {picked, completion};
}

struct EpochMetrics {
  double train_loss = 0.0;
  double test_accuracy = 0.0;
};

EpochMetrics evaluate(const Dataset& ds, const RealMatrix& theta, double lambda) {
  return {learning::global_loss(ds.train_x, ds.train_y, theta, lambda),
          learning::accuracy(ds.test_x, ds.test_labels, theta)};
}

void checksum_matrix(proto::RunTrace& trace, const fxp::FxMatrix& m) {
  for (std::int64_t v : m.raw_data())
    trace.aggregate_checksum = proto::fnv1a(trace.aggregate_checksum, std::uint64_t(v));
}

// ---------------------------------------------------------------------------
// Per-scheme simulations.

struct SimContext {
  const ExperimentConfig& cfg;
  const Dataset& ds;
  std::vector<learning::DevicePartition> partitions;
  std::vector<DeviceProfile> profiles;
  fxp::FxConfig fx;
  int d = 0;
  int c = 0;
  std::int64_t total_samples = 0;
};

RunArtifact simulate_padded(SimContext& ctx) {
  const ExperimentConfig& cfg = ctx.cfg;
  proto::PaddedConfig pcfg;
  pcfg.redundancy = cfg.redundancy;
  pcfg.num_groups = cfg.num_groups;
  pcfg.protocol_seed = cfg.protocol_seed;
  proto::PaddedProtocol protocol(ctx.partitions, pcfg);

  RunArtifact art;
  art.trace.scheme = to_string(cfg.scheme);

  // Phase 1: (redundancy - 1) barrier rounds of simultaneous upload+download
  // of one padded pair, followed by the local encoding work. The server's pad
  // pre-combination is charged at its deterministic rate.
  const double pair_bits =
      latency::shared_pair_entries(ctx.d, ctx.c) * double(cfg.fx_total_bits);
  double phase1 = 0.0;
  for (int round = 1; round < cfg.redundancy; ++round) {
    double slowest = 0.0;
    for (const auto& group : protocol.groups()) {
      const int g = int(group.device_ids.size());
      for (int col = 0; col < g; ++col) {
        const int receiver = group.device_ids[col];
        const int sender = group.device_ids[group.assignment.at(round, col) - 1];
        const double up = draw_upload(cfg, ctx.profiles[sender - 1], pair_bits,
                                      stream::kSetupPhase, sender, std::uint64_t(round));
        const double down = draw_download(cfg, ctx.profiles[receiver - 1], pair_bits,
                                          stream::kSetupPhase, receiver, std::uint64_t(round));
        slowest = std::max(slowest, up + down);
      }
    }
    phase1 += slowest;
  }
  if (cfg.redundancy > 1) {
    double encode = 0.0;
    latency::WorkloadDescriptor enc{.kind = latency::WorkloadDescriptor::Kind::kPadEncode,
                                    .d = ctx.d,
                                    .c = ctx.c,
                                    .alpha = cfg.redundancy};
    for (int dev = 1; dev <= cfg.num_devices(); ++dev)
      encode = std::max(encode, draw_compute(cfg, ctx.profiles[dev - 1], latency::mac_count(enc),
                                             stream::kSetupPhase, dev));
    phase1 += encode;
    const double combine_macs = double(cfg.num_devices()) * cfg.redundancy *
                                (double(ctx.d) * ctx.d + double(ctx.d) * ctx.c);
    phase1 += combine_macs / cfg.server_mac_rate;
  }
  art.trace.phase1_seconds = phase1;

  const double delta_bits = latency::model_update_entries(ctx.d, ctx.c) * cfg.fx_total_bits;
  const double update_bits = delta_bits;
  const double epoch_macs = latency::mac_count(
      {.kind = latency::WorkloadDescriptor::Kind::kEpochGradient, .d = ctx.d, .c = ctx.c});

  const latency::WorkloadDescriptor encode_w{
      .kind = latency::WorkloadDescriptor::Kind::kPadEncode,
      .d = ctx.d,
      .c = ctx.c,
      .alpha = cfg.redundancy};

  RealMatrix theta = RealMatrix::Zero(ctx.d, ctx.c);
  double cumulative = phase1;
  art.trace.aggregate_checksum = proto::kFnvOffset;
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    const fxp::FxMatrix delta = fxp::from_real(theta, ctx.fx);

    // A survivor set can be undecodable against the current code draw; the
    // devices then re-encode with a fresh public seed (local compute only, the
    // padded data is already shared) and the epoch round repeats.
    proto::PaddedProtocol::EpochResult result;
    double epoch_time = 0.0;
    constexpr int kMaxRedraws = 8;
    for (int attempt = 0;; ++attempt) {
      std::vector<std::vector<int>> survivors;
      double round_time = 0.0;
      double decode_macs = 0.0;
      const std::uint64_t tag = std::uint64_t(epoch) | (std::uint64_t(attempt) << 40);
      for (const auto& group : protocol.groups()) {
        std::vector<double> round_trip;
        round_trip.reserve(group.device_ids.size());
        for (int id : group.device_ids) {
          const auto& dp = ctx.profiles[id - 1];
          round_trip.push_back(draw_download(cfg, dp, delta_bits, tag, id) +
                               draw_compute(cfg, dp, epoch_macs, tag, id) +
                               draw_upload(cfg, dp, update_bits, tag, id));
        }
        const int need = group.min_survivors();
        auto [picked, completion] = earliest(round_trip, need);
        survivors.push_back(std::move(picked));
        round_time = std::max(round_time, completion);
        decode_macs +=
            double(need) * (double(ctx.d) * ctx.d * ctx.c + double(ctx.d) * ctx.c);
      }
      epoch_time += round_time + decode_macs / cfg.server_mac_rate;

      try {
        result = protocol.run_epoch(delta, survivors);
        break;
      } catch (const coding::DecodeError&) {
        if (attempt + 1 >= kMaxRedraws) throw;
        protocol.redraw_codes();
        // Devices re-encode before the repeated round.
        double encode = 0.0;
        for (int dev = 1; dev <= cfg.num_devices(); ++dev)
          encode = std::max(encode, draw_compute(cfg, ctx.profiles[dev - 1],
                                                 latency::mac_count(encode_w), tag, dev));
        epoch_time += encode;
      }
    }
    checksum_matrix(art.trace, result.decoded_gradient);
    theta = learning::aggregate_update(fxp::to_real(result.decoded_gradient), theta,
                                       cfg.schedule.at(epoch), cfg.regularization,
                                       ctx.total_samples);
    cumulative += epoch_time;
    const EpochMetrics m = evaluate(ctx.ds, theta, cfg.regularization);
    art.trace.rows.push_back(
        {epoch, cumulative, m.train_loss, m.test_accuracy, result.contributors});
  }
  return art;
}

RunArtifact simulate_secagg(SimContext& ctx) {
  const ExperimentConfig& cfg = ctx.cfg;
  proto::SecAggConfig scfg;
  scfg.threshold = cfg.threshold;
  scfg.num_groups = cfg.num_groups;
  scfg.collusion = cfg.collusion;
  scfg.protocol_seed = cfg.protocol_seed;
  proto::SecAggProtocol protocol(ctx.partitions, scfg);

  RunArtifact art;
  art.trace.scheme = to_string(cfg.scheme);

  const int groups = cfg.num_groups;
  const int group_size = protocol.group_size();
  const double qbits = double(protocol.prime_field().payload_bits());
  const double pair_bits = latency::shared_pair_entries(ctx.d, ctx.c) * qbits;

  // Phase 1: (group size - 1) barrier rounds; in round r every slot i sends
  // its shares for slot (i + r) mod group_size, then sums what it received.
  double phase1 = 0.0;
  for (int round = 1; round < group_size; ++round) {
    double slowest = 0.0;
    for (int g = 0; g < groups; ++g) {
      for (int slot = 0; slot < group_size; ++slot) {
        const int sender = protocol.device_id(g, slot);
        const int receiver = protocol.device_id(g, (slot + round) % group_size);
        const double up = draw_upload(cfg, ctx.profiles[sender - 1], pair_bits,
                                      stream::kSetupPhase, sender, std::uint64_t(round));
        const double down = draw_download(cfg, ctx.profiles[receiver - 1], pair_bits,
                                          stream::kSetupPhase, receiver, std::uint64_t(round));
        slowest = std::max(slowest, up + down);
      }
    }
    phase1 += slowest;
  }
  if (group_size > 1) {
    double sum_time = 0.0;
    latency::WorkloadDescriptor sum_w{.kind = latency::WorkloadDescriptor::Kind::kShareSum,
                                      .d = ctx.d,
                                      .c = ctx.c,
                                      .group_size = group_size};
    for (int dev = 1; dev <= cfg.num_devices(); ++dev)
      sum_time = std::max(sum_time, draw_compute(cfg, ctx.profiles[dev - 1],
                                                 latency::mac_count(sum_w), stream::kSetupPhase,
                                                 dev));
    phase1 += sum_time;
  }
  art.trace.phase1_seconds = phase1;

  const double delta_bits = latency::model_update_entries(ctx.d, ctx.c) * cfg.fx_total_bits;
  const double share_bits = latency::model_update_entries(ctx.d, ctx.c) * qbits;
  const double epoch_macs = latency::mac_count(
      {.kind = latency::WorkloadDescriptor::Kind::kEpochGradient, .d = ctx.d, .c = ctx.c});
  const double relay_add_macs = latency::mac_count(
      {.kind = latency::WorkloadDescriptor::Kind::kRelayAdd, .d = ctx.d, .c = ctx.c});
  const double decode_macs = latency::mac_count(
      {.kind = latency::WorkloadDescriptor::Kind::kSecaggDecode,
       .d = ctx.d,
       .c = ctx.c,
       .threshold = cfg.threshold});

  RealMatrix theta = RealMatrix::Zero(ctx.d, ctx.c);
  double cumulative = phase1;
  art.trace.aggregate_checksum = proto::kFnvOffset;
  const int steps = proto::relay_steps(groups);
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    const fxp::FxMatrix delta = fxp::from_real(theta, ctx.fx);

    // Per-device readiness (download + field update compute).
    std::vector<std::vector<double>> ready(groups, std::vector<double>(group_size));
    for (int g = 0; g < groups; ++g)
      for (int slot = 0; slot < group_size; ++slot) {
        const int id = protocol.device_id(g, slot);
        const auto& dp = ctx.profiles[id - 1];
        ready[g][slot] = draw_download(cfg, dp, delta_bits, std::uint64_t(epoch), id) +
                         draw_compute(cfg, dp, epoch_macs, std::uint64_t(epoch), id);
      }

    // Per-slot relay waves: slot i's chain is gated by the slowest group at
    // each step; chains for different slots run independently.
    std::vector<double> arrival(group_size);
    for (int slot = 0; slot < group_size; ++slot) {
      double t = 0.0;
      for (int g = 0; g < groups; ++g) t = std::max(t, ready[g][slot]);
      for (int step = 1; step <= steps; ++step) {
        double wave = 0.0;
        for (int j : proto::group_transmitters(step, groups)) {
          const int dst = j - (1 << (step - 1));
          const int sender = protocol.device_id(j - 1, slot);
          const int receiver = protocol.device_id(dst - 1, slot);
          const double up = draw_upload(cfg, ctx.profiles[sender - 1], share_bits,
                                        std::uint64_t(epoch), sender, std::uint64_t(step));
          const double down = draw_download(cfg, ctx.profiles[receiver - 1], share_bits,
                                            std::uint64_t(epoch), receiver, std::uint64_t(step));
          const double add = draw_compute(cfg, ctx.profiles[receiver - 1], relay_add_macs,
                                          std::uint64_t(epoch) | (std::uint64_t(step) << 32),
                                          receiver);
          wave = std::max(wave, up + down + add);
        }
        t += wave;
      }
      const int master_id = protocol.device_id(0, slot);
      arrival[slot] = t + draw_upload(cfg, ctx.profiles[master_id - 1], share_bits,
                                      std::uint64_t(epoch), master_id, 0xabc);
    }

    auto [slots, completion] = earliest(arrival, cfg.threshold);
    const double epoch_time = completion + decode_macs / cfg.server_mac_rate;

    const auto result = protocol.run_epoch(delta, slots);
    checksum_matrix(art.trace, result.decoded_gradient);
    theta = learning::aggregate_update(fxp::to_real(result.decoded_gradient), theta,
                                       cfg.schedule.at(epoch), cfg.regularization,
                                       ctx.total_samples);
    cumulative += epoch_time;
    const EpochMetrics m = evaluate(ctx.ds, theta, cfg.regularization);
    art.trace.rows.push_back(
        {epoch, cumulative, m.train_loss, m.test_accuracy, result.contributors});
  }
  return art;
}

RunArtifact simulate_conventional(SimContext& ctx) {
  const ExperimentConfig& cfg = ctx.cfg;
  proto::ConventionalConfig ccfg;
  ccfg.minibatch_fraction = cfg.minibatch_fraction;
  ccfg.drop_count = cfg.drop_count;
  proto::ConventionalProtocol protocol(ctx.partitions, ccfg);

  RunArtifact art;
  art.trace.scheme = to_string(cfg.scheme);
  art.trace.phase1_seconds = 0.0;
  art.trace.aggregate_checksum = proto::kFnvOffset;

  const int devices = cfg.num_devices();
  // Conventional FL ships 32-bit floating-point entries.
  const double model_bits = latency::model_update_entries(ctx.d, ctx.c) * 32.0;

  RealMatrix theta = RealMatrix::Zero(ctx.d, ctx.c);
  double cumulative = 0.0;
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    std::vector<double> round_trip(devices);
    for (int id = 1; id <= devices; ++id) {
      const auto& dp = ctx.profiles[id - 1];
      const double macs = latency::mac_count(
          {.kind = latency::WorkloadDescriptor::Kind::kConventionalMinibatch,
           .d = ctx.d,
           .c = ctx.c,
           .batch = protocol.batch_size(id, epoch)});
      round_trip[id - 1] = draw_download(cfg, dp, model_bits, std::uint64_t(epoch), id) +
                           draw_compute(cfg, dp, macs, std::uint64_t(epoch), id) +
                           draw_upload(cfg, dp, model_bits, std::uint64_t(epoch), id);
    }
    auto [picked, completion] = earliest(round_trip, devices - cfg.drop_count);
    std::vector<int> contributors;
    contributors.reserve(picked.size());
    for (int idx : picked) contributors.push_back(idx + 1);

    const double agg_macs = latency::mac_count(
        {.kind = latency::WorkloadDescriptor::Kind::kServerAggregate,
         .d = ctx.d,
         .c = ctx.c,
         .contributors = int(contributors.size())});
    const double epoch_time = completion + agg_macs / cfg.server_mac_rate;

    const auto result = protocol.run_epoch(theta, epoch, contributors);
    theta = learning::aggregate_update(result.gradient_sum, theta, cfg.schedule.at(epoch),
                                       cfg.regularization, result.contributing_samples);
    cumulative += epoch_time;
    const EpochMetrics m = evaluate(ctx.ds, theta, cfg.regularization);
    art.trace.rows.push_back(
        {epoch, cumulative, m.train_loss, m.test_accuracy, result.contributors});
  }
  return art;
}

}  // namespace

Dataset prepare_dataset(const ExperimentConfig& cfg) {
  if (cfg.dataset == DatasetKind::kSynthetic)
    return learning::make_synthetic(cfg.synthetic, cfg.data_seed);
  if (!cfg.cache_dir.empty()) {
    Dataset ds;
    if (load_cached(cfg, ds)) return ds;
    ds = load_idx_dataset(cfg);
    store_cached(cfg, ds);
    return ds;
  }
  return load_idx_dataset(cfg);
}

std::vector<DeviceProfile> build_profiles(const ExperimentConfig& cfg, int feature_dim,
                                          int label_dim, const std::vector<int>& batch_sizes) {
  std::vector<DeviceProfile> profiles;
  int id = 0;
  for (const auto& cls : cfg.device_classes) {
    for (int i = 0; i < cls.count; ++i, ++id) {
      DeviceProfile dp;
      dp.mac_rate = cls.mac_rate;
      dp.up_bps = cfg.up_bps;
      dp.down_bps = cfg.down_bps;
      dp.loss_prob = cfg.loss_prob;
      dp.header_overhead = cfg.header_overhead;
      double epoch_macs = 0.0;
      if (cfg.scheme == Scheme::kConventional) {
        epoch_macs = latency::mac_count(
            {.kind = latency::WorkloadDescriptor::Kind::kConventionalMinibatch,
             .d = feature_dim,
             .c = label_dim,
             .batch = batch_sizes.empty() ? 1 : batch_sizes[std::size_t(id)]});
      } else {
        epoch_macs = latency::mac_count(
            {.kind = latency::WorkloadDescriptor::Kind::kEpochGradient,
             .d = feature_dim,
             .c = label_dim});
      }
      const double mean_setup = cfg.setup_mean_ratio * epoch_macs / dp.mac_rate;
      dp.setup_rate =
          mean_setup > 0 ? 1.0 / mean_setup : std::numeric_limits<double>::infinity();
      profiles.push_back(dp);
    }
  }
  return profiles;
}

RunArtifact run(const ExperimentConfig& cfg) {
  cfg.validate();
  SimContext ctx{cfg, prepare_dataset(cfg), {}, {}, fxp::FxConfig(cfg.fx_total_bits,
                                                                  cfg.fx_frac_bits)};
  const Dataset& ds = ctx.ds;
  ctx.partitions = learning::partition_noniid(ds.train_x, ds.train_y, ds.train_labels,
                                              cfg.num_devices(), ctx.fx);
  ctx.d = int(ds.train_x.cols());
  ctx.c = ds.classes;
  ctx.total_samples = ds.train_x.rows();

  std::vector<int> batch_sizes;
  if (cfg.scheme == Scheme::kConventional) {
    proto::ConventionalProtocol probe(ctx.partitions,
                                      {cfg.minibatch_fraction, cfg.drop_count});
    for (int id = 1; id <= cfg.num_devices(); ++id)
      batch_sizes.push_back(probe.batch_size(id, 1));
  }
  ctx.profiles = build_profiles(cfg, ctx.d, ctx.c, batch_sizes);

  RunArtifact art;
  switch (cfg.scheme) {
    case Scheme::kPadded:
      art = simulate_padded(ctx);
      break;
    case Scheme::kSecAgg:
      art = simulate_secagg(ctx);
      break;
    case Scheme::kConventional:
      art = simulate_conventional(ctx);
      break;
  }
  art.config = cfg;
  art.hash = config_hash(cfg);
  art.trace.config_hash = art.hash;
  if (!art.trace.rows.empty()) {
    art.final_accuracy = art.trace.rows.back().test_accuracy;
    art.final_train_loss = art.trace.rows.back().train_loss;
    for (const auto& row : art.trace.rows)
      art.max_accuracy = std::max(art.max_accuracy, row.test_accuracy);
  }
  for (double target : cfg.accuracy_targets)
    art.time_to_target[target] = time_to_accuracy(art.trace, target);
  return art;
}

std::optional<double> time_to_accuracy(const proto::RunTrace& trace, double target) {
  for (const auto& row : trace.rows)
    if (row.test_accuracy >= target) return row.cumulative_seconds;
  return std::nullopt;
}

std::string trace_to_csv(const proto::RunTrace& trace) {
  std::ostringstream os;
  os << "epoch,cumulative_seconds,train_loss,test_accuracy,contributors\n";
  char buf[64];
  for (const auto& row : trace.rows) {
    os << row.epoch << ',';
    std::snprintf(buf, sizeof buf, "%.9f", row.cumulative_seconds);
    os << buf << ',';
    std::snprintf(buf, sizeof buf, "%.12g", row.train_loss);
    os << buf << ',';
    std::snprintf(buf, sizeof buf, "%.6f", row.test_accuracy);
    os << buf << ',';
    for (std::size_t i = 0; i < row.contributors.size(); ++i) {
      if (i) os << '|';
      os << row.contributors[i];
    }
    os << '\n';
  }
  return os.str();
}

std::string summary_to_json(const RunArtifact& art) {
  char hash_buf[32];
  std::snprintf(hash_buf, sizeof hash_buf, "%016llx",
                static_cast<unsigned long long>(art.hash));
  char checksum_buf[32];
  std::snprintf(checksum_buf, sizeof checksum_buf, "%016llx",
                static_cast<unsigned long long>(art.trace.aggregate_checksum));
  json targets = json::object();
  for (const auto& [target, seconds] : art.time_to_target) {
    char key[32];
    std::snprintf(key, sizeof key, "%g", target);
    if (seconds)
      targets[key] = *seconds;
    else
      targets[key] = nullptr;
  }
  json j{{"scheme", art.trace.scheme},
         {"config_hash", hash_buf},
         {"seeds",
          {{"data", art.config.data_seed},
           {"protocol", art.config.protocol_seed},
           {"latency", art.config.latency_seed}}},
         {"epochs", int(art.trace.rows.size())},
         {"phase1_seconds", art.trace.phase1_seconds},
         {"total_seconds",
          art.trace.rows.empty() ? 0.0 : art.trace.rows.back().cumulative_seconds},
         {"final_accuracy", art.final_accuracy},
         {"max_accuracy", art.max_accuracy},
         {"final_train_loss", art.final_train_loss},
         {"aggregate_checksum", checksum_buf},
         {"time_to_target", targets},
         {"trace_csv", art.trace_path.empty()
                           ? json(nullptr)
                           : json(fs::path(art.trace_path).filename().string())}};
  return j.dump(2);
}

void write_artifact(RunArtifact& art, const std::string& out_dir) {
  fs::create_directories(out_dir);
  art.trace_path = (fs::path(out_dir) / "trace.csv").string();
  {
    std::ofstream out(art.trace_path, std::ios::binary);
    out << trace_to_csv(art.trace);
  }
  art.summary_path = (fs::path(out_dir) / "summary.json").string();
  {
    std::ofstream out(art.summary_path, std::ios::binary);
    out << summary_to_json(art) << '\n';
  }
  std::ofstream cfg_out(fs::path(out_dir) / "config.json", std::ios::binary);
  cfg_out << serialize_config(art.config) << '\n';
}

std::vector<SweepEntry> sweep(const ExperimentConfig& base, const SweepAxis& axis) {
  std::vector<SweepEntry> entries;
  const std::string base_json = serialize_config(base);
  for (const std::string& value : axis.values) {
    SweepEntry entry;
    entry.value = value;
    try {
      ExperimentConfig cfg = parse_config(base_json, {axis.key + "=" + value});
      entry.artifact = run(cfg);
    } catch (const std::exception& e) {
      entry.error = e.what();
    }
    entries.push_back(std::move(entry));
  }
  return entries;
}

}  // namespace codedfl::sim
