#include "codedfl/sim/config.hpp"

#include <algorithm>
#include <sstream>

#include <nlohmann/json.hpp>

#include "codedfl/protocol/padded.hpp"
#include "codedfl/protocol/trace.hpp"

namespace codedfl::sim {

using nlohmann::json;

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::kPadded: return "padded";
    case Scheme::kSecAgg: return "secagg";
    case Scheme::kConventional: return "conventional";
  }
  return "?";
}

std::string to_string(DatasetKind d) {
  switch (d) {
    case DatasetKind::kSynthetic: return "synthetic";
    case DatasetKind::kMnist: return "mnist";
    case DatasetKind::kFashionMnist: return "fashion-mnist";
    case DatasetKind::kDigits: return "digits";
  }
  return "?";
}

ConfigError::ConfigError(std::vector<ConfigIssue> issues)
    : std::runtime_error([&issues] {
        std::ostringstream os;
        os << "invalid configuration:";
        for (const auto& i : issues) os << "\n  " << i.field << ": " << i.message;
        return os.str();
      }()),
      issues_(std::move(issues)) {}

int ExperimentConfig::num_devices() const {
  int n = 0;
  for (const auto& c : device_classes) n += c.count;
  return n;
}

std::string ExperimentConfig::dataset_dir() const {
  if (!data_dir.empty()) return data_dir;
  switch (dataset) {
    case DatasetKind::kMnist: return "data/mnist";
    case DatasetKind::kFashionMnist: return "data/fashion-mnist";
    case DatasetKind::kDigits: return "data/digits";
    case DatasetKind::kSynthetic: return "";
  }
  return "";
}

void ExperimentConfig::validate() const {
  std::vector<ConfigIssue> issues;
  auto bad = [&issues](const std::string& field, const std::string& message) {
    issues.push_back({field, message});
  };

  if (!(1 <= fx_frac_bits && fx_frac_bits < fx_total_bits && fx_total_bits <= 63))
    bad("fixed_point", "requires 1 <= frac_bits < total_bits <= 63");
  if (device_classes.empty()) bad("devices.classes", "at least one device class");
  for (std::size_t i = 0; i < device_classes.size(); ++i) {
    if (device_classes[i].count <= 0)
      bad("devices.classes[" + std::to_string(i) + "].count", "must be positive");
    if (!(device_classes[i].mac_rate > 0))
      bad("devices.classes[" + std::to_string(i) + "].mac_rate", "must be positive");
  }
  if (!(server_mac_rate > 0)) bad("devices.server_mac_rate", "must be positive");
  if (!(setup_mean_ratio >= 0)) bad("devices.setup_mean_ratio", "must be >= 0");
  if (!(up_bps > 0)) bad("links.up_bps", "must be positive");
  if (!(down_bps > 0)) bad("links.down_bps", "must be positive");
  if (!(loss_prob >= 0 && loss_prob < 1)) bad("links.loss_prob", "must be in [0, 1)");
  if (!(header_overhead >= 0)) bad("links.header_overhead", "must be >= 0");
  if (epochs < 1) bad("training.epochs", "must be >= 1");
  if (!(schedule.initial > 0)) bad("training.learning_rate", "must be positive");
  if (!(schedule.factor > 0)) bad("training.decay_factor", "must be positive");
  if (!(regularization >= 0)) bad("training.regularization", "must be >= 0");
  for (double t : accuracy_targets)
    if (!(t >= 0)) bad("output.accuracy_targets", "targets must be >= 0");

  const int devices = num_devices();
  if (devices >= 1) {
    switch (scheme) {
      case Scheme::kPadded: {
        if (num_groups < 1 || num_groups > devices) {
          bad("scheme_params.groups", "must be in [1, devices]");
          break;
        }
        const auto layout = proto::assign_groups(devices, num_groups);
        int min_size = devices;
        for (const auto& g : layout) min_size = std::min(min_size, int(g.size()));
        if (redundancy < 1 || redundancy > min_size)
          bad("scheme_params.redundancy",
              "must be in [1, smallest group size] (smallest group has " +
                  std::to_string(min_size) + " devices)");
        break;
      }
      case Scheme::kSecAgg: {
        if (num_groups < 1 || devices % num_groups != 0) {
          bad("scheme_params.groups", "must divide the device count");
          break;
        }
        const int group_size = devices / num_groups;
        if (threshold < 1 || threshold > group_size)
          bad("scheme_params.threshold", "must be in [1, group size]");
        if (collusion < 0) bad("scheme_params.collusion", "must be >= 0");
        if (threshold <= collusion)
          bad("scheme_params.threshold", "must exceed the collusion level");
        if (fx_total_bits + fx_frac_bits > 80)
          bad("fixed_point", "secagg requires total_bits + frac_bits <= 80");
        break;
      }
      case Scheme::kConventional: {
        if (!(minibatch_fraction > 0 && minibatch_fraction <= 1))
          bad("scheme_params.minibatch_fraction", "must be in (0, 1]");
        if (drop_count < 0 || drop_count >= devices)
          bad("scheme_params.drop_count", "must be in [0, devices)");
        break;
      }
    }
  } else {
    bad("devices.classes", "device count must be >= 1");
  }

  if (dataset == DatasetKind::kSynthetic) {
    if (synthetic.train_samples < 1) bad("dataset.synthetic.train_samples", "must be >= 1");
    if (synthetic.test_samples < 1) bad("dataset.synthetic.test_samples", "must be >= 1");
    if (synthetic.dim < 1) bad("dataset.synthetic.dim", "must be >= 1");
    if (synthetic.classes < 2) bad("dataset.synthetic.classes", "must be >= 2");
  } else {
    if (embed_enabled && embed_features < 1) bad("embedding.features", "must be >= 1");
  }
  if (train_limit < 0) bad("dataset.train_limit", "must be >= 0");
  if (test_limit < 0) bad("dataset.test_limit", "must be >= 0");

  if (!issues.empty()) throw ConfigError(std::move(issues));
}

namespace {

json to_json(const ExperimentConfig& c) {
  return json{
      {"scheme", to_string(c.scheme)},
      {"dataset",
       {{"kind", to_string(c.dataset)},
        {"dir", c.data_dir},
        {"train_limit", c.train_limit},
        {"test_limit", c.test_limit},
        {"synthetic",
         {{"train_samples", c.synthetic.train_samples},
          {"test_samples", c.synthetic.test_samples},
          {"dim", c.synthetic.dim},
          {"classes", c.synthetic.classes},
          {"label_noise", c.synthetic.label_noise},
          {"spectrum_decay", c.synthetic.spectrum_decay}}}}},
      {"embedding",
       {{"enabled", c.embed_enabled},
        {"kernel_gamma", c.kernel_gamma},
        {"features", c.embed_features},
        {"cache_dir", c.cache_dir}}},
      {"fixed_point", {{"total_bits", c.fx_total_bits}, {"frac_bits", c.fx_frac_bits}}},
      {"devices",
       {{"classes",
         [&] {
           json arr = json::array();
           for (const auto& cls : c.device_classes)
             arr.push_back({{"count", cls.count}, {"mac_rate", cls.mac_rate}});
           return arr;
         }()},
        {"server_mac_rate", c.server_mac_rate},
        {"setup_mean_ratio", c.setup_mean_ratio}}},
      {"links",
       {{"up_bps", c.up_bps},
        {"down_bps", c.down_bps},
        {"loss_prob", c.loss_prob},
        {"header_overhead", c.header_overhead}}},
      {"scheme_params",
       {{"redundancy", c.redundancy},
        {"threshold", c.threshold},
        {"collusion", c.collusion},
        {"groups", c.num_groups},
        {"minibatch_fraction", c.minibatch_fraction},
        {"drop_count", c.drop_count}}},
      {"training",
       {{"epochs", c.epochs},
        {"learning_rate", c.schedule.initial},
        {"decay_factor", c.schedule.factor},
        {"decay_epochs", c.schedule.decay_epochs},
        {"regularization", c.regularization}}},
      {"seeds", {{"data", c.data_seed}, {"protocol", c.protocol_seed}, {"latency", c.latency_seed}}},
      {"output", {{"dir", c.out_dir}, {"accuracy_targets", c.accuracy_targets}}}};
}

// Merges `patch` into `base`, complaining about keys that do not exist in the
// defaults (they are almost always typos).
void merge_checked(json& base, const json& patch, const std::string& prefix,
                   std::vector<ConfigIssue>& issues) {
  for (const auto& [key, value] : patch.items()) {
    const std::string path = prefix.empty() ? key : prefix + "." + key;
    if (!base.contains(key)) {
      issues.push_back({path, "unknown key"});
      continue;
    }
    if (base[key].is_object() && value.is_object())
      merge_checked(base[key], value, path, issues);
    else
      base[key] = value;
  }
}

void from_json_checked(const json& j, ExperimentConfig& c, std::vector<ConfigIssue>& issues) {
  auto get = [&](const json& node, const char* field, auto& out, const std::string& path) {
    try {
      out = node.at(field).get<std::decay_t<decltype(out)>>();
    } catch (const json::exception& e) {
      issues.push_back({path, e.what()});
    }
  };

  std::string scheme;
  get(j, "scheme", scheme, "scheme");
  if (scheme == "padded")
    c.scheme = Scheme::kPadded;
  else if (scheme == "secagg")
    c.scheme = Scheme::kSecAgg;
  else if (scheme == "conventional")
    c.scheme = Scheme::kConventional;
  else
    issues.push_back({"scheme", "must be padded | secagg | conventional"});

  const json& ds = j.at("dataset");
  std::string kind;
  get(ds, "kind", kind, "dataset.kind");
  if (kind == "synthetic")
    c.dataset = DatasetKind::kSynthetic;
  else if (kind == "mnist")
    c.dataset = DatasetKind::kMnist;
  else if (kind == "fashion-mnist")
    c.dataset = DatasetKind::kFashionMnist;
  else if (kind == "digits")
    c.dataset = DatasetKind::kDigits;
  else
    issues.push_back({"dataset.kind", "must be synthetic | mnist | fashion-mnist | digits"});
  get(ds, "dir", c.data_dir, "dataset.dir");
  get(ds, "train_limit", c.train_limit, "dataset.train_limit");
  get(ds, "test_limit", c.test_limit, "dataset.test_limit");
  const json& syn = ds.at("synthetic");
  get(syn, "train_samples", c.synthetic.train_samples, "dataset.synthetic.train_samples");
  get(syn, "test_samples", c.synthetic.test_samples, "dataset.synthetic.test_samples");
  get(syn, "dim", c.synthetic.dim, "dataset.synthetic.dim");
  get(syn, "classes", c.synthetic.classes, "dataset.synthetic.classes");
  get(syn, "label_noise", c.synthetic.label_noise, "dataset.synthetic.label_noise");
  get(syn, "spectrum_decay", c.synthetic.spectrum_decay, "dataset.synthetic.spectrum_decay");

  const json& emb = j.at("embedding");
  get(emb, "enabled", c.embed_enabled, "embedding.enabled");
  get(emb, "kernel_gamma", c.kernel_gamma, "embedding.kernel_gamma");
  get(emb, "features", c.embed_features, "embedding.features");
  get(emb, "cache_dir", c.cache_dir, "embedding.cache_dir");

  const json& fx = j.at("fixed_point");
  get(fx, "total_bits", c.fx_total_bits, "fixed_point.total_bits");
  get(fx, "frac_bits", c.fx_frac_bits, "fixed_point.frac_bits");

  const json& dev = j.at("devices");
  c.device_classes.clear();
  if (dev.at("classes").is_array()) {
    for (const auto& cls : dev.at("classes")) {
      DeviceClass d;
      get(cls, "count", d.count, "devices.classes.count");
      get(cls, "mac_rate", d.mac_rate, "devices.classes.mac_rate");
      c.device_classes.push_back(d);
    }
  } else {
    issues.push_back({"devices.classes", "must be an array"});
  }
  get(dev, "server_mac_rate", c.server_mac_rate, "devices.server_mac_rate");
  get(dev, "setup_mean_ratio", c.setup_mean_ratio, "devices.setup_mean_ratio");

  const json& links = j.at("links");
  get(links, "up_bps", c.up_bps, "links.up_bps");
  get(links, "down_bps", c.down_bps, "links.down_bps");
  get(links, "loss_prob", c.loss_prob, "links.loss_prob");
  get(links, "header_overhead", c.header_overhead, "links.header_overhead");

  const json& sp = j.at("scheme_params");
  get(sp, "redundancy", c.redundancy, "scheme_params.redundancy");
  get(sp, "threshold", c.threshold, "scheme_params.threshold");
  get(sp, "collusion", c.collusion, "scheme_params.collusion");
  get(sp, "groups", c.num_groups, "scheme_params.groups");
  get(sp, "minibatch_fraction", c.minibatch_fraction, "scheme_params.minibatch_fraction");
  get(sp, "drop_count", c.drop_count, "scheme_params.drop_count");

  const json& tr = j.at("training");
  get(tr, "epochs", c.epochs, "training.epochs");
  get(tr, "learning_rate", c.schedule.initial, "training.learning_rate");
  get(tr, "decay_factor", c.schedule.factor, "training.decay_factor");
  get(tr, "decay_epochs", c.schedule.decay_epochs, "training.decay_epochs");
  get(tr, "regularization", c.regularization, "training.regularization");

  const json& seeds = j.at("seeds");
  get(seeds, "data", c.data_seed, "seeds.data");
  get(seeds, "protocol", c.protocol_seed, "seeds.protocol");
  get(seeds, "latency", c.latency_seed, "seeds.latency");

  const json& out = j.at("output");
  get(out, "dir", c.out_dir, "output.dir");
  get(out, "accuracy_targets", c.accuracy_targets, "output.accuracy_targets");
}

}  // namespace

ExperimentConfig default_config() { return ExperimentConfig{}; }

ExperimentConfig parse_config(const std::string& json_text,
                              const std::vector<std::string>& overrides) {
  std::vector<ConfigIssue> issues;
  json merged = to_json(ExperimentConfig{});
  if (!json_text.empty()) {
    json patch;
    try {
      patch = json::parse(json_text);
    } catch (const json::exception& e) {
      throw ConfigError(std::vector<ConfigIssue>{{"<json>", e.what()}});
    }
    merge_checked(merged, patch, "", issues);
  }
  for (const std::string& ov : overrides) {
    const auto eq = ov.find('=');
    if (eq == std::string::npos) {
      issues.push_back({ov, "override must look like key.path=value"});
      continue;
    }
    const std::string key = ov.substr(0, eq);
    const std::string value = ov.substr(eq + 1);
    json* node = &merged;
    std::size_t start = 0;
    bool ok = true;
    while (true) {
      const auto dot = key.find('.', start);
      const std::string part = key.substr(start, dot - start);
      if (!node->is_object() || !node->contains(part)) {
        issues.push_back({key, "unknown key"});
        ok = false;
        break;
      }
      node = &(*node)[part];
      if (dot == std::string::npos) break;
      start = dot + 1;
    }
    if (!ok) continue;
    json parsed = json::parse(value, nullptr, false);
    if (parsed.is_discarded()) parsed = value;  // treat as a bare string
    *node = parsed;
  }
  if (!issues.empty()) throw ConfigError(std::move(issues));

  ExperimentConfig cfg;
  from_json_checked(merged, cfg, issues);
  if (!issues.empty()) throw ConfigError(std::move(issues));
  cfg.validate();
  return cfg;
}

std::string serialize_config(const ExperimentConfig& cfg) { return to_json(cfg).dump(2); }

std::uint64_t config_hash(const ExperimentConfig& cfg) {
  const std::string s = serialize_config(cfg);
  std::uint64_t h = proto::kFnvOffset;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace codedfl::sim
