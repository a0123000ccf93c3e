// Command-line front end: run single experiments, sweep a parameter axis,
// prebuild embedding caches, and report time-to-accuracy across runs.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "codedfl/sim/config.hpp"
#include "codedfl/sim/runner.hpp"

namespace {

namespace fs = std::filesystem;
using codedfl::sim::ConfigError;
using codedfl::sim::ExperimentConfig;
using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(path + ": cannot open");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void print_error_json(const std::string& kind, const std::exception& e,
                      const std::vector<codedfl::sim::ConfigIssue>* issues = nullptr) {
  json err{{"error", {{"kind", kind}, {"message", e.what()}}}};
  if (issues) {
    json list = json::array();
    for (const auto& i : *issues) list.push_back({{"field", i.field}, {"message", i.message}});
    err["error"]["issues"] = list;
  }
  std::cerr << err.dump() << std::endl;
}

ExperimentConfig load_config(const std::string& config_path,
                             const std::vector<std::string>& overrides) {
  const std::string text = config_path.empty() ? std::string() : read_file(config_path);
  return codedfl::sim::parse_config(text, overrides);
}

int cmd_run(const std::string& config_path, const std::vector<std::string>& overrides,
            const std::string& out_dir) {
  ExperimentConfig cfg = load_config(config_path, overrides);
  if (!out_dir.empty()) cfg.out_dir = out_dir;
  auto artifact = codedfl::sim::run(cfg);
  codedfl::sim::write_artifact(artifact, cfg.out_dir);
  json report{{"scheme", artifact.trace.scheme},
              {"epochs", int(artifact.trace.rows.size())},
              {"phase1_seconds", artifact.trace.phase1_seconds},
              {"total_seconds", artifact.trace.rows.empty()
                                    ? 0.0
                                    : artifact.trace.rows.back().cumulative_seconds},
              {"final_accuracy", artifact.final_accuracy},
              {"trace", artifact.trace_path},
              {"summary", artifact.summary_path}};
  std::cout << report.dump(2) << std::endl;
  return 0;
}

int cmd_sweep(const std::string& config_path, const std::vector<std::string>& overrides,
              const std::string& axis_key, const std::vector<std::string>& values,
              const std::string& out_dir) {
  ExperimentConfig base = load_config(config_path, overrides);
  if (!out_dir.empty()) base.out_dir = out_dir;
  codedfl::sim::SweepAxis axis{axis_key, values};
  auto entries = codedfl::sim::sweep(base, axis);
  json report = json::array();
  int failures = 0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    auto& entry = entries[i];
    json row{{"axis", axis_key}, {"value", entry.value}};
    if (entry.artifact) {
      const std::string dir =
          (fs::path(base.out_dir) / (axis_key + "=" + entry.value)).string();
      codedfl::sim::write_artifact(*entry.artifact, dir);
      row["final_accuracy"] = entry.artifact->final_accuracy;
      row["total_seconds"] = entry.artifact->trace.rows.empty()
                                 ? 0.0
                                 : entry.artifact->trace.rows.back().cumulative_seconds;
      row["summary"] = entry.artifact->summary_path;
    } else {
      row["error"] = entry.error;
      ++failures;
    }
    report.push_back(row);
  }
  std::cout << report.dump(2) << std::endl;
  return failures == 0 ? 0 : 1;
}

int cmd_embed_cache(const std::string& config_path, const std::vector<std::string>& overrides) {
  ExperimentConfig cfg = load_config(config_path, overrides);
  if (cfg.cache_dir.empty())
    throw std::runtime_error("embedding.cache_dir must be set for embed-cache");
  const auto ds = codedfl::sim::prepare_dataset(cfg);
  json report{{"dataset", codedfl::sim::to_string(cfg.dataset)},
              {"train_samples", int(ds.train_x.rows())},
              {"test_samples", int(ds.test_x.rows())},
              {"features", int(ds.train_x.cols())},
              {"cache_dir", cfg.cache_dir}};
  std::cout << report.dump(2) << std::endl;
  return 0;
}

int cmd_report(const std::vector<std::string>& summaries, double target) {
  json rows = json::array();
  std::optional<double> best;
  for (const auto& path : summaries) {
    const json summary = json::parse(read_file(path));
    std::string trace_path = summary.value("trace_csv", std::string());
    if (!trace_path.empty() && fs::path(trace_path).is_relative())
      trace_path = (fs::path(path).parent_path() / trace_path).string();
    json row{{"summary", path},
             {"scheme", summary.value("scheme", std::string())},
             {"final_accuracy", summary.value("final_accuracy", 0.0)}};
    // Recompute against the requested target from the trace.
    std::optional<double> seconds;
    if (!trace_path.empty()) {
      std::ifstream in(trace_path);
      if (!in) throw std::runtime_error(trace_path + ": cannot open");
      std::string line;
      std::getline(in, line);  // header
      while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string field;
        std::getline(ls, field, ',');
        std::getline(ls, field, ',');
        const double cumulative = std::stod(field);
        std::getline(ls, field, ',');
        std::getline(ls, field, ',');
        if (std::stod(field) >= target) {
          seconds = cumulative;
          break;
        }
      }
    }
    if (seconds) {
      row["seconds_to_target"] = *seconds;
      if (!best || *seconds < *best) best = *seconds;
    } else {
      row["seconds_to_target"] = nullptr;
    }
    rows.push_back(row);
  }
  for (auto& row : rows)
    if (best && row["seconds_to_target"].is_number())
      row["slowdown_vs_best"] = row["seconds_to_target"].get<double>() / *best;
  json report{{"target", target}, {"runs", rows}};
  std::cout << report.dump(2) << std::endl;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Straggler-resilient coded federated learning simulator"};
  app.require_subcommand(1);

  std::string config_path, out_dir, axis_key;
  std::vector<std::string> overrides, axis_values, summaries;
  double target = 0.95;

  auto add_config_opts = [&](CLI::App* cmd, bool with_out) {
    cmd->add_option("--config", config_path, "JSON config file (defaults when omitted)");
    cmd->add_option("--set", overrides,
                    "Override a config key, e.g. --set scheme_params.redundancy=16");
    if (with_out) cmd->add_option("--out", out_dir, "Output directory (overrides output.dir)");
  };

  CLI::App* run_cmd = app.add_subcommand("run", "Run one experiment");
  add_config_opts(run_cmd, true);

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Run one experiment per axis value");
  add_config_opts(sweep_cmd, true);
  sweep_cmd->add_option("--axis", axis_key, "Dotted config key to sweep")->required();
  sweep_cmd->add_option("--values", axis_values, "Axis values (JSON scalars)")
      ->required()
      ->delimiter(',');

  CLI::App* embed_cmd = app.add_subcommand("embed-cache", "Prebuild the embedding cache");
  add_config_opts(embed_cmd, false);

  CLI::App* report_cmd =
      app.add_subcommand("report", "Time-to-accuracy comparison across run summaries");
  report_cmd->add_option("--summary", summaries, "summary.json files")->required();
  report_cmd->add_option("--target", target, "Accuracy target (default 0.95)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) return cmd_run(config_path, overrides, out_dir);
    if (sweep_cmd->parsed())
      return cmd_sweep(config_path, overrides, axis_key, axis_values, out_dir);
    if (embed_cmd->parsed()) return cmd_embed_cache(config_path, overrides);
    if (report_cmd->parsed()) return cmd_report(summaries, target);
  } catch (const ConfigError& e) {
    print_error_json("config_validation", e, &e.issues());
    return 2;
  } catch (const std::exception& e) {
    print_error_json("runtime", e);
    return 1;
  }
  return 0;
}
