#include "gomtrack/harness/config.hpp"
#include "gomtrack/harness/experiment.hpp"
#include "gomtrack/harness/output.hpp"
#include "gomtrack/kernels.hpp"
#include "gomtrack/metrics.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <utility>

namespace {

using namespace gomtrack;
using namespace gomtrack::harness;
using nlohmann::json;

using Frames = std::map<std::pair<std::size_t, std::uint32_t>, std::vector<Position>>;

/// (run, step) -> positions, from tracks.jsonl (existence above threshold) or truth.jsonl.
Frames read_positions(const std::string& path, double threshold) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  Frames out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
    auto& positions = out[{j.at("run").get<std::size_t>(), j.at("step").get<std::uint32_t>()}];
    if (j.contains("tracks")) {
      for (const auto& t : j.at("tracks")) {
        if (t.at("existence").get<double>() > threshold) {
          positions.emplace_back(t.at("position")[0].get<double>(), t.at("position")[1].get<double>());
        }
      }
    } else {
      for (const auto& o : j.at("objects")) {
        positions.emplace_back(o.at("state")[0].get<double>(), o.at("state")[1].get<double>());
      }
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Labeled RFS multi-object tracking with generic observation models"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::optional<std::string> filter;
  std::optional<std::size_t> particles;
  std::optional<std::size_t> runs;
  std::optional<std::uint64_t> seed;
  int threads = 0;

  auto* run = app.add_subcommand("run", "Run a Monte Carlo experiment and write CSV/JSONL outputs");
  run->add_option("--config", config_path, "Scenario config (JSON)")->required()->check(CLI::ExistingFile);
  run->add_option("--filter", filter, "Override filter: lmo-gom | lmb-gom | g-lmb-gom");
  run->add_option("--particles", particles, "Override particles per hypothesis/track");
  run->add_option("--runs", runs, "Override Monte Carlo run count");
  run->add_option("--seed", seed, "Override seed");
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--threads", threads, "Worker threads (0 = OpenMP default)");

  auto* simulate = app.add_subcommand("simulate", "Write ground truth and sensor frames only");
  simulate->add_option("--config", config_path, "Scenario config (JSON)")->required()->check(CLI::ExistingFile);
  simulate->add_option("--runs", runs, "Number of runs to simulate (default 1)");
  simulate->add_option("--seed", seed, "Override seed");
  simulate->add_option("--out", out_dir, "Output directory");

  std::string estimate_path;
  std::string truth_path;
  std::optional<std::string> score_out;
  OspaParams ospa_params;
  double threshold = 0.5;
  auto* score = app.add_subcommand("ospa", "Score a tracks.jsonl file against a truth.jsonl file");
  score->add_option("--estimate", estimate_path, "tracks.jsonl")->required()->check(CLI::ExistingFile);
  score->add_option("--truth", truth_path, "truth.jsonl")->required()->check(CLI::ExistingFile);
  score->add_option("--cutoff", ospa_params.cutoff, "OSPA cutoff c (m)");
  score->add_option("--order", ospa_params.order, "OSPA order p");
  score->add_option("--threshold", threshold, "Existence threshold for estimated tracks");
  score->add_option("--out", score_out, "CSV output path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      auto config = load_config(config_path);
      if (filter) config.filter = filter_kind_from_string(*filter);
      if (particles) config.filter_config.particles = *particles;
      if (runs) config.runs = *runs;
      if (seed) config.seed = *seed;
      config.threads = threads;
      validate(config);
      const auto result = run_experiment(config);
      write_outputs(result, out_dir);
      std::printf("%s: %zu runs (%zu failed), post-transient mean OSPA %.4f m, cardinality hit rate %.3f\n",
                  to_string(config.filter).c_str(), config.runs, result.failed_runs,
                  result.post_transient_ospa, result.post_transient_cardinality_hit_rate);
    } else if (*simulate) {
      auto config = load_config(config_path);
      if (seed) config.seed = *seed;
      write_simulation(config, runs.value_or(1), out_dir);
      std::printf("wrote %zu simulated run(s) to %s\n", runs.value_or(1), out_dir.c_str());
    } else if (*score) {
      const auto est = read_positions(estimate_path, threshold);
      const auto truth = read_positions(truth_path, threshold);
      std::ofstream file;
      if (score_out) {
        file.open(*score_out);
        if (!file) throw std::runtime_error("cannot write " + *score_out);
      }
      std::ostream& out = score_out ? file : std::cout;
      out << "run,step,ospa_m\n";
      double total = 0.0;
      std::size_t count = 0;
      for (const auto& [key, positions] : est) {
        auto it = truth.find(key);
        const std::vector<Position> none;
        const double d = ospa(positions, it == truth.end() ? none : it->second, ospa_params);
        out << key.first << ',' << key.second << ',' << d << '\n';
        total += d;
        ++count;
      }
      std::fprintf(stderr, "mean OSPA over %zu frames: %.4f m\n", count, count ? total / count : 0.0);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
