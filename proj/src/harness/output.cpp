#include "gomtrack/harness/output.hpp"

#include "gomtrack/snapshot.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace gomtrack::harness {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::ofstream open(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

json truth_line(std::size_t run, std::uint32_t step, const std::vector<LabeledState>& objects) {
  json list = json::array();
  for (const auto& o : objects) {
    const auto& x = o.kinematic;
    list.push_back({{"label", to_json(o.label)}, {"state", {x[0], x[1], x[2], x[3]}}});
  }
  return {{"run", run}, {"step", step}, {"objects", std::move(list)}};
}

std::string frame_name(std::uint32_t step, const char* ext) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "frame_%03u.%s", step, ext);
  return buf;
}

void write_frames(const ScenarioConfig& config, std::size_t run, const fs::path& dir,
                  Truth* truth_out) {
  const auto sensor = config.sensor();
  const auto root = RandomStream(config.seed).child(run);
  const auto truth = generate_truth(config, root.child(0));
  const auto frames = generate_frames(config, sensor, truth, root.child(1));
  char sub[32];
  std::snprintf(sub, sizeof sub, "run_%03zu", run);
  const auto frame_dir = dir / "frames" / sub;
  fs::create_directories(frame_dir);
  for (std::uint32_t k = 1; k <= config.steps; ++k) {
    if (const auto* tbd = std::get_if<TbdModel>(&sensor)) {
      write_pgm(*tbd, frames[k], frame_dir / frame_name(k, "pgm"));
    }
    write_frame_csv(sensor, frames[k], frame_dir / frame_name(k, "csv"));
  }
  if (truth_out) *truth_out = truth;
}

}  // namespace

void write_outputs(const ExperimentResult& result, const fs::path& dir) {
  fs::create_directories(dir);
  const auto& config = result.config;

  auto ospa_csv = open(dir / "ospa.csv");
  auto card_csv = open(dir / "cardinality.csv");
  auto time_csv = open(dir / "timing.csv");
  auto group_csv = open(dir / "groups.csv");
  ospa_csv << "step,mean_ospa_m,stderr_m\n";
  card_csv << "step,mean_est_cardinality,true_cardinality\n";
  time_csv << "step,mean_frame_ms\n";
  group_csv << "step,mean_groups\n";
  for (const auto& s : result.steps) {
    ospa_csv << s.step << ',' << num(s.mean_ospa) << ',' << num(s.stderr_ospa) << '\n';
    card_csv << s.step << ',' << num(s.mean_cardinality) << ',' << s.true_cardinality << '\n';
    time_csv << s.step << ',' << num(s.mean_frame_ms) << '\n';
    group_csv << s.step << ',' << num(s.mean_groups) << '\n';
  }

  auto tracks = open(dir / "tracks.jsonl");
  auto truth = open(dir / "truth.jsonl");
  auto diag = open(dir / "diagnostics.log");
  for (const auto& run : result.runs) {
    if (run.failed) {
      diag << "FAILED " << run.error << '\n';
      continue;
    }
    for (const auto& rec : run.steps) {
      json list = json::array();
      for (const auto& t : rec.tracks) {
        list.push_back({{"label", to_json(t.label)},
                        {"existence", t.existence},
                        {"position", {t.position[0], t.position[1]}},
                        {"estimated", t.estimated}});
      }
      tracks << json{{"run", run.run}, {"step", rec.step}, {"tracks", std::move(list)}}.dump() << '\n';
      truth << truth_line(run.run, rec.step, rec.truth).dump() << '\n';
      if (!rec.diagnostics.empty()) {
        diag << "run " << run.run << " step " << rec.step << ' ' << rec.diagnostics << '\n';
      }
    }
  }

  json summary = {{"filter", to_string(config.filter)},
                  {"runs", config.runs},
                  {"failed_runs", result.failed_runs},
                  {"post_transient_start", config.post_transient_start},
                  {"post_transient_mean_ospa_m", result.post_transient_ospa},
                  {"post_transient_cardinality_hit_rate", result.post_transient_cardinality_hit_rate}};
  open(dir / "summary.json") << summary.dump(2) << '\n';
  open(dir / "config.json") << resolved_config(config).dump(2) << '\n';

  if (config.save_frames) write_frames(config, 0, dir, nullptr);
}

void write_simulation(const ScenarioConfig& config, std::size_t runs, const fs::path& dir) {
  fs::create_directories(dir);
  auto truth_file = open(dir / "truth.jsonl");
  for (std::size_t r = 0; r < runs; ++r) {
    Truth truth;
    write_frames(config, r, dir, &truth);
    for (std::uint32_t k = 0; k < truth.size(); ++k) truth_file << truth_line(r, k, truth[k]).dump() << '\n';
  }
  open(dir / "config.json") << resolved_config(config).dump(2) << '\n';
}

}  // namespace gomtrack::harness
