#include "gomtrack/harness/experiment.hpp"

#include "gomtrack/filters.hpp"
#include "gomtrack/kernels.hpp"
#include "gomtrack/metrics.hpp"
#include "gomtrack/rfs.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

namespace gomtrack::harness {

namespace {

std::string describe(const GroupReport& report) {
  std::ostringstream out;
  out << "groups=" << report.groups << " degenerate=" << report.degenerate_groups;
  for (std::size_t g = 0; g < report.partition.groups.size(); ++g) {
    const auto& group = report.partition.groups[g];
    out << " | g" << g << " labels=";
    for (std::size_t i = 0; i < group.labels.size(); ++i) out << (i ? "," : "") << to_string(group.labels[i]);
    out << " obs=";
    const auto& obs = group.observations;
    for (std::size_t i = 0; i < obs.size();) {
      std::size_t j = i;
      while (j + 1 < obs.size() && obs[j + 1] == obs[j] + 1) ++j;
      out << (i ? "," : "") << obs[i];
      if (j > i) out << '-' << obs[j];
      i = j + 1;
    }
  }
  return out.str();
}

std::vector<Position> positions(const std::vector<LabeledState>& states) {
  std::vector<Position> out;
  out.reserve(states.size());
  for (const auto& s : states) out.push_back(position_of(s.kinematic));
  return out;
}

}  // namespace

RunResult run_single(const ScenarioConfig& config, std::size_t run) {
  RunResult result;
  result.run = run;
  std::uint32_t step = 0;
  try {
    const auto sensor = config.sensor();
    const auto motion = config.motion_model();
    const auto& fc = config.filter_config;
    const auto root = RandomStream(config.seed).child(run);
    const auto truth = generate_truth(config, root.child(0));
    const auto frames = generate_frames(config, sensor, truth, root.child(1));
    const auto filter_stream = root.child(2);

    LmbDensity lmb = initial_tracks(config, truth, root.child(3));
    LmoDensity lmo;
    if (config.filter == FilterKind::lmo_gom) {
      lmo = fc.exhaustive ? lmb_to_lmo(lmb) : lmb_to_lmo(lmb, fc.particles, root.child(4));
    }

    for (step = 1; step <= config.steps; ++step) {
      StepRecord rec;
      rec.step = step;
      const auto started = std::chrono::steady_clock::now();
      switch (config.filter) {
        case FilterKind::lmb_gom:
          lmb = lmb_gom_step(lmb, config.birth, motion, bind_likelihood(sensor, frames[step]), step,
                             fc, filter_stream.child(step));
          prune_tracks(lmb, fc.track_prune_threshold);
          rec.groups = 1;
          break;
        case FilterKind::g_lmb_gom: {
          GroupReport report;
          lmb = g_lmb_gom_step(lmb, config.birth, motion, sensor, frames[step], config.grouping, step,
                               fc, filter_stream.child(step), &report);
          prune_tracks(lmb, fc.track_prune_threshold);
          rec.groups = report.groups;
          rec.diagnostics = describe(report);
          break;
        }
        case FilterKind::lmo_gom:
          lmo = lmo_gom_step(lmo, config.birth, motion, bind_likelihood(sensor, frames[step]), step,
                             fc, filter_stream.child(step));
          lmb = best_lmb_approx(lmo);
          rec.groups = 1;
          break;
      }
      const auto finished = std::chrono::steady_clock::now();
      rec.frame_ms = std::chrono::duration<double, std::milli>(finished - started).count();

      const auto estimates = extract_estimates(lmb, fc.extraction_threshold);
      rec.truth = truth[step];
      rec.ospa = ospa(positions(estimates), positions(truth[step]), config.ospa);
      rec.estimated_cardinality = estimates.size();
      rec.true_cardinality = truth[step].size();
      for (const auto& [label, track] : lmb.tracks) {
        rec.tracks.push_back({label, track.existence, position_of(track.density.mean()),
                              track.existence > fc.extraction_threshold});
      }
      result.steps.push_back(std::move(rec));
    }
  } catch (const std::exception& e) {
    result.failed = true;
    result.error = "run " + std::to_string(run) + " step " + std::to_string(step) + ": " + e.what();
  }
  return result;
}

ExperimentResult aggregate(const ScenarioConfig& config, std::vector<RunResult> runs) {
  ExperimentResult out;
  out.config = config;
  std::vector<const RunResult*> ok;
  for (const auto& r : runs) {
    if (r.failed) {
      ++out.failed_runs;
    } else {
      ok.push_back(&r);
    }
  }
  if (!ok.empty()) {
    const double n = static_cast<double>(ok.size());
    double post_ospa = 0.0;
    double post_hits = 0.0;
    std::size_t post_steps = 0;
    for (std::uint32_t k = 1; k <= config.steps; ++k) {
      StepSummary s;
      s.step = k;
      double sum = 0.0, sum_sq = 0.0, card = 0.0, ms = 0.0, groups = 0.0, hits = 0.0;
      for (const auto* r : ok) {
        const auto& rec = r->steps[k - 1];
        sum += rec.ospa;
        sum_sq += rec.ospa * rec.ospa;
        card += static_cast<double>(rec.estimated_cardinality);
        ms += rec.frame_ms;
        groups += static_cast<double>(rec.groups);
        hits += rec.estimated_cardinality == rec.true_cardinality ? 1.0 : 0.0;
      }
      s.mean_ospa = sum / n;
      if (ok.size() > 1) {
        const double var = std::max(0.0, (sum_sq - n * s.mean_ospa * s.mean_ospa) / (n - 1.0));
        s.stderr_ospa = std::sqrt(var / n);
      }
      s.mean_cardinality = card / n;
      s.true_cardinality = ok.front()->steps[k - 1].true_cardinality;
      s.mean_frame_ms = ms / n;
      s.mean_groups = groups / n;
      s.cardinality_hit_rate = hits / n;
      if (k >= config.post_transient_start) {
        post_ospa += s.mean_ospa;
        post_hits += s.cardinality_hit_rate;
        ++post_steps;
      }
      out.steps.push_back(s);
    }
    if (post_steps > 0) {
      out.post_transient_ospa = post_ospa / static_cast<double>(post_steps);
      out.post_transient_cardinality_hit_rate = post_hits / static_cast<double>(post_steps);
    }
  }
  out.runs = std::move(runs);
  return out;
}

ExperimentResult run_experiment(const ScenarioConfig& config) {
  validate(config);
  if (config.threads > 0) set_threads(config.threads);
  std::vector<RunResult> runs(config.runs);
  const auto n = static_cast<std::int64_t>(config.runs);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t r = 0; r < n; ++r) {
    runs[static_cast<std::size_t>(r)] = run_single(config, static_cast<std::size_t>(r));
  }
  auto result = aggregate(config, std::move(runs));
  if (result.failed_runs * 10 > config.runs) {
    std::string first;
    for (const auto& r : result.runs) {
      if (r.failed) {
        first = r.error;
        break;
      }
    }
    throw ExperimentFailed(std::to_string(result.failed_runs) + " of " + std::to_string(config.runs) +
                           " runs failed; first: " + first);
  }
  return result;
}

}  // namespace gomtrack::harness
