#include "gomtrack/filters.hpp"
#include "gomtrack/kernels.hpp"
#include "gomtrack/sensors.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace gomtrack;

TbdModel tbd_model() {
  TbdModel m;
  m.grid = {50, 50, 1.0, 1.0};
  m.source_intensity = 30.0;
  m.blur_var = 1.0;
  m.noise_var = noise_var_for_snr(m, 15.0);
  return m;
}

std::vector<Kinematic> separated_objects(std::size_t n) {
  std::vector<Kinematic> xs;
  for (std::size_t i = 0; i < n; ++i) xs.emplace_back(5.0 + 13.0 * i, 25.0, 0.5, 0.0);
  return xs;
}

LmbDensity tracks_around(const std::vector<Kinematic>& xs, std::size_t particles, Rng& rng) {
  LmbDensity lmb;
  Matrix4 cov = Kinematic(1.0, 1.0, 0.2, 0.2).asDiagonal();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    GaussianSampler s(xs[i], cov);
    Track t{0.99, {}};
    for (std::size_t j = 0; j < particles; ++j) t.density.add(1.0 / particles, s(rng));
    lmb.tracks.emplace(Label{0, static_cast<std::uint32_t>(i + 1)}, std::move(t));
  }
  return lmb;
}

void BM_Likelihood(benchmark::State& state, Execution execution) {
  const auto model = tbd_model();
  Rng rng(7);
  const auto truth = separated_objects(3);
  const auto frame = sample_tbd_frame(model, truth, rng);
  const auto lmb = tracks_around(truth, 5000, rng);
  const auto joint = product_joint(lmb, lmb.labels(), 5000, rng);
  const auto ll = bind_likelihood(Sensor{model}, frame);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_log_likelihoods(ll, joint, execution));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(joint.size()));
}
BENCHMARK_CAPTURE(BM_Likelihood, serial, Execution::serial)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Likelihood, openmp, Execution::parallel)->Unit(benchmark::kMillisecond);

void BM_Step(benchmark::State& state, bool grouped) {
  const Sensor sensor{tbd_model()};
  Rng rng(11);
  const auto truth = separated_objects(4);
  const auto frame = sample_frame(sensor, truth, rng);
  const auto prior = tracks_around(truth, 2000, rng);
  const auto motion = MotionModel::constant_velocity(1.0, 0.1, 0.98);
  FilterConfig cfg;
  cfg.particles = 2000;
  GroupingConfig grouping;
  const RandomStream stream(3);
  for (auto _ : state) {
    if (grouped) {
      benchmark::DoNotOptimize(g_lmb_gom_step(prior, {}, motion, sensor, frame, grouping, 1, cfg, stream));
    } else {
      benchmark::DoNotOptimize(
          lmb_gom_step(prior, {}, motion, bind_likelihood(sensor, frame), 1, cfg, stream));
    }
  }
}
BENCHMARK_CAPTURE(BM_Step, lmb_gom, false)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Step, g_lmb_gom, true)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
