#include "gomtrack/smc.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace gomtrack {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

RandomStream RandomStream::child(std::uint64_t ordinal) const {
  return RandomStream(seed_, splitmix64(stream_id_ ^ splitmix64(ordinal + 0x632be59bd9b4e019ULL)));
}

Rng RandomStream::engine() const {
  std::seed_seq seq{static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32),
                    static_cast<std::uint32_t>(stream_id_),
                    static_cast<std::uint32_t>(stream_id_ >> 32)};
  return Rng(seq);
}

std::uint64_t stream_ordinal(const Label& label) {
  return (static_cast<std::uint64_t>(label.birth_time) << 32) | label.birth_index;
}

std::vector<double> normalize(std::span<const double> weights) {
  double total = 0.0;
  for (double w : weights) {
    if (w < 0.0 || !std::isfinite(w)) throw std::invalid_argument("weights must be finite and >= 0");
    total += w;
  }
  if (total <= 0.0) throw DegenerateWeights("all weights are zero");
  std::vector<double> out(weights.begin(), weights.end());
  for (auto& w : out) w /= total;
  return out;
}

double effective_sample_size(std::span<const double> weights) {
  double sum_sq = 0.0;
  for (double w : weights) sum_sq += w * w;
  return sum_sq > 0.0 ? 1.0 / sum_sq : 0.0;
}

double log_sum_exp(std::span<const double> values) {
  double peak = -std::numeric_limits<double>::infinity();
  for (double v : values) peak = std::max(peak, v);
  if (!std::isfinite(peak)) return peak;
  double sum = 0.0;
  for (double v : values) sum += std::exp(v - peak);
  return peak + std::log(sum);
}

std::vector<double> normalize_log_weights(std::span<const double> log_weights) {
  const double lse = log_sum_exp(log_weights);
  if (!std::isfinite(lse)) throw DegenerateWeights("all log-weights are -inf");
  std::vector<double> out(log_weights.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::exp(log_weights[i] - lse);
  return out;
}

std::vector<std::size_t> systematic_indices(std::span<const double> weights, std::size_t n,
                                            Rng& rng) {
  if (weights.empty()) throw std::invalid_argument("cannot resample an empty particle set");
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (total <= 0.0) throw DegenerateWeights("cannot resample zero-mass particles");
  std::uniform_real_distribution<double> offset(0.0, 1.0);
  const double u0 = offset(rng);
  std::vector<std::size_t> indices;
  indices.reserve(n);
  std::size_t i = 0;
  double cumulative = weights[0] / total;
  // round-off must never push a stratum onto trailing zero-weight particles
  std::size_t last = weights.size() - 1;
  while (last > 0 && weights[last] <= 0.0) --last;
  for (std::size_t k = 0; k < n; ++k) {
    const double u = (u0 + static_cast<double>(k)) / static_cast<double>(n);
    while (u >= cumulative && i < last) {
      ++i;
      cumulative += weights[i] / total;
    }
    indices.push_back(i);
  }
  return indices;
}

ParticleCloud resample_systematic(const ParticleCloud& cloud, std::size_t n, Rng& rng) {
  const auto indices = systematic_indices(cloud.weights, n, rng);
  ParticleCloud out;
  out.weights.assign(n, 1.0 / static_cast<double>(n));
  out.states.reserve(n);
  for (std::size_t idx : indices) out.states.push_back(cloud.states[idx]);
  return out;
}

JointParticleSet resample_systematic(const JointParticleSet& joint, std::size_t n, Rng& rng) {
  const auto indices = systematic_indices(joint.weights(), n, rng);
  JointParticleSet out(joint.labels());
  out.reserve(n);
  const double w = 1.0 / static_cast<double>(n);
  for (std::size_t idx : indices) out.add(w, joint.particle(idx));
  return out;
}

WeightedIndexSampler::WeightedIndexSampler(std::span<const double> weights) {
  cumulative_.resize(weights.size());
  std::partial_sum(weights.begin(), weights.end(), cumulative_.begin());
  if (cumulative_.empty() || cumulative_.back() <= 0.0) {
    throw DegenerateWeights("cannot sample indices from zero-mass weights");
  }
}

std::size_t WeightedIndexSampler::operator()(Rng& rng) const {
  std::uniform_real_distribution<double> uniform(0.0, cumulative_.back());
  const double u = uniform(rng);
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  if (it == cumulative_.end()) --it;
  return static_cast<std::size_t>(it - cumulative_.begin());
}

Matrix4 psd_factor(const Matrix4& covariance) {
  Eigen::SelfAdjointEigenSolver<Matrix4> eig(0.5 * (covariance + covariance.transpose()));
  Eigen::Vector4d root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors() * root.asDiagonal();
}

GaussianSampler::GaussianSampler(const Kinematic& mean, const Matrix4& covariance)
    : mean_(mean), factor_(psd_factor(covariance)) {}

Kinematic GaussianSampler::operator()(Rng& rng) const {
  std::normal_distribution<double> normal(0.0, 1.0);
  Kinematic n;
  for (int i = 0; i < 4; ++i) n[i] = normal(rng);
  return mean_ + factor_ * n;
}

}  // namespace gomtrack
