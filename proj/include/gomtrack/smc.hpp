#pragma once

#include "gomtrack/types.hpp"

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

namespace gomtrack {

using Rng = std::mt19937_64;

/// Seedable, hierarchical source of random draws. A stream is a value: the same
/// (seed, stream_id) always yields the same sequence, and child streams are derived by
/// hashing, so a parallel decomposition that hands each task its own child never changes
/// results.
class RandomStream {
 public:
  RandomStream() = default;
  explicit RandomStream(std::uint64_t seed, std::uint64_t stream_id = 0)
      : seed_(seed), stream_id_(stream_id) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  RandomStream child(std::uint64_t ordinal) const;
  /// Fresh engine positioned at the start of this stream.
  Rng engine() const;

  friend bool operator==(const RandomStream&, const RandomStream&) = default;

 private:
  std::uint64_t seed_ = 0;
  std::uint64_t stream_id_ = 0;
};

/// Stable 64-bit ordinal for a label, used to derive per-track child streams.
std::uint64_t stream_ordinal(const Label& label);

/// Raised when every weight of a particle set or hypothesis table is zero.
class DegenerateWeights : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Rescales non-negative weights to sum to one. Throws DegenerateWeights if all are zero.
std::vector<double> normalize(std::span<const double> weights);

double effective_sample_size(std::span<const double> weights);

/// log(sum(exp(values))); -infinity for an empty or all -infinity input.
double log_sum_exp(std::span<const double> values);

/// exp(log_weights - log_sum_exp(log_weights)). Throws DegenerateWeights if all are -inf.
std::vector<double> normalize_log_weights(std::span<const double> log_weights);

/// Systematic resampling: one uniform offset, n evenly spaced strata. Returns the source
/// index of every output particle in nondecreasing order.
std::vector<std::size_t> systematic_indices(std::span<const double> weights, std::size_t n,
                                            Rng& rng);

ParticleCloud resample_systematic(const ParticleCloud& cloud, std::size_t n, Rng& rng);
JointParticleSet resample_systematic(const JointParticleSet& joint, std::size_t n, Rng& rng);

/// Draws indices i with probability proportional to weights[i] by CDF inversion.
class WeightedIndexSampler {
 public:
  explicit WeightedIndexSampler(std::span<const double> weights);
  std::size_t operator()(Rng& rng) const;
  double total() const { return cumulative_.empty() ? 0.0 : cumulative_.back(); }

 private:
  std::vector<double> cumulative_;
};

/// Draws from N(mean, covariance) for a positive semi-definite covariance (singular allowed).
class GaussianSampler {
 public:
  GaussianSampler(const Kinematic& mean, const Matrix4& covariance);
  Kinematic operator()(Rng& rng) const;
  const Matrix4& factor() const { return factor_; }

 private:
  Kinematic mean_;
  Matrix4 factor_;
};

/// Square-root factor L with L L^T = covariance, tolerant of singular PSD matrices.
Matrix4 psd_factor(const Matrix4& covariance);

}  // namespace gomtrack
