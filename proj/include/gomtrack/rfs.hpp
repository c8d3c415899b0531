#pragma once

#include "gomtrack/smc.hpp"
#include "gomtrack/types.hpp"

#include <cstddef>
#include <map>
#include <stdexcept>
#include <vector>

namespace gomtrack {

/// Largest label count whose 2^n label-set table may be materialized.
inline constexpr std::size_t kMaxEnumeratedLabels = 20;

class EnumerationLimit : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Bernoulli-product weights  prod_{l in I} r_l prod_{l in labels - I} (1 - r_l)  for every
/// I subset of `labels` whose weight is at least `floor`. Branches that cannot reach the floor
/// are pruned, so floor = 0 enumerates every nonzero-weight subset.
std::map<LabelSet, double> lmb_label_set_weights(const LmbDensity& lmb, const LabelSet& labels,
                                                 double floor = 0.0);

/// Joint particles for `labels` as independent draws from the per-track clouds; each of the
/// `particles` joint samples gets weight 1/particles.
JointParticleSet product_joint(const LmbDensity& lmb, const LabelSet& labels,
                               std::size_t particles, Rng& rng);
/// Exact Cartesian product of the per-track clouds (finite discrete mode).
JointParticleSet product_joint(const LmbDensity& lmb, const LabelSet& labels);

/// LMB -> LMO with exhaustively enumerated product joints.
LmoDensity lmb_to_lmo(const LmbDensity& lmb);
/// LMB -> LMO with `particles` sampled joint particles per hypothesis.
LmoDensity lmb_to_lmo(const LmbDensity& lmb, std::size_t particles, const RandomStream& stream);

LabeledPhd labeled_phd_lmo(const LmoDensity& lmo);
LabeledPhd labeled_phd_lmb(const LmbDensity& lmb);

/// Existence probabilities below this are dropped from collapsed LMB outputs.
inline constexpr double kMinCollapsedExistence = 1e-12;

/// KLD-minimizing LMB of an LMO density: r = sum of hypothesis weights containing the label,
/// p = pooled label coordinate of every joint particle weighted by omega(I) * w_j.
LmbDensity best_lmb_approx(const LmoDensity& lmo);

/// KL divergence between two LMO densities on an enumerated discrete kinematic space.
/// Identical states must be bit-identical. Returns +inf when p has mass where q has none.
double kld_discrete(const LmoDensity& p, const LmoDensity& q);

std::vector<LabeledState> extract_estimates(const LmbDensity& lmb, double existence_threshold);

/// Entry n is the total weight of hypotheses with n labels.
std::vector<double> cardinality_distribution(const LmoDensity& lmo);
double expected_cardinality(const LmoDensity& lmo);

/// Removes tracks whose existence probability is below `threshold`.
void prune_tracks(LmbDensity& lmb, double threshold);

}  // namespace gomtrack
