#include "gomtrack/filters.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <memory>

namespace gomtrack {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// Normalizes, drops entries below `floor`, keeps the `cap` heaviest, renormalizes.
/// The heaviest entry always survives.
void truncate_table(std::map<LabelSet, double>& table, double floor, std::size_t cap) {
  double total = 0.0;
  for (const auto& [labels, w] : table) total += w;
  if (total <= 0.0) {
    table.clear();
    return;
  }
  std::vector<std::pair<double, LabelSet>> ranked;
  ranked.reserve(table.size());
  for (const auto& [labels, w] : table) {
    if (w > 0.0) ranked.emplace_back(w / total, labels);
  }
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  table.clear();
  double kept = 0.0;
  for (std::size_t i = 0; i < ranked.size() && i < cap; ++i) {
    if (i > 0 && ranked[i].first < floor) break;
    table.emplace(ranked[i].second, ranked[i].first);
    kept += ranked[i].first;
  }
  for (auto& [labels, w] : table) w /= kept;
}

LabelSet merge_labels(const LabelSet& a, const LabelSet& b) {
  LabelSet out;
  out.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

LabelSet subset_of(const LabelSet& labels, unsigned mask) {
  LabelSet out;
  for (std::size_t k = 0; k < labels.size(); ++k) {
    if (mask & (1u << k)) out.push_back(labels[k]);
  }
  return out;
}

std::size_t birth_component(const Label& label) { return label.birth_index - 1; }

/// Visits every combination of one entry per list with the product of probabilities.
void for_each_product(const std::vector<std::vector<WeightedState>>& lists,
                      const std::function<void(double, const std::vector<Kinematic>&)>& visit) {
  std::vector<Kinematic> states(lists.size());
  auto rec = [&](auto&& self, std::size_t k, double p) -> void {
    if (k == lists.size()) {
      visit(p, states);
      return;
    }
    for (const auto& ws : lists[k]) {
      states[k] = ws.state;
      self(self, k + 1, p * ws.probability);
    }
  };
  rec(rec, 0, 1.0);
}

/// Replaces proposal weights by normalized posterior weights; returns log eta.
double weigh(JointParticleSet& joint, const LogLikelihood& likelihood, Execution execution) {
  const auto ll = evaluate_log_likelihoods(likelihood, joint, execution);
  std::vector<double> log_w(joint.size());
  for (std::size_t j = 0; j < joint.size(); ++j) {
    const double w = joint.weight(j);
    log_w[j] = w > 0.0 ? std::log(w) + ll[j] : kNegInf;
  }
  const double log_eta = log_sum_exp(log_w);
  if (!std::isfinite(log_eta)) return kNegInf;
  auto weights = joint.weights();
  for (std::size_t j = 0; j < joint.size(); ++j) weights[j] = std::exp(log_w[j] - log_eta);
  return log_eta;
}

bool needs_resampling(std::span<const double> weights, std::size_t target, double fraction) {
  if (weights.size() != target || fraction >= 1.0) return true;
  return effective_sample_size(weights) < fraction * static_cast<double>(target);
}

LmbDensity birth_existence_only(const BirthModel& birth, std::uint32_t time) {
  LmbDensity out;
  for (std::size_t i = 0; i < birth.components.size(); ++i) {
    out.tracks.emplace(birth_label(time, i), Track{birth.components[i].existence, {}});
  }
  return out;
}

/// Surviving-label proposal candidates for one predicted hypothesis.
struct Candidate {
  const Hypothesis* source;
  std::size_t particle;
  double weight;
};

}  // namespace

void validate(const FilterConfig& c) {
  if (c.particles == 0 || c.max_hypotheses == 0 || c.max_predicted_hypotheses == 0 ||
      c.hypothesis_weight_floor < 0.0 || c.hypothesis_weight_floor >= 1.0 ||
      c.predicted_weight_floor < 0.0 || c.predicted_weight_floor >= 1.0 ||
      c.existence_floor < 0.0 || c.existence_floor >= 1.0 || c.resample_ess_fraction < 0.0) {
    throw std::invalid_argument("invalid filter configuration");
  }
}

// ---- LMO-GOM ----

std::map<LabelSet, double> survival_eta(const Hypothesis& hypothesis, const Dynamics& dynamics) {
  const auto& joint = hypothesis.joint;
  const auto& labels = joint.labels();
  const std::size_t n = labels.size();
  if (n >= 31) throw EnumerationLimit("hypothesis too large for survival enumeration");
  const unsigned subsets = 1u << n;
  std::vector<double> eta(subsets, 0.0);
  std::vector<double> ps(n);
  const double total = joint.total_weight();
  for (std::size_t j = 0; j < joint.size(); ++j) {
    const double w = joint.weight(j) / total;
    if (w <= 0.0) continue;
    for (std::size_t k = 0; k < n; ++k) ps[k] = dynamics.survival_prob({joint.state(j, k), labels[k]});
    for (unsigned mask = 0; mask < subsets; ++mask) {
      double p = w;
      for (std::size_t k = 0; k < n; ++k) p *= (mask & (1u << k)) ? ps[k] : 1.0 - ps[k];
      eta[mask] += p;
    }
  }
  std::map<LabelSet, double> out;
  for (unsigned mask = 0; mask < subsets; ++mask) out.emplace(subset_of(labels, mask), eta[mask]);
  return out;
}

PredictedWeightTable lmo_predicted_weights(const LmoDensity& prior, const BirthModel& birth,
                                           const Dynamics& dynamics, std::uint32_t time,
                                           const FilterConfig& config) {
  std::map<LabelSet, double> surviving;
  for (const auto& [labels, hyp] : prior.hypotheses) {
    if (hyp.weight <= 0.0) continue;
    for (const auto& [subset, eta] : survival_eta(hyp, dynamics)) {
      surviving[subset] += hyp.weight * eta;
    }
  }
  const auto births = birth_existence_only(birth, time);
  const auto birth_weights = lmb_label_set_weights(births, births.labels());
  PredictedWeightTable table;
  for (const auto& [survivors, ws] : surviving) {
    if (ws <= 0.0) continue;
    for (const auto& [born, wb] : birth_weights) {
      if (wb > 0.0) table.weights[merge_labels(survivors, born)] += ws * wb;
    }
  }
  truncate_table(table.weights, config.predicted_weight_floor, config.max_predicted_hypotheses);
  return table;
}

LmoDensity lmo_gom_step(const LmoDensity& prior, const BirthModel& birth, const Dynamics& dynamics,
                        const LogLikelihood& likelihood, std::uint32_t time,
                        const FilterConfig& config, const RandomStream& stream) {
  validate(config);
  const auto table = lmo_predicted_weights(prior, birth, dynamics, time, config);

  // per prior hypothesis: normalized particle weights and per-coordinate survival
  struct PriorCache {
    std::vector<double> weights;
    std::vector<double> survival;  // particle-major
  };
  std::map<const Hypothesis*, PriorCache> cache;
  for (const auto& [labels, hyp] : prior.hypotheses) {
    if (hyp.weight <= 0.0) continue;
    PriorCache c;
    const double total = hyp.joint.total_weight();
    for (std::size_t j = 0; j < hyp.joint.size(); ++j) {
      c.weights.push_back(hyp.joint.weight(j) / total);
      for (std::size_t k = 0; k < labels.size(); ++k) {
        c.survival.push_back(dynamics.survival_prob({hyp.joint.state(j, k), labels[k]}));
      }
    }
    cache.emplace(&hyp, std::move(c));
  }
  std::vector<GaussianSampler> birth_gauss;
  std::vector<std::vector<double>> birth_probs;
  for (const auto& c : birth.components) {
    birth_gauss.emplace_back(c.mean, c.covariance);
    std::vector<double> probs;
    for (const auto& s : c.support) probs.push_back(s.probability);
    birth_probs.push_back(std::move(probs));
  }

  LmoDensity posterior;
  std::vector<std::pair<LabelSet, double>> log_weights;
  std::uint64_t ordinal = 0;
  for (const auto& [labels, predicted_weight] : table.weights) {
    const auto hyp_stream = stream.child(ordinal++);
    LabelSet survivors;
    LabelSet born;
    for (const auto& l : labels) (l.birth_time == time ? born : survivors).push_back(l);

    // auxiliary-variable proposal over (previous hypothesis, previous particle)
    std::vector<Candidate> candidates;
    std::vector<std::vector<std::size_t>> coordinate_maps;
    std::map<const Hypothesis*, std::size_t> map_index;
    for (const auto& [prev_labels, hyp] : prior.hypotheses) {
      if (hyp.weight <= 0.0 || !includes(prev_labels, survivors)) continue;
      const auto& c = cache.at(&hyp);
      const std::size_t n = prev_labels.size();
      std::vector<char> kept(n, 0);
      std::vector<std::size_t> coords;
      for (const auto& l : survivors) {
        const std::size_t k = hyp.joint.coordinate_of(l);
        kept[k] = 1;
        coords.push_back(k);
      }
      map_index.emplace(&hyp, coordinate_maps.size());
      coordinate_maps.push_back(std::move(coords));
      for (std::size_t u = 0; u < hyp.joint.size(); ++u) {
        double w = hyp.weight * c.weights[u];
        for (std::size_t k = 0; k < n; ++k) {
          const double ps = c.survival[u * n + k];
          w *= kept[k] ? ps : 1.0 - ps;
        }
        if (w > 0.0) candidates.push_back({&hyp, u, w});
      }
    }
    if (candidates.empty()) continue;

    std::vector<std::size_t> survivor_pos;
    std::vector<std::size_t> born_pos;
    for (std::size_t k = 0; k < labels.size(); ++k) {
      (labels[k].birth_time == time ? born_pos : survivor_pos).push_back(k);
    }

    JointParticleSet joint(labels);
    std::vector<Kinematic> states(labels.size());
    auto rng = hyp_stream.engine();
    if (config.exhaustive) {
      double total = 0.0;
      for (const auto& c : candidates) total += c.weight;
      for (const auto& c : candidates) {
        const auto& coords = coordinate_maps[map_index.at(c.source)];
        std::vector<std::vector<WeightedState>> lists;
        for (std::size_t k : coords) {
          lists.push_back(dynamics.transition_support(c.source->joint.state(c.particle, k)));
        }
        for (const auto& l : born) {
          const auto& support = birth.components[birth_component(l)].support;
          if (support.empty()) throw std::logic_error("exhaustive births need a finite support");
          lists.push_back(support);
        }
        for_each_product(lists, [&](double p, const std::vector<Kinematic>& xs) {
          for (std::size_t i = 0; i < survivor_pos.size(); ++i) states[survivor_pos[i]] = xs[i];
          for (std::size_t i = 0; i < born_pos.size(); ++i) {
            states[born_pos[i]] = xs[survivor_pos.size() + i];
          }
          joint.add(c.weight / total * p, states);
        });
      }
      joint.compact();
    } else if (labels.empty()) {
      joint.add(1.0, {});
    } else {
      std::vector<double> cw;
      cw.reserve(candidates.size());
      for (const auto& c : candidates) cw.push_back(c.weight);
      WeightedIndexSampler pick(cw);
      std::vector<std::unique_ptr<WeightedIndexSampler>> born_pick;
      for (const auto& l : born) {
        const auto& probs = birth_probs[birth_component(l)];
        born_pick.push_back(probs.empty() ? nullptr : std::make_unique<WeightedIndexSampler>(probs));
      }
      joint.reserve(config.particles);
      const double w = 1.0 / static_cast<double>(config.particles);
      for (std::size_t n = 0; n < config.particles; ++n) {
        const auto& c = candidates[pick(rng)];
        const auto& coords = coordinate_maps[map_index.at(c.source)];
        for (std::size_t i = 0; i < coords.size(); ++i) {
          states[survivor_pos[i]] = dynamics.propagate(c.source->joint.state(c.particle, coords[i]), rng);
        }
        for (std::size_t i = 0; i < born.size(); ++i) {
          const std::size_t b = birth_component(born[i]);
          states[born_pos[i]] = born_pick[i] ? birth.components[b].support[(*born_pick[i])(rng)].state
                                             : birth_gauss[b](rng);
        }
        joint.add(w, states);
      }
    }

    const double log_eta = weigh(joint, likelihood, config.execution);
    if (!std::isfinite(log_eta)) continue;
    if (!config.exhaustive && !labels.empty() &&
        needs_resampling(joint.weights(), config.particles, config.resample_ess_fraction)) {
      joint = resample_systematic(joint, config.particles, rng);
    }
    log_weights.emplace_back(labels, log_eta + std::log(predicted_weight));
    posterior.hypotheses.emplace(labels, Hypothesis{0.0, std::move(joint)});
  }

  if (log_weights.empty()) throw DegenerateUpdate(time, "every LMO hypothesis has zero likelihood");
  std::vector<double> lw;
  for (const auto& entry : log_weights) lw.push_back(entry.second);
  const auto w = normalize_log_weights(lw);
  std::map<LabelSet, double> weights;
  for (std::size_t i = 0; i < w.size(); ++i) weights.emplace(log_weights[i].first, w[i]);
  truncate_table(weights, config.hypothesis_weight_floor, config.max_hypotheses);
  for (auto it = posterior.hypotheses.begin(); it != posterior.hypotheses.end();) {
    auto found = weights.find(it->first);
    if (found == weights.end()) {
      it = posterior.hypotheses.erase(it);
    } else {
      it->second.weight = found->second;
      ++it;
    }
  }
  return posterior;
}

// ---- LMB-GOM ----

LmbDensity lmb_predict(const LmbDensity& prior, const BirthModel& birth, const Dynamics& dynamics,
                       std::uint32_t time, const FilterConfig& config, const RandomStream& stream) {
  LmbDensity out;
  for (const auto& [label, track] : prior.tracks) {
    const auto& cloud = track.density;
    const double total = cloud.total_weight();
    if (total <= 0.0 || track.existence <= 0.0) continue;
    std::vector<double> ps(cloud.size());
    double eta = 0.0;
    for (std::size_t j = 0; j < cloud.size(); ++j) {
      ps[j] = dynamics.survival_prob({cloud.states[j], label});
      eta += cloud.weights[j] * ps[j];
    }
    eta /= total;
    if (eta <= 0.0) continue;
    Track next{track.existence * eta, {}};
    const double scale = 1.0 / (total * eta);
    if (config.exhaustive) {
      for (std::size_t j = 0; j < cloud.size(); ++j) {
        const double w = cloud.weights[j] * ps[j] * scale;
        if (w <= 0.0) continue;
        for (const auto& s : dynamics.transition_support(cloud.states[j])) {
          next.density.add(w * s.probability, s.state);
        }
      }
      next.density.compact();
    } else {
      auto rng = stream.child(stream_ordinal(label)).engine();
      next.density.weights.reserve(cloud.size());
      next.density.states.reserve(cloud.size());
      for (std::size_t j = 0; j < cloud.size(); ++j) {
        next.density.add(cloud.weights[j] * ps[j] * scale, dynamics.propagate(cloud.states[j], rng));
      }
    }
    out.tracks.emplace(label, std::move(next));
  }

  LmbDensity births;
  if (config.exhaustive) {
    births = enumerate_birth(birth, time);
  } else {
    auto rng = stream.child(0).engine();
    births = sample_birth(birth, time, config.particles, rng);
  }
  for (auto& [label, track] : births.tracks) {
    if (track.existence <= 0.0) continue;
    if (!out.tracks.emplace(label, std::move(track)).second) {
      throw std::logic_error("birth label " + to_string(label) + " collides with a surviving track");
    }
  }
  return out;
}

LmbDensity lmb_gom_update(const LmbDensity& predicted, const LogLikelihood& likelihood,
                          std::uint32_t time, const FilterConfig& config,
                          const RandomStream& stream) {
  validate(config);
  LmbDensity out;
  LabelSet gated;
  for (const auto& [label, track] : predicted.tracks) {
    if (track.existence >= config.existence_floor) {
      gated.push_back(label);
    } else {
      out.tracks.emplace(label, track);
    }
  }

  auto table = lmb_label_set_weights(predicted, gated, config.predicted_weight_floor);
  truncate_table(table, config.predicted_weight_floor, config.max_predicted_hypotheses);

  LmoDensity posterior;
  std::vector<double> log_weights;
  std::vector<LabelSet> kept;
  const auto draw_stream = stream.child(0);
  std::uint64_t ordinal = 0;
  for (const auto& [labels, predicted_weight] : table) {
    auto rng = draw_stream.child(ordinal++).engine();
    JointParticleSet joint = config.exhaustive ? product_joint(predicted, labels)
                                               : product_joint(predicted, labels, config.particles, rng);
    const double log_eta = weigh(joint, likelihood, config.execution);
    if (!std::isfinite(log_eta)) continue;
    log_weights.push_back(log_eta + std::log(predicted_weight));
    kept.push_back(labels);
    posterior.hypotheses.emplace(labels, Hypothesis{0.0, std::move(joint)});
  }
  if (kept.empty()) throw DegenerateUpdate(time, "every LMB hypothesis has zero likelihood");
  const auto w = normalize_log_weights(log_weights);
  for (std::size_t i = 0; i < kept.size(); ++i) posterior.hypotheses.at(kept[i]).weight = w[i];

  auto collapsed = best_lmb_approx(posterior);
  const auto resample_stream = stream.child(1);
  for (auto& [label, track] : collapsed.tracks) {
    auto& cloud = track.density;
    if (config.exhaustive) {
      cloud.compact();
      cloud.normalize();
    } else if (needs_resampling(cloud.weights, config.particles, config.resample_ess_fraction)) {
      auto rng = resample_stream.child(stream_ordinal(label)).engine();
      cloud = resample_systematic(cloud, config.particles, rng);
    } else {
      cloud.normalize();
    }
    out.tracks.emplace(label, std::move(track));
  }
  return out;
}

LmbDensity lmb_gom_step(const LmbDensity& prior, const BirthModel& birth, const Dynamics& dynamics,
                        const LogLikelihood& likelihood, std::uint32_t time,
                        const FilterConfig& config, const RandomStream& stream) {
  const auto predicted = lmb_predict(prior, birth, dynamics, time, config, stream.child(0));
  return lmb_gom_update(predicted, likelihood, time, config, stream.child(1));
}

// ---- G-LMB-GOM ----

LmbDensity g_lmb_gom_step(const LmbDensity& prior, const BirthModel& birth,
                          const Dynamics& dynamics, const Sensor& sensor,
                          const ObservationFrame& frame, const GroupingConfig& grouping,
                          std::uint32_t time, const FilterConfig& config,
                          const RandomStream& stream, GroupReport* report) {
  const auto predicted = lmb_predict(prior, birth, dynamics, time, config, stream.child(0));
  auto partition = partition_tracks(predicted, sensor, grouping, config.existence_floor);
  const std::size_t groups = partition.groups.size();
  if (report) {
    report->groups = groups;
    report->degenerate_groups = 0;
  }
  if (groups <= 1) {
    if (report) report->partition = std::move(partition);
    return lmb_gom_update(predicted, bind_likelihood(sensor, frame), time, config, stream.child(1));
  }

  const auto update_stream = stream.child(1);
  std::vector<LmbDensity> results(groups);
  std::vector<char> degenerate(groups, 0);
  std::vector<std::exception_ptr> errors(groups);
  const auto n = static_cast<std::int64_t>(groups);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto& group = partition.groups[static_cast<std::size_t>(i)];
    LmbDensity sub;
    for (const auto& l : group.labels) sub.tracks.emplace(l, predicted.tracks.at(l));
    try {
      const auto likelihood = bind_likelihood(sensor, frame, group.observations);
      results[i] = lmb_gom_update(sub, likelihood, time, config,
                                  update_stream.child(static_cast<std::uint64_t>(i)));
    } catch (const DegenerateUpdate&) {
      results[i] = std::move(sub);
      degenerate[i] = 1;
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  LmbDensity out;
  for (const auto& [label, track] : predicted.tracks) {
    if (track.existence < config.existence_floor || track.density.empty()) out.tracks.emplace(label, track);
  }
  for (std::size_t i = 0; i < groups; ++i) {
    for (auto& [label, track] : results[i].tracks) out.tracks.emplace(label, std::move(track));
  }
  if (report) {
    report->degenerate_groups = static_cast<std::size_t>(std::count(degenerate.begin(), degenerate.end(), 1));
    report->partition = std::move(partition);
  }
  return out;
}

}  // namespace gomtrack
