#include "gomtrack/grouping.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace gomtrack {

namespace {

/// Smallest value whose cumulative weight reaches `q` of the total.
double weighted_quantile(std::vector<std::pair<double, double>>& values, double q) {
  std::sort(values.begin(), values.end());
  double total = 0.0;
  for (const auto& v : values) total += v.second;
  const double target = q * total;
  double cumulative = 0.0;
  for (const auto& [x, w] : values) {
    cumulative += w;
    if (cumulative >= target) return x;
  }
  return values.back().first;
}

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t i) {
    while (parent_[i] != i) i = parent_[i] = parent_[parent_[i]];
    return i;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

void validate(const GroupingConfig& config) {
  if (!(config.confidence > 0.0 && config.confidence < 1.0) || config.tbd_threshold <= 0.0 ||
      config.acoustic_radius <= 0.0) {
    throw std::invalid_argument("invalid grouping configuration");
  }
}

PositionBox hdr_box(const ParticleCloud& cloud, double confidence) {
  if (cloud.empty()) throw std::invalid_argument("H.D.R. of an empty cloud");
  const double lo = 0.5 * (1.0 - confidence);
  const double hi = 0.5 * (1.0 + confidence);
  PositionBox box;
  const bool uniform = std::all_of(cloud.weights.begin(), cloud.weights.end(),
                                   [&](double w) { return w == cloud.weights.front(); });
  if (uniform) {
    // equal weights: the quantiles are order statistics
    const std::size_t n = cloud.size();
    auto rank = [n](double q) {
      const double r = std::ceil(q * static_cast<double>(n) - 1e-9);
      return static_cast<std::size_t>(std::clamp(r, 1.0, static_cast<double>(n))) - 1;
    };
    std::vector<double> v(n);
    for (int axis = 0; axis < 2; ++axis) {
      for (std::size_t i = 0; i < n; ++i) v[i] = cloud.states[i][axis];
      const auto r_lo = rank(lo);
      const auto r_hi = rank(hi);
      std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(r_lo), v.end());
      const double q_lo = v[r_lo];
      std::nth_element(v.begin() + static_cast<std::ptrdiff_t>(r_lo),
                       v.begin() + static_cast<std::ptrdiff_t>(r_hi), v.end());
      const double q_hi = v[r_hi];
      (axis == 0 ? box.x_lo : box.y_lo) = q_lo;
      (axis == 0 ? box.x_hi : box.y_hi) = q_hi;
    }
    return box;
  }
  std::vector<std::pair<double, double>> xs(cloud.size());
  std::vector<std::pair<double, double>> ys(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    xs[i] = {cloud.states[i][0], cloud.weights[i]};
    ys[i] = {cloud.states[i][1], cloud.weights[i]};
  }
  box.x_lo = weighted_quantile(xs, lo);
  box.x_hi = weighted_quantile(xs, hi);
  box.y_lo = weighted_quantile(ys, lo);
  box.y_hi = weighted_quantile(ys, hi);
  return box;
}

Region track_vor(const ParticleCloud& cloud, const Sensor& sensor, const GroupingConfig& config) {
  const auto box = hdr_box(cloud, config.confidence);
  std::vector<char> hit(static_cast<std::size_t>(observation_size(sensor)), 0);
  if (const auto* tbd = std::get_if<TbdModel>(&sensor)) {
    // particles sharing a clipped template box contribute the same cells
    std::vector<TemplateBox> seen;
    for (const auto& x : cloud.states) {
      if (!box.contains(x)) continue;
      const auto t = template_box(*tbd, x);
      if (t.empty()) continue;
      const bool known = std::any_of(seen.begin(), seen.end(), [&](const TemplateBox& o) {
        return o.a_lo == t.a_lo && o.a_hi == t.a_hi && o.b_lo == t.b_lo && o.b_hi == t.b_hi;
      });
      if (known) continue;
      seen.push_back(t);
      for (int b = t.b_lo; b <= t.b_hi; ++b) {
        for (int a = t.a_lo; a <= t.a_hi; ++a) hit[tbd->grid.index(a, b)] = 1;
      }
    }
  } else {
    const auto& acoustic = std::get<AcousticModel>(sensor);
    std::vector<Position> inside;
    for (const auto& x : cloud.states) {
      if (box.contains(x)) inside.push_back(position_of(x));
    }
    const double beta = config.acoustic_radius;
    for (std::size_t m = 0; m < acoustic.sensors.size(); ++m) {
      const auto& s = acoustic.sensors[m];
      // sensors farther than beta from the box cannot be within beta of a particle in it
      const double dx = std::max({box.x_lo - s[0], 0.0, s[0] - box.x_hi});
      const double dy = std::max({box.y_lo - s[1], 0.0, s[1] - box.y_hi});
      if (dx * dx + dy * dy > beta * beta) continue;
      for (const auto& p : inside) {
        if ((p - s).squaredNorm() <= beta * beta) {
          hit[m] = 1;
          break;
        }
      }
    }
  }
  Region out;
  for (std::size_t j = 0; j < hit.size(); ++j) {
    if (hit[j]) out.push_back(static_cast<int>(j));
  }
  return out;
}

bool coupled(const ParticleCloud& a, const ParticleCloud& b, const Sensor& sensor,
             const GroupingConfig& config) {
  const Kinematic ma = a.mean();
  const Kinematic mb = b.mean();
  switch (config.mode) {
    case CouplingMode::tbd_distance:
      return std::hypot(ma[0] - mb[0], ma[1] - mb[1]) <= config.tbd_threshold;
    case CouplingMode::acoustic_radius: {
      const auto* acoustic = std::get_if<AcousticModel>(&sensor);
      if (!acoustic) throw std::invalid_argument("acoustic-radius coupling needs an acoustic sensor");
      for (const auto& s : acoustic->sensors) {
        if (std::hypot(ma[0] - s[0], ma[1] - s[1]) <= config.acoustic_radius &&
            std::hypot(mb[0] - s[0], mb[1] - s[1]) <= config.acoustic_radius) {
          return true;
        }
      }
      return false;
    }
    case CouplingMode::vor_intersection:
      return intersects(track_vor(a, sensor, config), track_vor(b, sensor, config));
  }
  return true;
}

TrackPartition partition_tracks(const LmbDensity& lmb, const Sensor& sensor,
                                const GroupingConfig& config, double existence_floor) {
  validate(config);
  std::vector<Label> labels;
  std::vector<const ParticleCloud*> clouds;
  for (const auto& [label, track] : lmb.tracks) {
    if (track.existence >= existence_floor && !track.density.empty()) {
      labels.push_back(label);
      clouds.push_back(&track.density);
    }
  }
  const std::size_t n = labels.size();
  std::vector<Region> vors(n);
  for (std::size_t i = 0; i < n; ++i) vors[i] = track_vor(*clouds[i], sensor, config);

  DisjointSets sets(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (sets.find(i) == sets.find(j)) continue;
      const bool c = config.mode == CouplingMode::vor_intersection
                         ? intersects(vors[i], vors[j])
                         : coupled(*clouds[i], *clouds[j], sensor, config);
      if (c) sets.unite(i, j);
    }
  }

  // overlap repair: components whose observation regions meet are merged
  bool merged = true;
  while (merged) {
    merged = false;
    std::vector<Region> component(n);
    for (std::size_t i = 0; i < n; ++i) {
      auto& r = component[sets.find(i)];
      r = region_union(r, vors[i]);
    }
    for (std::size_t i = 0; i < n && !merged; ++i) {
      if (sets.find(i) != i) continue;
      for (std::size_t j = i + 1; j < n && !merged; ++j) {
        if (sets.find(j) != j) continue;
        if (intersects(component[i], component[j])) {
          sets.unite(i, j);
          merged = true;
        }
      }
    }
  }

  TrackPartition partition;
  std::vector<int> group_of(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t root = sets.find(i);
    if (group_of[root] < 0) {
      group_of[root] = static_cast<int>(partition.groups.size());
      partition.groups.emplace_back();
    }
    auto& g = partition.groups[group_of[root]];
    g.labels.push_back(labels[i]);
    g.observations = region_union(g.observations, vors[i]);
  }

  std::vector<char> claimed(static_cast<std::size_t>(observation_size(sensor)), 0);
  for (const auto& g : partition.groups) {
    for (int j : g.observations) claimed[j] = 1;
  }
  for (std::size_t j = 0; j < claimed.size(); ++j) {
    if (!claimed[j]) partition.residual.push_back(static_cast<int>(j));
  }
  return partition;
}

}  // namespace gomtrack
