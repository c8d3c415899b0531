#include "oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace oracle {

int Space::index_of(const Kinematic& x) const {
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (states[i] == x) return static_cast<int>(i);
  }
  throw std::invalid_argument("state outside the toy space");
}

Table from_lmo(const gomtrack::LmoDensity& lmo, const Space& space) {
  Table out;
  for (const auto& [labels, hyp] : lmo.hypotheses) {
    const double total = hyp.joint.total_weight();
    for (std::size_t j = 0; j < hyp.joint.size(); ++j) {
      Point pt{labels, {}};
      for (const auto& x : hyp.joint.particle(j)) pt.states.push_back(space.index_of(x));
      out[pt] += hyp.weight * hyp.joint.weight(j) / total;
    }
  }
  return out;
}

Table from_lmb(const Lmb& lmb) {
  Table out{{Point{}, 1.0}};
  for (const auto& [label, b] : lmb) {
    Table next;
    for (const auto& [pt, w] : out) {
      if (1.0 - b.existence > 0.0) next[pt] += w * (1.0 - b.existence);
      for (std::size_t s = 0; s < b.p.size(); ++s) {
        if (b.existence * b.p[s] <= 0.0) continue;
        Point grown = pt;
        // labels are visited in increasing order, so appending keeps label order
        grown.labels.push_back(label);
        grown.states.push_back(static_cast<int>(s));
        next[grown] += w * b.existence * b.p[s];
      }
    }
    out = std::move(next);
  }
  return out;
}

gomtrack::LmbDensity to_lmb_density(const Lmb& lmb, const Space& space) {
  gomtrack::LmbDensity out;
  for (const auto& [label, b] : lmb) {
    gomtrack::Track t{b.existence, {}};
    for (std::size_t s = 0; s < b.p.size(); ++s) {
      if (b.p[s] > 0.0) t.density.add(b.p[s], space.states[s]);
    }
    out.tracks.emplace(label, std::move(t));
  }
  return out;
}

Table predict(const Table& prior, const Space& space, const std::vector<Birth>& births) {
  Table survivors;
  for (const auto& [pt, w] : prior) {
    const std::size_t n = pt.labels.size();
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      double keep = w;
      for (std::size_t k = 0; k < n; ++k) {
        const double ps = space.survival[pt.states[k]];
        keep *= (mask & (1u << k)) ? ps : 1.0 - ps;
      }
      if (keep <= 0.0) continue;
      Point base;
      std::vector<int> from;
      for (std::size_t k = 0; k < n; ++k) {
        if (mask & (1u << k)) {
          base.labels.push_back(pt.labels[k]);
          from.push_back(pt.states[k]);
        }
      }
      // move every survivor through the transition matrix
      std::vector<std::pair<std::vector<int>, double>> moves{{{}, keep}};
      for (int s : from) {
        std::vector<std::pair<std::vector<int>, double>> next;
        for (const auto& [tuple, p] : moves) {
          for (std::size_t t = 0; t < space.states.size(); ++t) {
            const double q = space.transition(s, static_cast<Eigen::Index>(t));
            if (q <= 0.0) continue;
            auto grown = tuple;
            grown.push_back(static_cast<int>(t));
            next.emplace_back(std::move(grown), p * q);
          }
        }
        moves = std::move(next);
      }
      for (const auto& [tuple, p] : moves) {
        base.states = tuple;
        survivors[base] += p;
      }
    }
  }
  Lmb born;
  for (const auto& b : births) born[b.label] = {b.existence, b.probabilities};
  const Table birth_table = from_lmb(born);
  Table out;
  for (const auto& [s, ws] : survivors) {
    for (const auto& [b, wb] : birth_table) {
      // merge two label-ordered points
      Point merged;
      std::size_t i = 0, j = 0;
      while (i < s.labels.size() || j < b.labels.size()) {
        if (j == b.labels.size() || (i < s.labels.size() && s.labels[i] < b.labels[j])) {
          merged.labels.push_back(s.labels[i]);
          merged.states.push_back(s.states[i++]);
        } else {
          merged.labels.push_back(b.labels[j]);
          merged.states.push_back(b.states[j++]);
        }
      }
      out[merged] += ws * wb;
    }
  }
  return out;
}

Table bayes(const Table& prior, const Space& space, const JointLogLikelihood& ll) {
  Table out;
  double total = 0.0;
  for (const auto& [pt, w] : prior) {
    std::vector<Kinematic> xs;
    for (int s : pt.states) xs.push_back(space.states[s]);
    const double v = w * std::exp(ll(xs));
    out[pt] = v;
    total += v;
  }
  for (auto& [pt, w] : out) w /= total;
  return out;
}

std::map<LabelSet, double> label_set_weights(const Table& t) {
  std::map<LabelSet, double> out;
  for (const auto& [pt, w] : t) out[pt.labels] += w;
  return out;
}

std::map<Label, std::vector<double>> phd(const Table& t, std::size_t states) {
  std::map<Label, std::vector<double>> out;
  for (const auto& [pt, w] : t) {
    for (std::size_t k = 0; k < pt.labels.size(); ++k) {
      auto& v = out[pt.labels[k]];
      v.resize(states, 0.0);
      v[pt.states[k]] += w;
    }
  }
  return out;
}

Lmb collapse(const Table& t, std::size_t states) {
  Lmb out;
  for (const auto& [label, v] : phd(t, states)) {
    double r = 0.0;
    for (double m : v) r += m;
    if (r <= 0.0) continue;
    Bernoulli b{r, v};
    for (double& m : b.p) m /= r;
    out.emplace(label, std::move(b));
  }
  return out;
}

double kld(const Table& p, const Table& q) {
  double d = 0.0;
  for (const auto& [pt, w] : p) {
    if (w <= 0.0) continue;
    auto it = q.find(pt);
    if (it == q.end() || it->second <= 0.0) return INFINITY;
    d += w * std::log(w / it->second);
  }
  return d;
}

Table random_table(const LabelSet& labels, std::size_t states, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  Table out;
  double total = 0.0;
  const std::size_t n = labels.size();
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    Point base;
    for (std::size_t k = 0; k < n; ++k) {
      if (mask & (1u << k)) base.labels.push_back(labels[k]);
    }
    std::size_t tuples = 1;
    for (std::size_t k = 0; k < base.labels.size(); ++k) tuples *= states;
    for (std::size_t code = 0; code < tuples; ++code) {
      Point pt{base.labels, {}};
      std::size_t c = code;
      for (std::size_t k = 0; k < base.labels.size(); ++k) {
        pt.states.push_back(static_cast<int>(c % states));
        c /= states;
      }
      const double w = u(rng);
      out[pt] = w;
      total += w;
    }
  }
  for (auto& [pt, w] : out) w /= total;
  return out;
}

gomtrack::LmoDensity to_lmo(const Table& t, const Space& space) {
  gomtrack::LmoDensity lmo;
  const auto weights = label_set_weights(t);
  for (const auto& [labels, w] : weights) {
    lmo.hypotheses.emplace(labels, gomtrack::Hypothesis{w, gomtrack::JointParticleSet(labels)});
  }
  for (const auto& [pt, w] : t) {
    std::vector<Kinematic> xs;
    for (int s : pt.states) xs.push_back(space.states[s]);
    lmo.hypotheses.at(pt.labels).joint.add(w / weights.at(pt.labels), xs);
  }
  return lmo;
}

Space three_state_space(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.1, 1.0);
  Space s;
  s.states = {Kinematic(0.0, 0.0, 1.0, 0.0), Kinematic(1.0, 0.0, 1.0, 0.0), Kinematic(2.0, 0.5, 0.0, 0.0)};
  s.transition.resize(3, 3);
  for (int i = 0; i < 3; ++i) {
    double row = 0.0;
    for (int j = 0; j < 3; ++j) row += s.transition(i, j) = u(rng);
    s.transition.row(i) /= row;
  }
  std::uniform_real_distribution<double> ps(0.6, 0.99);
  s.survival = {ps(rng), ps(rng), ps(rng)};
  return s;
}

Lmb random_lmb(const LabelSet& labels, std::size_t states, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> r(0.2, 0.9);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  Lmb out;
  for (const auto& l : labels) {
    Bernoulli b{r(rng), std::vector<double>(states)};
    double total = 0.0;
    for (double& v : b.p) total += v = u(rng);
    for (double& v : b.p) v /= total;
    out.emplace(l, std::move(b));
  }
  return out;
}

gomtrack::DiscreteMotion motion_of(const Space& space) {
  return gomtrack::DiscreteMotion(space.states, space.transition, space.survival);
}

gomtrack::BirthModel birth_model_of(const std::vector<Birth>& births, const Space& space) {
  gomtrack::BirthModel model;
  for (const auto& b : births) {
    gomtrack::BirthComponent c;
    c.existence = b.existence;
    for (std::size_t s = 0; s < b.probabilities.size(); ++s) {
      if (b.probabilities[s] > 0.0) c.support.push_back({b.probabilities[s], space.states[s]});
    }
    model.components.push_back(std::move(c));
  }
  return model;
}

double ToyLikelihood::operator()(const std::vector<Kinematic>& xs) const {
  double v = empty;
  std::vector<int> idx;
  for (const auto& x : xs) idx.push_back(space->index_of(x));
  for (std::size_t i = 0; i < idx.size(); ++i) {
    v += single[idx[i]];
    for (std::size_t j = i + 1; j < idx.size(); ++j) v += pair(idx[i], idx[j]);
  }
  return v;
}

JointLogLikelihood ToyLikelihood::table() const {
  return [self = *this](const std::vector<Kinematic>& xs) { return self(xs); };
}

gomtrack::LogLikelihood ToyLikelihood::library() const {
  return [self = *this](std::span<const Kinematic> xs) {
    return self(std::vector<Kinematic>(xs.begin(), xs.end()));
  };
}

ToyLikelihood random_likelihood(const Space& space, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-2.0, 1.0);
  ToyLikelihood t;
  t.space = &space;
  const auto n = static_cast<Eigen::Index>(space.states.size());
  for (Eigen::Index i = 0; i < n; ++i) t.single.push_back(u(rng));
  t.pair.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) t.pair(i, j) = t.pair(j, i) = u(rng);
  }
  t.empty = u(rng);
  return t;
}

}  // namespace oracle
