#pragma once

#include <algorithm>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "stlplan/monitor.hpp"
#include "stlplan/path.hpp"
#include "stlplan/spec.hpp"

namespace stlplan::testing {

using Rng = std::mt19937_64;

inline double uniform(Rng &rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int uniform_int(Rng &rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

/// Random axis-aligned box inside [lo, hi]^d with edges >= min_edge.
inline Polytope random_box(Rng &rng, int d, double lo, double hi,
                           double min_edge = 0.5) {
  Vec blo(d), bhi(d);
  for (int i = 0; i < d; ++i) {
    double a = uniform(rng, lo, hi - min_edge);
    double b = uniform(rng, a + min_edge, hi);
    blo[i] = a;
    bhi[i] = b;
  }
  return Polytope::box(blo, bhi);
}

/// Random PWL path with `segs` segments in [lo, hi]^d over [0, horizon].
inline PwlPath random_path(Rng &rng, int d, int segs, double lo, double hi,
                           double horizon) {
  PwlPath p;
  Vec times{0.0};
  for (int k = 0; k < segs; ++k)
    times.push_back(uniform(rng, 0.0, horizon));
  std::sort(times.begin(), times.end());
  p.t = times;
  for (int k = 0; k <= segs; ++k) {
    Vec pt(d);
    for (int i = 0; i < d; ++i)
      pt[i] = uniform(rng, lo, hi);
    p.p.push_back(std::move(pt));
  }
  return p;
}

/// Random NNF formula over the named regions, depth-bounded.
inline StlPtr random_formula(Rng &rng, const std::vector<std::string> &regions,
                             int depth, double horizon) {
  if (depth <= 0 || uniform_int(rng, 0, 4) == 0) {
    const std::string &r = regions[uniform_int(rng, 0, regions.size() - 1)];
    return uniform_int(rng, 0, 1) ? stl_atom(r) : stl_neg_atom(r);
  }
  double a = uniform(rng, 0.0, horizon / 2);
  double b = uniform(rng, a, horizon);
  switch (uniform_int(rng, 0, 5)) {
  case 0:
    return stl_and({random_formula(rng, regions, depth - 1, horizon),
                    random_formula(rng, regions, depth - 1, horizon)});
  case 1:
    return stl_or({random_formula(rng, regions, depth - 1, horizon),
                   random_formula(rng, regions, depth - 1, horizon)});
  case 2:
    return stl_always(a, b, random_formula(rng, regions, depth - 1, horizon));
  case 3:
    return stl_eventually(a, b, random_formula(rng, regions, depth - 1, horizon));
  case 4:
    return stl_until(a, b, random_formula(rng, regions, depth - 1, horizon),
                     random_formula(rng, regions, depth - 1, horizon));
  default:
    return stl_release(a, b, random_formula(rng, regions, depth - 1, horizon),
                       random_formula(rng, regions, depth - 1, horizon));
  }
}

/// Dense-sampling STL evaluator used only as a cross-check of the interval
/// monitor. Recursive, pointwise, on a fixed time grid.
class SampledMonitor {
public:
  SampledMonitor(const PwlPath &path, const RegionTable &regions, double eps,
                 double domain_end, double dt)
      : path_(path), regions_(regions), eps_(eps), end_(domain_end), dt_(dt) {}

  bool holds(const StlPtr &phi, double t) const {
    // sat sets are clipped to [0, end]; beyond that nothing holds
    if (t > end_ + 1e-12)
      return false;
    switch (phi->kind) {
    case StlKind::Atom:
      return regions_.at(phi->region).contains(path_.sample(t), eps_);
    case StlKind::NegAtom:
      return !regions_.at(phi->region).contains(path_.sample(t), -eps_);
    case StlKind::And:
      for (const auto &c : phi->children)
        if (!holds(c, t))
          return false;
      return true;
    case StlKind::Or:
      for (const auto &c : phi->children)
        if (holds(c, t))
          return true;
      return false;
    case StlKind::Always: {
      for (double u = t + phi->a; u <= t + phi->b + 1e-12; u += dt_)
        if (!holds(phi->children[0], u))
          return false;
      return true;
    }
    case StlKind::Eventually: {
      for (double u = t + phi->a; u <= t + phi->b + 1e-12; u += dt_)
        if (holds(phi->children[0], u))
          return true;
      return false;
    }
    case StlKind::Until: {
      for (double u = t + phi->a; u <= t + phi->b + 1e-12; u += dt_) {
        if (holds(phi->children[1], u)) {
          bool all = true;
          for (double v = t; v <= u + 1e-12 && all; v += dt_)
            all = holds(phi->children[0], v);
          if (all)
            return true;
        }
      }
      return false;
    }
    case StlKind::Release: {
      for (double u = t + phi->a; u <= t + phi->b + 1e-12; u += dt_) {
        if (!holds(phi->children[1], u)) {
          bool released = false;
          for (double v = t; v <= u + 1e-12 && !released; v += dt_)
            released = holds(phi->children[0], v);
          if (!released)
            return false;
        }
      }
      return true;
    }
    case StlKind::Not:
      break;
    }
    throw std::logic_error("SampledMonitor: formula must be in NNF");
  }

private:
  const PwlPath &path_;
  const RegionTable &regions_;
  double eps_, end_, dt_;
};

} // namespace stlplan::testing
