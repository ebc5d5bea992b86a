#include "stlplan/monitor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace stlplan {

IntervalSet::IntervalSet(std::vector<Interval> raw) {
  raw.erase(std::remove_if(raw.begin(), raw.end(),
                           [](const Interval &iv) { return iv.lo > iv.hi; }),
            raw.end());
  std::sort(raw.begin(), raw.end(),
            [](const Interval &a, const Interval &b) { return a.lo < b.lo; });
  // merge touching intervals, absorbing solver-level float noise in the gap
  constexpr double kMergeTol = 1e-9;
  for (const Interval &iv : raw) {
    if (!iv_.empty() && iv.lo <= iv_.back().hi + kMergeTol) {
      iv_.back().hi = std::max(iv_.back().hi, iv.hi);
    } else {
      iv_.push_back(iv);
    }
  }
}

IntervalSet IntervalSet::all(double lo, double hi) {
  return IntervalSet({{lo, hi}});
}

bool IntervalSet::contains(double t) const {
  for (const Interval &iv : iv_) {
    if (t < iv.lo)
      return false;
    if (t <= iv.hi)
      return true;
  }
  return false;
}

double IntervalSet::measure() const {
  double s = 0;
  for (const Interval &iv : iv_)
    s += iv.hi - iv.lo;
  return s;
}

IntervalSet IntervalSet::unite(const IntervalSet &other) const {
  std::vector<Interval> raw = iv_;
  raw.insert(raw.end(), other.iv_.begin(), other.iv_.end());
  return IntervalSet(std::move(raw));
}

IntervalSet IntervalSet::intersect(const IntervalSet &other) const {
  std::vector<Interval> raw;
  std::size_t i = 0, j = 0;
  while (i < iv_.size() && j < other.iv_.size()) {
    double lo = std::max(iv_[i].lo, other.iv_[j].lo);
    double hi = std::min(iv_[i].hi, other.iv_[j].hi);
    if (lo <= hi)
      raw.push_back({lo, hi});
    if (iv_[i].hi < other.iv_[j].hi)
      ++i;
    else
      ++j;
  }
  return IntervalSet(std::move(raw));
}

IntervalSet IntervalSet::complement(double lo, double hi) const {
  // The true complement is open at the shared endpoints; back off by a hair
  // so that intersecting a set with its complement is empty rather than a
  // scatter of degenerate points (which until/release would treat as
  // witnesses).
  constexpr double kEdge = 1e-9;
  std::vector<Interval> raw;
  double cursor = lo;
  for (const Interval &iv : iv_) {
    if (iv.hi < lo || iv.lo > hi)
      continue;
    if (iv.lo > cursor)
      raw.push_back({cursor, iv.lo - (iv.lo > lo ? kEdge : 0.0)});
    cursor = std::max(cursor, iv.hi + kEdge);
  }
  if (cursor < hi)
    raw.push_back({cursor, hi});
  return IntervalSet(std::move(raw));
}

IntervalSet IntervalSet::clip(double lo, double hi) const {
  std::vector<Interval> raw;
  for (const Interval &iv : iv_)
    raw.push_back({std::max(iv.lo, lo), std::min(iv.hi, hi)});
  return IntervalSet(std::move(raw));
}

IntervalSet IntervalSet::dilate(double a, double b) const {
  std::vector<Interval> raw;
  for (const Interval &iv : iv_)
    raw.push_back({iv.lo - b, iv.hi - a});
  return IntervalSet(std::move(raw));
}

IntervalSet IntervalSet::erode(double a, double b) const {
  std::vector<Interval> raw;
  for (const Interval &iv : iv_)
    raw.push_back({iv.lo - a, iv.hi - b});
  return IntervalSet(std::move(raw));
}

namespace {

// Extended waypoints: the given path plus a hold-last segment to domain_end.
std::vector<std::pair<double, const Vec *>> extended_waypoints(const PwlPath &path,
                                                               double domain_end) {
  std::vector<std::pair<double, const Vec *>> w;
  for (std::size_t k = 0; k < path.t.size(); ++k)
    w.emplace_back(path.t[k], &path.p[k]);
  if (domain_end > path.t.back())
    w.emplace_back(domain_end, &path.p.back());
  return w;
}

// Time set on which the path lies inside the polytope shrunk by `margin`
// (bloated, for negative margins). Exact: along a line, membership in a
// convex polytope is an interval.
IntervalSet inside_set(const Polytope &poly, const PwlPath &path, double margin,
                       double domain_end) {
  auto w = extended_waypoints(path, domain_end);
  std::vector<IntervalSet::Interval> raw;
  for (std::size_t k = 0; k + 1 < w.size(); ++k) {
    double t0 = w[k].first, t1 = w[k + 1].first;
    const Vec &p0 = *w[k].second, &p1 = *w[k + 1].second;
    auto lam = poly.segment_inside_interval(p0, p1, margin);
    if (!lam)
      continue;
    if (t1 <= t0) {
      // zero-duration segment: count the instant only when fully inside
      if (lam->first <= 0 && lam->second >= 1)
        raw.push_back({t0, t0});
      continue;
    }
    raw.push_back({t0 + lam->first * (t1 - t0), t0 + lam->second * (t1 - t0)});
  }
  return IntervalSet(std::move(raw));
}

const Polytope &resolve_region(const RegionTable &regions, const std::string &name) {
  auto it = regions.find(name);
  if (it == regions.end())
    throw std::invalid_argument("monitor: unresolved region '" + name + "'");
  return it->second;
}

// Predicate margins back off by this much so boundary-tight solver output
// (feasible only up to float noise) still verifies. Capped at eps so a
// region and its negation stay disjoint: otherwise their hairline overlap
// around the boundary would act as a spurious release/until witness.
constexpr double kGeomTol = 1e-9;

IntervalSet sat_rec(const StlPtr &phi, const PwlPath &path, const RegionTable &regions,
                    double eps, double lo, double hi) {
  const double slack = std::min(kGeomTol, std::max(eps, 0.0));
  switch (phi->kind) {
  case StlKind::Atom:
    return inside_set(resolve_region(regions, phi->region), path, eps - slack, hi)
        .clip(lo, hi);
  case StlKind::NegAtom:
    // complement of the eps-bloated polytope (closed approximation)
    return inside_set(resolve_region(regions, phi->region), path, slack - eps, hi)
        .complement(lo, hi);
  case StlKind::Not:
    throw std::invalid_argument("monitor: formula must be in NNF");
  case StlKind::And: {
    IntervalSet s = IntervalSet::all(lo, hi);
    for (const auto &c : phi->children)
      s = s.intersect(sat_rec(c, path, regions, eps, lo, hi));
    return s;
  }
  case StlKind::Or: {
    IntervalSet s;
    for (const auto &c : phi->children)
      s = s.unite(sat_rec(c, path, regions, eps, lo, hi));
    return s;
  }
  case StlKind::Eventually:
    return sat_rec(phi->children[0], path, regions, eps, lo, hi)
        .dilate(phi->a, phi->b)
        .clip(lo, hi);
  case StlKind::Always:
    return sat_rec(phi->children[0], path, regions, eps, lo, hi)
        .erode(phi->a, phi->b)
        .clip(lo, hi);
  case StlKind::Until: {
    IntervalSet s1 = sat_rec(phi->children[0], path, regions, eps, lo, hi);
    IntervalSet s2 = sat_rec(phi->children[1], path, regions, eps, lo, hi);
    // t satisfies iff some t' in [t+a, t+b] lies in S2 and [t, t'] stays in
    // one maximal interval of S1
    std::vector<IntervalSet::Interval> raw;
    for (const auto &i1 : s1.intervals()) {
      for (const auto &i2 : s2.intervals()) {
        double jlo = std::max(i1.lo, i2.lo);
        double jhi = std::min(i1.hi, i2.hi);
        if (jlo > jhi)
          continue;
        raw.push_back({std::max(i1.lo, jlo - phi->b), std::min(i1.hi, jhi - phi->a)});
      }
    }
    return IntervalSet(std::move(raw)).clip(lo, hi);
  }
  case StlKind::Release: {
    IntervalSet s1 = sat_rec(phi->children[0], path, regions, eps, lo, hi);
    IntervalSet s2 = sat_rec(phi->children[1], path, regions, eps, lo, hi);
    // Inside S1 the witness t'' = t works for every t'. In a gap of S1 with
    // next S1 point at c, the window part before c must sit inside S2.
    std::vector<IntervalSet::Interval> raw;
    for (const auto &iv : s1.intervals())
      raw.push_back(iv);
    std::vector<IntervalSet::Interval> gaps; // S1-free stretches of [lo,hi]
    std::vector<double> next_start;          // next S1 point after each gap
    double cursor = lo;
    for (const auto &iv : s1.intervals()) {
      if (iv.lo >= cursor) {
        gaps.push_back({cursor, iv.lo});
        next_start.push_back(iv.lo);
      }
      cursor = std::max(cursor, iv.hi);
    }
    if (cursor <= hi) {
      gaps.push_back({cursor, hi});
      next_start.push_back(std::numeric_limits<double>::infinity());
    }
    for (std::size_t g = 0; g < gaps.size(); ++g) {
      const double gl = gaps[g].lo, gh = gaps[g].hi;
      const double c = next_start[g];
      if (gl > gh)
        continue;
      if (std::isfinite(c)) {
        // whole window at or past the next S1 point
        double t_lo = c - phi->a;
        if (t_lo <= gh)
          raw.push_back({std::max(gl, t_lo), gh});
      }
      for (const auto &i2 : s2.intervals()) {
        // need e <= t+a and min(t+b, c) <= f; a hairline gap between the
        // S2 cover and the next S1 point (complement backs off its
        // endpoints) must not count as uncovered
        double t_lo = i2.lo - phi->a;
        double t_hi = c <= i2.hi + 2e-9 ? gh : i2.hi - phi->b;
        double s = std::max(gl, t_lo);
        double e = std::min(gh, t_hi);
        if (s <= e)
          raw.push_back({s, e});
      }
    }
    return IntervalSet(std::move(raw)).clip(lo, hi);
  }
  }
  throw std::logic_error("monitor: unknown node kind");
}

} // namespace

IntervalSet sat_set(const StlPtr &phi, const PwlPath &path,
                    const RegionTable &regions, double eps, double domain_end) {
  path.validate();
  double hi = std::max(domain_end, path.t.back());
  return sat_rec(phi, path, regions, eps, 0.0, hi);
}

namespace {

bool check_rec(const MaPtr &node, const std::vector<PwlPath> &paths,
               const RegionTable &regions, const std::vector<double> &eps,
               double domain_end, std::vector<AtomReport> &reports) {
  switch (node->kind) {
  case MaKind::AgentAtom: {
    int idx = node->agent - 1;
    if (idx < 0 || idx >= static_cast<int>(paths.size()))
      throw std::invalid_argument("check: missing path for agent " +
                                  std::to_string(node->agent));
    double e = idx < static_cast<int>(eps.size()) ? eps[idx] : 0.0;
    bool sat = sat_set(node->phi, paths[idx], regions, e, domain_end).contains(0.0);
    reports.push_back({node->agent, to_string(node->phi), sat});
    return sat;
  }
  case MaKind::And: {
    bool ok = true; // evaluate all children so the report stays complete
    for (const auto &c : node->children)
      ok = check_rec(c, paths, regions, eps, domain_end, reports) && ok;
    return ok;
  }
  case MaKind::Or: {
    bool ok = false;
    for (const auto &c : node->children)
      ok = check_rec(c, paths, regions, eps, domain_end, reports) || ok;
    return ok;
  }
  }
  throw std::logic_error("check: unknown node kind");
}

} // namespace

CheckReport check(const MaPtr &spec, const std::vector<PwlPath> &paths,
                  const RegionTable &regions,
                  const std::vector<double> &eps_per_agent, double domain_end) {
  CheckReport report;
  report.satisfied =
      check_rec(spec, paths, regions, eps_per_agent, domain_end, report.per_atom);
  return report;
}

ClearanceResult min_pairwise_distance(const PwlPath &a, const PwlPath &b) {
  a.validate();
  b.validate();
  double horizon = std::max(a.end_time(), b.end_time());
  std::vector<double> cuts;
  cuts.insert(cuts.end(), a.t.begin(), a.t.end());
  cuts.insert(cuts.end(), b.t.begin(), b.t.end());
  cuts.push_back(horizon);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  ClearanceResult best{0.0, std::numeric_limits<double>::infinity()};
  auto consider = [&](double t, double dist) {
    if (dist < best.distance) {
      best.distance = dist;
      best.time = t;
    }
  };
  auto diff = [&](double t) {
    Vec pa = a.sample(t), pb = b.sample(t);
    Vec d(pa.size());
    for (std::size_t i = 0; i < d.size(); ++i)
      d[i] = pa[i] - pb[i];
    return d;
  };
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    double u = cuts[k], v = cuts[k + 1];
    Vec du = diff(u), dv = diff(v);
    Vec dd(du.size());
    for (std::size_t i = 0; i < dd.size(); ++i)
      dd[i] = dv[i] - du[i];
    double qa = dot(dd, dd);
    double qb = 2 * dot(du, dd);
    consider(u, norm2(du));
    consider(v, norm2(dv));
    if (qa > 0) {
      double s = std::clamp(-qb / (2 * qa), 0.0, 1.0);
      Vec dm(du.size());
      for (std::size_t i = 0; i < dm.size(); ++i)
        dm[i] = du[i] + s * dd[i];
      consider(u + s * (v - u), norm2(dm));
    }
  }
  if (cuts.size() == 1)
    consider(cuts[0], norm2(diff(cuts[0])));
  return best;
}

} // namespace stlplan
