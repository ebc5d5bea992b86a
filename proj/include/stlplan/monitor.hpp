#pragma once

#include <map>
#include <string>
#include <vector>

#include "stlplan/path.hpp"
#include "stlplan/spec.hpp"

namespace stlplan {

/// Sorted, disjoint, closed intervals within one time domain. Touching
/// intervals are merged, so single-point gaps and single-point components
/// both normalize away.
class IntervalSet {
public:
  struct Interval {
    double lo, hi;
  };

  IntervalSet() = default;
  explicit IntervalSet(std::vector<Interval> raw); // normalizes

  static IntervalSet all(double lo, double hi);

  const std::vector<Interval> &intervals() const { return iv_; }
  bool empty() const { return iv_.empty(); }
  bool contains(double t) const;
  double measure() const;

  IntervalSet unite(const IntervalSet &other) const;
  IntervalSet intersect(const IntervalSet &other) const;
  IntervalSet complement(double lo, double hi) const;
  IntervalSet clip(double lo, double hi) const;

  /// {t : [t+a, t+b] intersects this set}  (eventually)
  IntervalSet dilate(double a, double b) const;
  /// {t : [t+a, t+b] subset of this set}  (always)
  IntervalSet erode(double a, double b) const;

private:
  std::vector<Interval> iv_;
};

/// Satisfaction set of phi over the concrete PWL path with predicates
/// epsilon-adjusted: Atom uses the polytope shrunk by eps; NegAtom uses the
/// complement of the polytope bloated by eps. The path holds its last
/// position up to the domain end max(domain_end, t_K).
IntervalSet sat_set(const StlPtr &phi, const PwlPath &path,
                    const RegionTable &regions, double eps, double domain_end);

struct AtomReport {
  int agent;
  std::string formula;
  bool satisfied;
};

struct CheckReport {
  bool satisfied;
  std::vector<AtomReport> per_atom;
};

/// MA-STL satisfaction at t=0 over concrete paths, one tracking error per
/// agent (map is 1-based by agent index).
CheckReport check(const MaPtr &spec, const std::vector<PwlPath> &paths,
                  const RegionTable &regions,
                  const std::vector<double> &eps_per_agent, double domain_end);

struct ClearanceResult {
  double time;
  double distance; // Euclidean
};

/// Exact minimum inter-agent distance: per common time slice the squared
/// distance is quadratic in t, minimized in closed form.
ClearanceResult min_pairwise_distance(const PwlPath &a, const PwlPath &b);

} // namespace stlplan
