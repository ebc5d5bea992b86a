#pragma once

#include <vector>

#include "stlplan/geometry.hpp"

namespace stlplan {

/// Timed piecewise-linear path: waypoints (t_k, p_k), k = 0..K.
/// Beyond t_K the agent holds its last position.
struct PwlPath {
  std::vector<double> t;
  std::vector<Vec> p;

  std::size_t segments() const { return t.empty() ? 0 : t.size() - 1; }
  double end_time() const { return t.back(); }

  /// Position at time `time` (clamped to [t_0, hold-last]).
  Vec sample(double time) const;

  /// Throws unless t_0 = 0, timestamps are non-decreasing and sizes match.
  void validate() const;
};

} // namespace stlplan
