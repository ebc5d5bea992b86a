#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace stlplan {

using Vec = std::vector<double>;

double dot(const Vec &a, const Vec &b);
double norm2(const Vec &a);
double norm1(const Vec &a);

/// Convex polytope in half-space form: { x | H x <= b }.
/// Row norms are cached so that margins can be scaled by ||H^(j)||_2
/// without renormalizing the input rows.
class Polytope {
public:
  Polytope(std::vector<Vec> H, Vec b);

  /// Axis-aligned box [lo, hi], stored as 2*d half-spaces [I; -I].
  static Polytope box(const Vec &lo, const Vec &hi);

  std::size_t num_faces() const { return H_.size(); }
  std::size_t dim() const { return H_.empty() ? 0 : H_[0].size(); }

  const std::vector<Vec> &H() const { return H_; }
  const Vec &b() const { return b_; }
  const Vec &row_norms() const { return row_norms_; }

  /// True iff b^(j) - H^(j) x - margin * ||H^(j)|| >= 0 for every face j,
  /// i.e. x lies in the polytope shrunk inward by `margin`.
  bool contains(const Vec &x, double margin = 0.0) const;

  /// True iff H^(j) x - b^(j) - margin * ||H^(j)|| >= 0 for some face j.
  /// Certifies that the whole margin-ball around x is outside the polytope;
  /// stronger than !contains(x).
  bool excluded(const Vec &x, double margin = 0.0) const;

  /// Maximal closed sub-interval of [0,1] on which the point
  /// p1 + lambda*(p2-p1) lies in the polytope shrunk by `margin`.
  /// Negative margins bloat the polytope instead. Returns nullopt when
  /// no part of the segment qualifies.
  std::optional<std::pair<double, double>>
  segment_inside_interval(const Vec &p1, const Vec &p2, double margin) const;

private:
  std::vector<Vec> H_;
  Vec b_;
  Vec row_norms_;
};

/// Bounding box of all reachable positions. Feeds big-M derivation.
struct Workspace {
  std::size_t dim;
  Vec lo;
  Vec hi;

  Workspace(std::size_t d, Vec lo_, Vec hi_);
};

} // namespace stlplan
