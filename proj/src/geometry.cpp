#include "stlplan/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace stlplan {

double dot(const Vec &a, const Vec &b) {
  if (a.size() != b.size())
    throw std::invalid_argument("dot: dimension mismatch");
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    s += a[i] * b[i];
  return s;
}

double norm2(const Vec &a) { return std::sqrt(dot(a, a)); }

double norm1(const Vec &a) {
  double s = 0;
  for (double v : a)
    s += std::fabs(v);
  return s;
}

Polytope::Polytope(std::vector<Vec> H, Vec b) : H_(std::move(H)), b_(std::move(b)) {
  if (H_.empty())
    throw std::invalid_argument("Polytope: need at least one face");
  if (H_.size() != b_.size())
    throw std::invalid_argument("Polytope: H and b row counts differ");
  const std::size_t d = H_[0].size();
  if (d == 0)
    throw std::invalid_argument("Polytope: zero-dimensional rows");
  row_norms_.reserve(H_.size());
  for (const Vec &row : H_) {
    if (row.size() != d)
      throw std::invalid_argument("Polytope: ragged H rows");
    double n = norm2(row);
    if (n <= 0)
      throw std::invalid_argument("Polytope: zero row in H");
    row_norms_.push_back(n);
  }
}

Polytope Polytope::box(const Vec &lo, const Vec &hi) {
  if (lo.size() != hi.size() || lo.empty())
    throw std::invalid_argument("box: bad corner dimensions");
  const std::size_t d = lo.size();
  for (std::size_t i = 0; i < d; ++i)
    if (!(lo[i] < hi[i]))
      throw std::invalid_argument("box: degenerate (lo >= hi on axis " +
                                  std::to_string(i) + ")");
  std::vector<Vec> H(2 * d, Vec(d, 0.0));
  Vec b(2 * d);
  for (std::size_t i = 0; i < d; ++i) {
    H[i][i] = 1.0;
    b[i] = hi[i];
    H[d + i][i] = -1.0;
    b[d + i] = -lo[i];
  }
  return Polytope(std::move(H), std::move(b));
}

bool Polytope::contains(const Vec &x, double margin) const {
  if (x.size() != dim())
    throw std::invalid_argument("contains: dimension mismatch");
  for (std::size_t j = 0; j < H_.size(); ++j)
    if (b_[j] - dot(H_[j], x) - margin * row_norms_[j] < 0)
      return false;
  return true;
}

bool Polytope::excluded(const Vec &x, double margin) const {
  if (x.size() != dim())
    throw std::invalid_argument("excluded: dimension mismatch");
  for (std::size_t j = 0; j < H_.size(); ++j)
    if (dot(H_[j], x) - b_[j] - margin * row_norms_[j] >= 0)
      return true;
  return false;
}

std::optional<std::pair<double, double>>
Polytope::segment_inside_interval(const Vec &p1, const Vec &p2, double margin) const {
  if (p1.size() != dim() || p2.size() != dim())
    throw std::invalid_argument("segment_inside_interval: dimension mismatch");
  double lo = 0.0, hi = 1.0;
  Vec delta(dim());
  for (std::size_t i = 0; i < dim(); ++i)
    delta[i] = p2[i] - p1[i];
  for (std::size_t j = 0; j < H_.size(); ++j) {
    // b_j - margin*||H_j|| - H_j.(p1 + lambda*delta) >= 0
    // <=> alpha + beta*lambda >= 0
    const double alpha = b_[j] - margin * row_norms_[j] - dot(H_[j], p1);
    const double beta = -dot(H_[j], delta);
    const double tiny = 1e-12;
    if (std::fabs(beta) <= tiny) {
      if (alpha < 0)
        return std::nullopt;
    } else if (beta > 0) {
      lo = std::max(lo, -alpha / beta);
    } else {
      hi = std::min(hi, -alpha / beta);
    }
    if (lo > hi)
      return std::nullopt;
  }
  return std::make_pair(lo, hi);
}

Workspace::Workspace(std::size_t d, Vec lo_, Vec hi_)
    : dim(d), lo(std::move(lo_)), hi(std::move(hi_)) {
  if (lo.size() != dim || hi.size() != dim || dim == 0)
    throw std::invalid_argument("Workspace: bad bounds dimensions");
  for (std::size_t i = 0; i < dim; ++i)
    if (!(lo[i] < hi[i]))
      throw std::invalid_argument("Workspace: lo >= hi on axis " + std::to_string(i));
}

} // namespace stlplan
