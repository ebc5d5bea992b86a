#include "stlplan/path.hpp"

#include <stdexcept>

namespace stlplan {

Vec PwlPath::sample(double time) const {
  if (t.empty())
    throw std::logic_error("PwlPath::sample: empty path");
  if (time <= t.front())
    return p.front();
  if (time >= t.back())
    return p.back();
  for (std::size_t k = 0; k + 1 < t.size(); ++k) {
    if (time <= t[k + 1]) {
      double dur = t[k + 1] - t[k];
      if (dur <= 0)
        return p[k + 1];
      double lambda = (time - t[k]) / dur;
      Vec out(p[k].size());
      for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = p[k][i] + lambda * (p[k + 1][i] - p[k][i]);
      return out;
    }
  }
  return p.back();
}

void PwlPath::validate() const {
  if (t.empty() || t.size() != p.size())
    throw std::invalid_argument("PwlPath: waypoint counts mismatch");
  if (t.front() != 0)
    throw std::invalid_argument("PwlPath: t_0 must be 0");
  for (std::size_t k = 0; k + 1 < t.size(); ++k)
    if (t[k + 1] < t[k])
      throw std::invalid_argument("PwlPath: timestamps must be non-decreasing");
  const std::size_t d = p.front().size();
  for (const Vec &pt : p)
    if (pt.size() != d)
      throw std::invalid_argument("PwlPath: inconsistent waypoint dimensions");
}

} // namespace stlplan
