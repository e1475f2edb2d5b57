#pragma once

// Test-only brute-force oracles, kept independent of the library's predicate
// route: intersections are found by solving the 2x2 parametric system
// directly instead of orientation sign tests.

#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "pathbench/common.hpp"
#include "pathbench/rng.hpp"

namespace oracle {

using pathbench::Point2;
using pathbench::Polyline;

struct BruteCrossing {
  int seg_a, seg_b;
  Point2 point;
};

inline std::optional<Point2> solve_proper(Point2 p1, Point2 p2, Point2 q1, Point2 q2) {
  Point2 d1 = p2 - p1, d2 = q2 - q1;
  double det = pathbench::cross(d1, d2);
  if (std::fabs(det) <= 1e-9) return std::nullopt;
  double t = pathbench::cross(q1 - p1, d2) / det;
  double u = pathbench::cross(q1 - p1, d1) / det;
  if (t <= 0.0 || t >= 1.0 || u <= 0.0 || u >= 1.0) return std::nullopt;
  return p1 + d1 * t;
}

inline std::vector<BruteCrossing> brute_crossings(const Polyline& p) {
  std::vector<BruteCrossing> out;
  int nseg = static_cast<int>(p.size()) - 1;
  for (int i = 0; i < nseg; ++i)
    for (int j = i + 2; j < nseg; ++j)
      if (auto pt = solve_proper(p[i], p[i + 1], p[j], p[j + 1]))
        out.push_back({i, j, *pt});
  return out;
}

// Random polyline drawn away from predicate degeneracy: any near-zero
// orientation between a segment pair forces a resample.
inline Polyline random_polyline(pathbench::Rng& rng, int max_n = 20) {
  auto orientation = [](Point2 a, Point2 b, Point2 c) {
    return pathbench::cross(b - a, c - a);
  };
  for (;;) {
    int n = static_cast<int>(rng.uniform_int(2, max_n));
    Polyline p;
    for (int i = 0; i < n; ++i) p.push_back({rng.uniform(0.0, 100.0), rng.uniform(0.0, 100.0)});
    bool ok = true;
    for (size_t i = 1; i < p.size() && ok; ++i)
      if (pathbench::dist(p[i - 1], p[i]) < 1e-3) ok = false;
    int nseg = n - 1;
    for (int i = 0; i < nseg && ok; ++i)
      for (int j = i + 2; j < nseg && ok; ++j)
        for (double o : {orientation(p[i], p[i + 1], p[j]), orientation(p[i], p[i + 1], p[j + 1]),
                         orientation(p[j], p[j + 1], p[i]), orientation(p[j], p[j + 1], p[i + 1])})
          if (std::fabs(o) < 1e-5) ok = false;
    if (ok) return p;
  }
}

}  // namespace oracle
