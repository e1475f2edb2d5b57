#include <algorithm>
#include <cmath>
#include <numeric>

#include "pathbench/generator.hpp"
#include "pathbench/rng.hpp"

// Family-specific backbone constructions. Each builds in roughly view-sized
// coordinates; accept() refits and re-measures, so constructions only need
// relative clearances with a safety factor over the glyph spacing S.

namespace pathbench {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct SBounds {
  int lo, hi;
};

SBounds sbin_range(int sbin) {
  const auto& e = BinThresholds::intersection_edges;
  return {e[static_cast<size_t>(sbin)], e[static_cast<size_t>(sbin) + 1] - 1};
}

double tbin_mid(int tbin) {
  static constexpr std::array<double, 6> mids = {1.15, 1.60, 2.45, 3.70, 5.40, 7.60};
  return mids[static_cast<size_t>(tbin)];
}

Polyline rotated(const Polyline& p, double angle, Point2 center) {
  double c = std::cos(angle), s = std::sin(angle);
  Polyline out;
  out.reserve(p.size());
  for (auto v : p) {
    Point2 d = v - center;
    out.push_back({center.x + d.x * c - d.y * s, center.y + d.x * s + d.y * c});
  }
  return out;
}

Point2 centroid(const Polyline& p) {
  Point2 c{0, 0};
  for (auto v : p) c = c + v;
  return c * (1.0 / static_cast<double>(p.size()));
}

int crossing_count(const Polyline& p) {
  return static_cast<int>(self_intersections(p).size());
}

// Splits the longest segments with near-collinear insertions until the path
// has n vertices. Keeps the crossing count intact (verified).
Polyline pad_to_count(Polyline p, int n, Rng& rng, double min_len) {
  int base_crossings = crossing_count(p);
  int guard = 0;
  while (static_cast<int>(p.size()) < n) {
    if (++guard > 200) throw Error(ErrorKind::ConstructionFailed, "padding stalled");
    size_t best = 0;
    double best_len = 0.0;
    for (size_t i = 0; i + 1 < p.size(); ++i) {
      double len = dist(p[i], p[i + 1]);
      if (len > best_len) {
        best_len = len;
        best = i;
      }
    }
    if (best_len < 2.15 * min_len)
      throw Error(ErrorKind::ConstructionFailed, "no splittable segment while padding");
    Point2 a = p[best], b = p[best + 1];
    Point2 d = b - a;
    Point2 perp{-d.y / best_len, d.x / best_len};
    bool placed = false;
    for (int attempt = 0; attempt < 6 && !placed; ++attempt) {
      double t = rng.uniform(0.42, 0.58);
      double j = rng.uniform(-5.0, 5.0) / (1 << attempt);
      Polyline trial = p;
      trial.insert(trial.begin() + static_cast<long>(best) + 1, a + d * t + perp * j);
      try {
        if (crossing_count(trial) == base_crossings) {
          p = std::move(trial);
          placed = true;
        }
      } catch (const Error&) {
      }
    }
    if (!placed) throw Error(ErrorKind::ConstructionFailed, "padding changed crossings");
  }
  return p;
}

// ---------------------------------------------------------------------------
// bowtie: a chain of cursive loops on a baseline, one crossing per loop,
// with straight tails along the chord to dial tortuosity down.

constexpr std::array<Point2, 4> kLoop = {{{0.0, 0.0}, {3.0, 0.9}, {1.8, 2.2}, {1.35, -0.55}}};
constexpr double kLoopGap = 2.8;  // exit-to-next-entry advance

// tortuosity bin of a bare k-loop chain, no tails
int bowtie_base_tbin(int k) { return k == 1 ? 4 : (k == 2 ? 3 : 2); }

bool bowtie_k_fits(const CellTarget& cell, int k) {
  if (cell.n_points >= 4 * k + 2) return true;
  return cell.n_points >= 4 * k + 1 && cell.tbin == bowtie_base_tbin(k);
}

Polyline build_bowtie(const CellTarget& cell, uint64_t seed, const GeometryConfig& g) {
  SBounds sb = sbin_range(cell.sbin);
  Rng rng(seed);
  std::vector<int> ks;
  for (int k = std::max(1, sb.lo); k <= std::min(3, sb.hi); ++k)
    if (bowtie_k_fits(cell, k)) ks.push_back(k);
  if (ks.empty()) throw Error(ErrorKind::FamilyInapplicable, "bowtie: no loop count fits cell");
  int k = rng.pick(ks);

  Polyline p;
  Point2 origin{0, 0};
  for (int i = 0; i < k; ++i) {
    for (auto v : kLoop) p.push_back(origin + v);
    origin = origin + Point2{kLoop[3].x + kLoopGap * rng.uniform(0.95, 1.1), 0.0};
  }
  double arc0 = arc_length(p);
  Point2 start = p.front(), end = p.back();
  double chord0 = dist(start, end);
  double t_base = arc0 / chord0;
  double t_mid = tbin_mid(cell.tbin);
  const auto& edges = BinThresholds::tortuosity_edges;
  double total_tail = 0.0;
  if (t_base >= edges[static_cast<size_t>(cell.tbin) + 1]) {
    total_tail = (arc0 - t_mid * chord0) / (t_mid - 1.0);
    // keep the fitted spacing above S: the loop template's tightest pair is
    // ~1.42 units, so the unit size after fitting must stay over ~S/1.42
    double span = kLoop[1].x + (k - 1) * (kLoop[3].x + kLoopGap) + 0.2;
    double view_units = (g.view_px - 2.0 * g.margin_px) * 1.42 / (1.08 * g.spacing());
    double budget = std::max(0.0, std::sqrt(2.0) * view_units - span - 1.0);
    if (total_tail > budget)
      throw Error(ErrorKind::ConstructionFailed, "bowtie: tail budget exceeded");
    if (cell.n_points < 4 * k + 2)
      throw Error(ErrorKind::ConstructionFailed, "bowtie: no room for tail vertices");
  } else if (t_base < edges[static_cast<size_t>(cell.tbin)]) {
    throw Error(ErrorKind::ConstructionFailed, "bowtie: base tortuosity below the bin");
  }
  Point2 dir = (end - start) * (1.0 / chord0);
  double frac = rng.uniform(0.35, 0.65);
  Polyline with_tails;
  if (total_tail > 0.0) with_tails.push_back(start - dir * (total_tail * frac));
  with_tails.insert(with_tails.end(), p.begin(), p.end());
  if (total_tail > 0.0) with_tails.push_back(end + dir * (total_tail * (1.0 - frac)));
  if (crossing_count(with_tails) != k)
    throw Error(ErrorKind::ConstructionFailed, "bowtie: tails disturbed crossings");
  with_tails = pad_to_count(std::move(with_tails), cell.n_points, rng, 1.0);
  return rotated(with_tails, rng.uniform(0.0, 2.0 * kPi), centroid(with_tails));
}

// ---------------------------------------------------------------------------
// rail_weave: horizontal rails; zero-crossing cells use a lawn-mower stack of
// rails, crossing cells use two rails plus alternating vertical weave strokes
// (two crossings per full stroke, one for a trailing half stroke).

Polyline build_lawnmower(const CellTarget& cell, Rng& rng, const GeometryConfig& g) {
  double S = g.spacing();
  double t_mid = tbin_mid(cell.tbin);
  std::vector<int> rails;
  for (int r = 2; r <= 8; ++r)
    if (2 * r <= cell.n_points) rails.push_back(r);
  rng.shuffle(rails);
  for (int r : rails) {
    double gap = (r == 2) ? 552.0 : std::min(552.0 / (r - 1), 150.0);
    double height = (r - 1) * gap;
    double width = height * (t_mid - 1.0) / r * rng.uniform(0.96, 1.04);
    if (width < 1.3 * S || width > 3.6 * height) continue;
    Polyline p;
    for (int i = 0; i < r; ++i) {
      double y = i * gap;
      double x0 = (i % 2 == 0) ? 0.0 : width;
      double x1 = width - x0;
      p.push_back({x0, y});
      p.push_back({x1, y});
    }
    try {
      return pad_to_count(std::move(p), cell.n_points, rng, S);
    } catch (const Error&) {
      continue;
    }
  }
  throw Error(ErrorKind::ConstructionFailed, "lawnmower: no rail count fits");
}

Polyline build_rail_weave(const CellTarget& cell, uint64_t seed, const GeometryConfig& g) {
  Rng rng(seed);
  if (cell.sbin == 0) {
    Polyline p = build_lawnmower(cell, rng, g);
    return rotated(p, rng.uniform(0.0, 2.0 * kPi), centroid(p));
  }

  SBounds sb = sbin_range(cell.sbin);
  double S = g.spacing();
  std::vector<int> cs;
  for (int c = sb.lo; c <= sb.hi; ++c)
    if (cell.n_points >= 5 + 2 * (c / 2) + 2 * (c % 2)) cs.push_back(c);
  if (cs.empty()) throw Error(ErrorKind::FamilyInapplicable, "rail_weave: point count too low");
  int c = rng.pick(cs);
  int full = c / 2, half = c % 2;
  int strokes = full + half;

  double G = 56.0, m = 56.0;
  double W = std::max(200.0, (strokes + 1) * 64.0 + 80.0) * rng.uniform(0.9, 1.25);
  Polyline p{{0, 0}, {W, 0}, {W, G}, {0, G}};
  double left = 64.0, right = W - 64.0;
  double step = strokes > 1 ? (right - left) / (strokes - 1) : 0.0;
  double top = G + m, bot = -m;
  bool down = true;
  bool ends_half = false;
  for (int i = 0; i < strokes; ++i) {
    double cx = left + step * i + (strokes > 1 ? rng.uniform(-0.12, 0.12) * step : 0.0);
    bool is_half = (half == 1 && i == strokes - 1);
    p.push_back({cx, down ? top : bot});
    p.push_back({cx, is_half ? G / 2.0 : (down ? bot : top)});
    ends_half = is_half;
    down = !down;
  }
  if (crossing_count(p) != c)
    throw Error(ErrorKind::ConstructionFailed, "rail_weave: stroke layout missed count");

  // optional straight tail to walk tortuosity down into the target bin; exit
  // direction depends on where the last stroke left the path
  double arc0 = arc_length(p);
  double t_base = arc0 / dist(p.front(), p.back());
  const auto& edges = BinThresholds::tortuosity_edges;
  if (t_base >= edges[static_cast<size_t>(cell.tbin) + 1]) {
    double t_mid = tbin_mid(cell.tbin);
    std::vector<Point2> dirs;
    if (ends_half) {
      dirs = {{-1.0, 0.0}, {-0.96, 0.28}, {-0.96, -0.28}};
    } else if (p.back().y < 0.0) {
      dirs = {{0.0, -1.0}, {0.45, -0.89}, {-0.45, -0.89}, {0.89, -0.45}};
    } else {
      dirs = {{0.0, 1.0}, {0.45, 0.89}, {-0.45, 0.89}, {0.89, 0.45}};
    }
    double tail_cap = std::max(0.0, 1.55 * (g.view_px - 2.0 * g.margin_px) - W);
    bool attached = false;
    for (auto dir : dirs) {
      // t(T) decreases toward 1 as the tail grows; bisect for the target
      auto t_of = [&](double T) {
        return (arc0 + T) / dist(p.front(), p.back() + dir * T);
      };
      if (t_of(tail_cap) > t_mid) continue;
      double lo = 0.0, hi = tail_cap;
      for (int it = 0; it < 60; ++it) {
        double mid = (lo + hi) / 2.0;
        (t_of(mid) > t_mid ? lo : hi) = mid;
      }
      Polyline trial = p;
      trial.push_back(p.back() + dir * hi);
      try {
        if (crossing_count(trial) == c) {
          p = std::move(trial);
          attached = true;
          break;
        }
      } catch (const Error&) {
      }
    }
    if (!attached)
      throw Error(ErrorKind::ConstructionFailed, "rail_weave: no tail direction worked");
  } else if (t_base < edges[static_cast<size_t>(cell.tbin)]) {
    throw Error(ErrorKind::ConstructionFailed, "rail_weave: base tortuosity below the bin");
  }
  p = pad_to_count(std::move(p), cell.n_points, rng, S);
  return rotated(p, rng.uniform(0.0, 2.0 * kPi), centroid(p));
}

// ---------------------------------------------------------------------------
// split_star: open traversal of a {M/k} star polygon, optionally elliptical.

Polyline build_split_star(const CellTarget& cell, uint64_t seed, const GeometryConfig&) {
  SBounds sb = sbin_range(cell.sbin);
  if (max_crossings_for_points(cell.n_points) < sb.lo)
    throw Error(ErrorKind::FamilyInapplicable, "split_star: segment pairs cannot reach regime");
  if (cell.n_points < 7)
    throw Error(ErrorKind::FamilyInapplicable, "split_star: too few vertices");
  Rng rng(seed);
  double phi = rng.uniform(0.0, 2.0 * kPi);
  double squash = rng.uniform(0.78, 1.0);
  double R = 276.0;

  std::vector<int> ms;
  for (int M = cell.n_points; M <= cell.n_points + 8; ++M) ms.push_back(M);
  rng.shuffle(ms);
  for (int M : ms) {
    for (int k = 2; 2 * k <= M - std::max(2, M / 9); ++k) {
      if (std::gcd(M, k) != 1) continue;
      Polyline p;
      for (int j = 0; j < cell.n_points; ++j) {
        double ang = phi + 2.0 * kPi * ((j * k) % M) / M;
        p.push_back({R * std::cos(ang), R * squash * std::sin(ang)});
      }
      try {
        int c = crossing_count(p);
        if (c < sb.lo || c > sb.hi) continue;
        double t = tortuosity(p);
        if (bin_tortuosity(t) != cell.tbin) continue;
        return p;
      } catch (const Error&) {
        continue;
      }
    }
  }
  throw Error(ErrorKind::ConstructionFailed, "split_star: no (M,k) matched the cell");
}

// ---------------------------------------------------------------------------
// braid: two phase-shifted sinusoid strands joined end to end; the second
// strand returns right-to-left and stops early to shape the chord.

Polyline build_braid(const CellTarget& cell, uint64_t seed, const GeometryConfig& g) {
  SBounds sb = sbin_range(cell.sbin);
  if (cell.n_points < 10 || sb.hi < 2 || sb.lo > 8)
    throw Error(ErrorKind::FamilyInapplicable, "braid: cell outside family reach");
  Rng rng(seed);
  double S = g.spacing();
  int n1 = (cell.n_points + 1) / 2, n2 = cell.n_points - n1;
  double W = std::max(420.0, (n1 - 1) * 1.35 * S);
  double phi = rng.uniform(0.0, 2.0 * kPi);
  double dphi = kPi * rng.uniform(0.75, 1.25);
  double A = rng.uniform(70.0, 130.0);
  double x_end = W * rng.uniform(0.05, 0.45);

  std::vector<int> fs = {1, 2, 3};
  rng.shuffle(fs);
  for (int f : fs) {
    double omega = 2.0 * kPi * f / W;
    Polyline p;
    for (int j = 0; j < n1; ++j) {
      double x = W * j / (n1 - 1);
      p.push_back({x, A * std::sin(omega * x + phi)});
    }
    for (int j = 0; j < n2; ++j) {
      double x = W - (W - x_end) * (j + 1) / n2;
      p.push_back({x, A * std::sin(omega * x + phi + dphi)});
    }
    try {
      require_valid_polyline(p);
      int c = crossing_count(p);
      if (c < sb.lo || c > sb.hi) continue;
      if (bin_tortuosity(tortuosity(p)) != cell.tbin) continue;
      return p;
    } catch (const Error&) {
      continue;
    }
  }
  throw Error(ErrorKind::ConstructionFailed, "braid: no frequency matched the cell");
}

// ---------------------------------------------------------------------------
// knot_template: fixed spiral-and-return tangles. The library entries differ
// in turn count and bounce count, which sets the reachable crossing band.

struct KnotParams {
  double turns;
  int bounces;
};

constexpr std::array<KnotParams, 5> kKnotLibrary = {{
    {1.55, 1},
    {2.10, 1},
    {2.60, 1},
    {2.10, 2},
    {2.60, 2},
}};

Polyline build_knot(const CellTarget& cell, uint64_t seed, const GeometryConfig&) {
  SBounds sb = sbin_range(cell.sbin);
  if (cell.n_points < 9 || sb.hi < 3)
    throw Error(ErrorKind::FamilyInapplicable, "knot_template: cell outside family reach");
  Rng rng(seed);
  double phi0 = rng.uniform(0.0, 2.0 * kPi);
  double squash = rng.uniform(0.85, 1.0);
  bool mirror = rng.bernoulli(0.5);

  std::vector<size_t> order(kKnotLibrary.size());
  std::iota(order.begin(), order.end(), size_t{0});
  rng.shuffle(order);
  for (size_t idx : order) {
    const KnotParams& kp = kKnotLibrary[idx];
    int spiral_pts = cell.n_points - kp.bounces - 1;
    if (spiral_pts < 6) continue;
    double r_in = 130.0, r_out = 280.0, r_ret = 55.0;
    double theta_max = kp.turns * 2.0 * kPi;
    Polyline p;
    for (int j = 0; j < spiral_pts; ++j) {
      double u = static_cast<double>(j) / (spiral_pts - 1);
      double th = phi0 + (mirror ? -1.0 : 1.0) * u * theta_max;
      double r = r_in + (r_out - r_in) * u;
      p.push_back({r * std::cos(th), r * squash * std::sin(th)});
    }
    double th_end = phi0 + (mirror ? -1.0 : 1.0) * theta_max;
    for (int b = 0; b < kp.bounces; ++b) {
      double th = th_end + kPi * (b + 1) + rng.uniform(-0.25, 0.25);
      p.push_back({r_ret * std::cos(th), r_ret * squash * std::sin(th)});
    }
    double th_exit = th_end + kPi * kp.bounces + rng.uniform(-0.3, 0.3);
    double r_exit = 430.0;
    p.push_back({r_exit * std::cos(th_exit), r_exit * squash * std::sin(th_exit)});
    try {
      int c = crossing_count(p);
      if (c < sb.lo || c > sb.hi) continue;
      if (bin_tortuosity(tortuosity(p)) != cell.tbin) continue;
      return p;
    } catch (const Error&) {
      continue;
    }
  }
  throw Error(ErrorKind::ConstructionFailed, "knot_template: no template matched the cell");
}

// ---------------------------------------------------------------------------
// proposal_walk: incremental gated walk with an endpoint pull sized for the
// tortuosity target. Each proposed vertex must keep the partial path inside
// the constraint envelope and at or below the target crossing regime.

bool walk_gate(const Polyline& partial, Point2 cand, double S, int s_hi) {
  Point2 prev = partial.back();
  double len = dist(prev, cand);
  if (len < 1.12 * S) return false;
  if (cand.x < 0 || cand.x > 592 || cand.y < 0 || cand.y > 592) return false;
  if (partial.size() >= 2) {
    Polyline tail{partial[partial.size() - 2], prev, cand};
    if (turn_deviation_deg(tail, 1) > 140.0) return false;
  }
  for (size_t i = 0; i + 1 < partial.size(); ++i)
    if (dist(partial[i], cand) < 1.12 * S) return false;
  // vertex/segment clearances against everything except the incident segment
  for (size_t i = 0; i + 2 < partial.size(); ++i) {
    double d = dist_segment_segment(partial[i], partial[i + 1], prev, cand);
    bool crossing = d == 0.0;
    if (!crossing && d < 14.0) return false;
  }
  for (size_t i = 0; i + 1 + 1 < partial.size(); ++i)
    if (dist_point_segment(partial[i], prev, cand) < 14.0) return false;
  Polyline trial = partial;
  trial.push_back(cand);
  try {
    if (crossing_count(trial) > s_hi) return false;
  } catch (const Error&) {
    return false;
  }
  return true;
}

Polyline build_walk(const CellTarget& cell, uint64_t seed, const GeometryConfig& g) {
  SBounds sb = sbin_range(cell.sbin);
  if (cell.sbin > 2 || cell.tbin > 3 || cell.n_points < 5)
    throw Error(ErrorKind::FamilyInapplicable, "proposal_walk: cell outside family reach");
  Rng rng(seed);
  double S = g.spacing();
  int steps = cell.n_points - 1;
  double step_len = cell.tbin == 0 ? rng.uniform(1.15 * S, 1.55 * S) : rng.uniform(1.3 * S, 2.2 * S);
  double arc_est = steps * step_len;
  double ang = rng.uniform(0.0, 2.0 * kPi);
  double half_max = 266.0 / std::max(std::fabs(std::cos(ang)), std::fabs(std::sin(ang)));
  double chord = std::min(2.0 * half_max, arc_est / tbin_mid(cell.tbin));
  Point2 start{296.0 - chord / 2.0 * std::cos(ang), 296.0 - chord / 2.0 * std::sin(ang)};
  Point2 target = start + Point2{chord * std::cos(ang), chord * std::sin(ang)};

  Polyline p{start};
  double heading = std::atan2(target.y - start.y, target.x - start.x) + rng.uniform(-0.7, 0.7);
  for (int i = 0; i < steps; ++i) {
    int remaining = steps - i;
    bool placed = false;
    for (int trial = 0; trial < 60 && !placed; ++trial) {
      double to_target = dist(p.back(), target);
      double need = to_target / (remaining * step_len);
      double h;
      if (need > 0.92 || remaining <= 2) {
        h = std::atan2(target.y - p.back().y, target.x - p.back().x) + rng.uniform(-0.35, 0.35);
      } else {
        h = heading + rng.uniform(-1.1, 1.1);
        if (need < 0.30) h += rng.uniform(-0.9, 0.9);
      }
      double len = step_len * rng.uniform(0.85, 1.2);
      // occasionally aim through an earlier segment when the cell needs crossings
      if (sb.lo > 0 && i >= steps / 2 && p.size() > 3 && rng.bernoulli(0.4)) {
        try {
          if (crossing_count(p) < sb.lo) {
            size_t si = static_cast<size_t>(rng.uniform_int(0, static_cast<int64_t>(p.size()) - 3));
            Point2 mid = (p[si] + p[si + 1]) * 0.5;
            h = std::atan2(mid.y - p.back().y, mid.x - p.back().x) + rng.uniform(-0.2, 0.2);
            len = dist(p.back(), mid) * rng.uniform(1.5, 2.1);
          }
        } catch (const Error&) {
        }
      }
      Point2 cand = p.back() + Point2{len * std::cos(h), len * std::sin(h)};
      if (walk_gate(p, cand, S, sb.hi)) {
        p.push_back(cand);
        heading = h;
        placed = true;
      }
    }
    if (!placed) throw Error(ErrorKind::ConstructionFailed, "proposal_walk: dead end");
  }
  return p;
}

}  // namespace

bool family_applicable(FamilyKind f, const CellTarget& cell) {
  SBounds sb = sbin_range(cell.sbin);
  if (max_crossings_for_points(cell.n_points) < sb.lo) return false;
  switch (f) {
    case FamilyKind::bowtie: {
      if (sb.lo < 1 || sb.lo > 3 || cell.tbin > 4) return false;
      for (int k = std::max(1, sb.lo); k <= std::min(3, sb.hi); ++k)
        if (bowtie_k_fits(cell, k)) return true;
      return false;
    }
    case FamilyKind::rail_weave:
      if (cell.sbin == 0) return cell.n_points >= 4;
      return cell.n_points >= 5 + 2 * (sb.lo / 2) + 2 * (sb.lo % 2);
    case FamilyKind::split_star:
      return cell.sbin >= 2 && cell.tbin >= 2 && cell.n_points >= 7;
    case FamilyKind::braid:
      return cell.sbin >= 1 && cell.sbin <= 3 && cell.tbin >= 1 && cell.n_points >= 10;
    case FamilyKind::knot_template:
      return cell.sbin >= 2 && cell.tbin >= 2 && cell.n_points >= 9;
    case FamilyKind::proposal_walk:
      return cell.sbin <= 2 && cell.tbin <= 3 && cell.n_points >= 5;
    case FamilyKind::bootstrap:
      return false;  // driven by source availability, not cell shape
  }
  return false;
}

Polyline propose(FamilyKind f, const CellTarget& cell, uint64_t seed, const GeometryConfig& g) {
  if (!family_applicable(f, cell))
    throw Error(ErrorKind::FamilyInapplicable,
                std::string(family_name(f)) + " cannot reach cell (" + std::to_string(cell.tbin) +
                    "," + std::to_string(cell.sbin) + ",n=" + std::to_string(cell.n_points) + ")");
  switch (f) {
    case FamilyKind::bowtie: return build_bowtie(cell, seed, g);
    case FamilyKind::rail_weave: return build_rail_weave(cell, seed, g);
    case FamilyKind::split_star: return build_split_star(cell, seed, g);
    case FamilyKind::braid: return build_braid(cell, seed, g);
    case FamilyKind::knot_template: return build_knot(cell, seed, g);
    case FamilyKind::proposal_walk: return build_walk(cell, seed, g);
    case FamilyKind::bootstrap: break;
  }
  throw Error(ErrorKind::FamilyInapplicable, "bootstrap proposals need a source record");
}

}  // namespace pathbench
