#include "pathbench/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace pathbench {

namespace {

constexpr double kOrientEps = 1e-9;

double orient(Point2 a, Point2 b, Point2 c) { return cross(b - a, c - a); }

int sign_eps(double v) {
  if (v > kOrientEps) return 1;
  if (v < -kOrientEps) return -1;
  return 0;
}

// Collinear segments: do they overlap over positive length?
bool collinear_overlap(Point2 a1, Point2 a2, Point2 b1, Point2 b2) {
  Point2 d = a2 - a1;
  double ta1 = 0.0, ta2 = dot(d, d);
  double tb1 = dot(b1 - a1, d), tb2 = dot(b2 - a1, d);
  if (tb1 > tb2) std::swap(tb1, tb2);
  double lo = std::max(ta1, tb1), hi = std::min(ta2, tb2);
  return hi - lo > kOrientEps;
}

// Sub-intervals of [0,1] on segment a..b lying outside the disc (center, radius).
// Returns up to 2 intervals.
int clip_outside_disc(Point2 a, Point2 b, Point2 center, double radius,
                      std::array<std::pair<double, double>, 2>& out) {
  Point2 d = b - a;
  Point2 m = a - center;
  double qa = dot(d, d);
  double qb = 2.0 * dot(m, d);
  double qc = dot(m, m) - radius * radius;
  double disc = qb * qb - 4.0 * qa * qc;
  int n = 0;
  auto push = [&](double lo, double hi) {
    if (hi - lo > 1e-12) out[n++] = {lo, hi};
  };
  if (qa <= 0.0) return 0;
  if (disc <= 0.0) {
    // never enters the disc
    push(0.0, 1.0);
    return n;
  }
  double sq = std::sqrt(disc);
  double t1 = (-qb - sq) / (2.0 * qa);
  double t2 = (-qb + sq) / (2.0 * qa);
  double in_lo = std::max(0.0, t1), in_hi = std::min(1.0, t2);
  if (in_hi <= in_lo) {
    push(0.0, 1.0);
    return n;
  }
  push(0.0, in_lo);
  push(in_hi, 1.0);
  return n;
}

struct BBox {
  double minx, miny, maxx, maxy;
};

BBox bbox_of(const Polyline& p) {
  BBox b{p[0].x, p[0].y, p[0].x, p[0].y};
  for (const auto& v : p) {
    b.minx = std::min(b.minx, v.x);
    b.miny = std::min(b.miny, v.y);
    b.maxx = std::max(b.maxx, v.x);
    b.maxy = std::max(b.maxy, v.y);
  }
  return b;
}

}  // namespace

const char* rule_name(Rule r) {
  switch (r) {
    case Rule::min_segment_length: return "min_segment_length";
    case Rule::min_extent: return "min_extent";
    case Rule::segment_separation: return "segment_separation";
    case Rule::vertex_spacing: return "vertex_spacing";
    case Rule::vertex_segment_separation: return "vertex_segment_separation";
    case Rule::reversal_angle: return "reversal_angle";
    case Rule::seam_proximity: return "seam_proximity";
  }
  return "unknown";
}

const char* error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidPolyline: return "InvalidPolyline";
    case ErrorKind::ChordTooShort: return "ChordTooShort";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::DegenerateOverlap: return "DegenerateOverlap";
    case ErrorKind::DegenerateBBox: return "DegenerateBBox";
    case ErrorKind::FamilyInapplicable: return "FamilyInapplicable";
    case ErrorKind::ConstructionFailed: return "ConstructionFailed";
    case ErrorKind::MutationInfeasible: return "MutationInfeasible";
    case ErrorKind::GrowthInfeasible: return "GrowthInfeasible";
    case ErrorKind::TooManyPoints: return "TooManyPoints";
    case ErrorKind::PlacementInfeasible: return "PlacementInfeasible";
    case ErrorKind::LayoutInfeasible: return "LayoutInfeasible";
    case ErrorKind::SchemaMismatch: return "SchemaMismatch";
    case ErrorKind::MalformedLine: return "MalformedLine";
    case ErrorKind::JoinFailure: return "JoinFailure";
    case ErrorKind::InsufficientData: return "InsufficientData";
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::SvgParse: return "SvgParse";
    case ErrorKind::RasterBackendUnavailable: return "RasterBackendUnavailable";
    case ErrorKind::TransportError: return "TransportError";
    case ErrorKind::AuthError: return "AuthError";
    case ErrorKind::Timeout: return "Timeout";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::UsageError: return "UsageError";
  }
  return "Error";
}

void require_valid_polyline(const Polyline& p) {
  if (p.size() < 2) throw Error(ErrorKind::InvalidPolyline, "needs at least 2 vertices");
  for (const auto& v : p)
    if (!std::isfinite(v.x) || !std::isfinite(v.y))
      throw Error(ErrorKind::InvalidPolyline, "non-finite coordinate");
  for (size_t i = 1; i < p.size(); ++i)
    if (dist(p[i - 1], p[i]) <= 0.0)
      throw Error(ErrorKind::InvalidPolyline, "consecutive vertices coincide at index " + std::to_string(i));
}

double dist_point_segment(Point2 p, Point2 a, Point2 b) {
  Point2 d = b - a;
  double len2 = dot(d, d);
  if (len2 <= 0.0) return dist(p, a);
  double t = std::clamp(dot(p - a, d) / len2, 0.0, 1.0);
  return dist(p, a + d * t);
}

double dist_segment_segment(Point2 a1, Point2 a2, Point2 b1, Point2 b2) {
  double o1 = orient(a1, a2, b1), o2 = orient(a1, a2, b2);
  double o3 = orient(b1, b2, a1), o4 = orient(b1, b2, a2);
  if (sign_eps(o1) * sign_eps(o2) < 0 && sign_eps(o3) * sign_eps(o4) < 0) return 0.0;
  return std::min(std::min(dist_point_segment(b1, a1, a2), dist_point_segment(b2, a1, a2)),
                  std::min(dist_point_segment(a1, b1, b2), dist_point_segment(a2, b1, b2)));
}

double arc_length(const Polyline& p) {
  require_valid_polyline(p);
  double s = 0.0;
  for (size_t i = 1; i < p.size(); ++i) s += dist(p[i - 1], p[i]);
  return s;
}

double tortuosity(const Polyline& p, double epsilon_chord) {
  double arc = arc_length(p);
  double chord = dist(p.front(), p.back());
  if (chord < epsilon_chord)
    throw Error(ErrorKind::ChordTooShort, "endpoint chord " + std::to_string(chord));
  return arc / chord;
}

std::vector<Crossing> enumerate_crossings(const Polyline& p,
                                          std::vector<std::pair<int, int>>* collinear_overlaps) {
  require_valid_polyline(p);
  const int nseg = static_cast<int>(p.size()) - 1;
  std::vector<Crossing> out;
  for (int i = 0; i < nseg; ++i) {
    for (int j = i + 2; j < nseg; ++j) {
      Point2 a1 = p[i], a2 = p[i + 1], b1 = p[j], b2 = p[j + 1];
      double o1 = orient(a1, a2, b1), o2 = orient(a1, a2, b2);
      double o3 = orient(b1, b2, a1), o4 = orient(b1, b2, a2);
      int s1 = sign_eps(o1), s2 = sign_eps(o2), s3 = sign_eps(o3), s4 = sign_eps(o4);
      if (s1 == 0 && s2 == 0 && s3 == 0 && s4 == 0) {
        if (collinear_overlap(a1, a2, b1, b2)) {
          if (collinear_overlaps)
            collinear_overlaps->push_back({i, j});
          else
            throw Error(ErrorKind::DegenerateOverlap,
                        "segments " + std::to_string(i) + "," + std::to_string(j));
        }
        continue;
      }
      if (s1 * s2 < 0 && s3 * s4 < 0) {
        Point2 d1 = a2 - a1, d2 = b2 - b1;
        double den = cross(d1, d2);
        double t = cross(b1 - a1, d2) / den;
        Crossing c;
        c.seg_a = i;
        c.seg_b = j;
        c.point = a1 + d1 * t;
        c.first_pass_vertex = i + 1;
        c.second_pass_vertex = j + 1;
        out.push_back(c);
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const Crossing& a, const Crossing& b) {
    if (a.second_pass_vertex != b.second_pass_vertex)
      return a.second_pass_vertex < b.second_pass_vertex;
    return a.first_pass_vertex < b.first_pass_vertex;
  });
  return out;
}

std::vector<Crossing> self_intersections(const Polyline& p) {
  return enumerate_crossings(p, nullptr);
}

int bin_tortuosity(double t) {
  const auto& e = BinThresholds::tortuosity_edges;
  if (t < e.front() - 1e-9 || t >= e.back())
    throw Error(ErrorKind::OutOfRange, "tortuosity " + std::to_string(t));
  double tc = std::max(t, e.front());
  for (int b = BinThresholds::bin_count - 1; b >= 0; --b)
    if (tc >= e[static_cast<size_t>(b)]) return b;
  return 0;
}

int bin_intersections(int c) {
  const auto& e = BinThresholds::intersection_edges;
  if (c < 0 || c >= e.back())
    throw Error(ErrorKind::OutOfRange, "crossing count " + std::to_string(c));
  for (int b = BinThresholds::bin_count - 1; b >= 0; --b)
    if (c >= e[static_cast<size_t>(b)]) return b;
  return 0;
}

namespace {

// Minimum distance between the parts of two properly intersecting segments
// that lie outside the masking disc around their crossing point. +inf when a
// side is entirely inside the disc.
double masked_pair_distance(Point2 a1, Point2 a2, Point2 b1, Point2 b2, Point2 center,
                            double radius) {
  std::array<std::pair<double, double>, 2> ia, ib;
  int na = clip_outside_disc(a1, a2, center, radius, ia);
  int nb = clip_outside_disc(b1, b2, center, radius, ib);
  double best = std::numeric_limits<double>::infinity();
  Point2 da = a2 - a1, db = b2 - b1;
  for (int u = 0; u < na; ++u) {
    Point2 sa1 = a1 + da * ia[static_cast<size_t>(u)].first;
    Point2 sa2 = a1 + da * ia[static_cast<size_t>(u)].second;
    for (int v = 0; v < nb; ++v) {
      Point2 sb1 = b1 + db * ib[static_cast<size_t>(v)].first;
      Point2 sb2 = b1 + db * ib[static_cast<size_t>(v)].second;
      best = std::min(best, dist_segment_segment(sa1, sa2, sb1, sb2));
    }
  }
  return best;
}

struct PairDistance {
  int i, j;
  double d;  // masked distance for crossing pairs
};

std::vector<PairDistance> nonlocal_pair_distances(const Polyline& p, double masking_radius,
                                                  std::vector<std::pair<int, int>>* overlaps) {
  const int nseg = static_cast<int>(p.size()) - 1;
  auto crossings = enumerate_crossings(p, overlaps);
  std::vector<PairDistance> out;
  for (int i = 0; i < nseg; ++i) {
    for (int j = i + 2; j < nseg; ++j) {
      const Crossing* cross_here = nullptr;
      for (const auto& c : crossings)
        if (c.seg_a == i && c.seg_b == j) {
          cross_here = &c;
          break;
        }
      double d;
      if (cross_here) {
        if (masking_radius <= 0.0) {
          out.push_back({i, j, 0.0});
          continue;
        }
        d = masked_pair_distance(p[i], p[i + 1], p[j], p[j + 1], cross_here->point,
                                 masking_radius);
        if (!std::isfinite(d)) continue;  // fully inside the masking disc
      } else {
        d = dist_segment_segment(p[i], p[i + 1], p[j], p[j + 1]);
      }
      out.push_back({i, j, d});
    }
  }
  return out;
}

}  // namespace

SeparationResult separation_distances(const Polyline& p, double masking_radius) {
  require_valid_polyline(p);
  SeparationResult r;
  std::vector<std::pair<int, int>> overlaps;
  for (const auto& pd : nonlocal_pair_distances(p, masking_radius, &overlaps))
    r.segment_segment = std::min(r.segment_segment, pd.d);
  if (!overlaps.empty()) r.segment_segment = 0.0;

  const int n = static_cast<int>(p.size());
  for (int v = 0; v < n; ++v) {
    for (int s = 0; s < n - 1; ++s) {
      if (v == s || v == s + 1) continue;
      r.vertex_segment = std::min(r.vertex_segment, dist_point_segment(p[v], p[s], p[s + 1]));
    }
  }
  return r;
}

double turn_deviation_deg(const Polyline& p, int i) {
  Point2 in = p[static_cast<size_t>(i)] - p[static_cast<size_t>(i - 1)];
  Point2 out = p[static_cast<size_t>(i + 1)] - p[static_cast<size_t>(i)];
  double ang = std::atan2(std::fabs(cross(in, out)), dot(in, out));
  return ang * 180.0 / M_PI;
}

AcceptanceReport check_constraints(const Polyline& p, const GeometryConfig& g, bool has_glyphs) {
  require_valid_polyline(p);
  AcceptanceReport rep;
  const double S = g.spacing();
  const int n = static_cast<int>(p.size());

  // rule 1: segment length
  double min_seg = has_glyphs ? std::max(g.min_segment_len, S) : g.min_segment_len;
  for (int i = 0; i + 1 < n; ++i) {
    double len = dist(p[static_cast<size_t>(i)], p[static_cast<size_t>(i + 1)]);
    if (len < min_seg) rep.violations.push_back({Rule::min_segment_length, i, -1, len, min_seg});
  }

  // rule 2: overall extent on at least one axis
  BBox b = bbox_of(p);
  double extent = std::max(b.maxx - b.minx, b.maxy - b.miny);
  if (extent < g.min_extent)
    rep.violations.push_back({Rule::min_extent, -1, -1, extent, g.min_extent});

  // rule 3: nonlocal segment separation, masked around true crossings
  double min_sep = has_glyphs ? std::max(g.min_nonlocal_sep, 2.0 * g.glyph_radius)
                              : g.min_nonlocal_sep;
  std::vector<std::pair<int, int>> overlaps;
  for (const auto& pd : nonlocal_pair_distances(p, g.effective_masking_radius(has_glyphs),
                                                &overlaps))
    if (pd.d < min_sep)
      rep.violations.push_back({Rule::segment_separation, pd.i, pd.j, pd.d, min_sep});
  for (const auto& ov : overlaps)
    rep.violations.push_back({Rule::segment_separation, ov.first, ov.second, 0.0, min_sep});

  // rule 4: nonlocal vertex spacing (glyph centers)
  if (has_glyphs) {
    for (int a = 0; a < n; ++a)
      for (int c = a + 2; c < n; ++c) {
        double d = dist(p[static_cast<size_t>(a)], p[static_cast<size_t>(c)]);
        if (d < S) rep.violations.push_back({Rule::vertex_spacing, a, c, d, S});
      }
  }

  // rule 5: vertex to non-incident segment
  for (int v = 0; v < n; ++v)
    for (int s = 0; s + 1 < n; ++s) {
      if (v == s || v == s + 1) continue;
      double d = dist_point_segment(p[static_cast<size_t>(v)], p[static_cast<size_t>(s)],
                                    p[static_cast<size_t>(s + 1)]);
      if (d < g.min_vertex_seg_sep)
        rep.violations.push_back({Rule::vertex_segment_separation, v, s, d, g.min_vertex_seg_sep});
    }

  // rule 6: near-reversal cap
  double max_dev = 180.0 - g.reversal_angle_min_deg;
  for (int i = 1; i + 1 < n; ++i) {
    double dev = turn_deviation_deg(p, i);
    if (dev > max_dev) rep.violations.push_back({Rule::reversal_angle, i, -1, dev, max_dev});
  }

  // rule 7: tile-seam clearance
  if (g.seam_avoidance && g.seam_pitch > 0.0) {
    for (int v = 0; v < n; ++v) {
      for (double coord : {p[static_cast<size_t>(v)].x, p[static_cast<size_t>(v)].y}) {
        double m = std::fabs(std::remainder(coord, g.seam_pitch));
        if (m < g.seam_pad) {
          rep.violations.push_back({Rule::seam_proximity, v, -1, m, g.seam_pad});
          break;
        }
      }
    }
  }

  rep.passed = rep.violations.empty();
  return rep;
}

Polyline fit_to_view(const Polyline& p, const GeometryConfig& g) {
  require_valid_polyline(p);
  BBox b = bbox_of(p);
  double w = b.maxx - b.minx, h = b.maxy - b.miny;
  double span = std::max(w, h);
  if (span <= 0.0) throw Error(ErrorKind::DegenerateBBox, "all points coincide");
  double avail = g.view_px - 2.0 * g.margin_px;
  double scale = avail / span;
  double offx = g.margin_px + (avail - w * scale) / 2.0 - b.minx * scale;
  double offy = g.margin_px + (avail - h * scale) / 2.0 - b.miny * scale;
  Polyline out;
  out.reserve(p.size());
  for (const auto& v : p) out.push_back({v.x * scale + offx, v.y * scale + offy});
  return out;
}

}  // namespace pathbench
