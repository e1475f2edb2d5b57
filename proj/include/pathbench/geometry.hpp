#pragma once

#include <array>
#include <limits>
#include <utility>
#include <vector>

#include "pathbench/common.hpp"

namespace pathbench {

// Transverse interior intersection between two non-adjacent segments of the
// same polyline. seg_a < seg_b - 1; *_pass_vertex is the vertex emitted right
// after passing through the crossing point on that traversal.
struct Crossing {
  int seg_a = 0;
  int seg_b = 0;
  Point2 point;
  int first_pass_vertex = 0;   // seg_a + 1
  int second_pass_vertex = 0;  // seg_b + 1
};

struct BinThresholds {
  static constexpr std::array<double, 7> tortuosity_edges = {1.0, 1.3, 2.0, 3.0, 4.5, 6.5, 9.0};
  static constexpr std::array<int, 7> intersection_edges = {0, 1, 2, 4, 6, 9, 13};
  static constexpr int bin_count = 6;
};

struct GeometryConfig {
  int view_px = 672;
  double margin_px = 40.0;
  double glyph_radius = 9.0;
  double glyph_padding = 4.0;
  double stroke_width = 3.0;
  double min_segment_len = 12.0;
  double min_extent = 336.0;  // 0.5 * view
  double min_nonlocal_sep = 8.0;
  double min_vertex_seg_sep = 12.0;
  double reversal_angle_min_deg = 20.0;
  double masking_radius = 0.0;  // <= 0 selects the default rule
  bool seam_avoidance = false;
  double seam_pitch = 336.0;
  double seam_pad = 12.0;
  double epsilon_chord = 1e-6;

  // Minimum glyph center-to-center spacing, derived, never stored.
  double spacing() const { return 2.0 * glyph_radius + glyph_padding + 10.0; }
  double effective_masking_radius(bool has_glyphs) const {
    if (masking_radius > 0.0) return masking_radius;
    return has_glyphs ? 1.5 * spacing() : 24.0;
  }
};

enum class Rule {
  min_segment_length = 1,
  min_extent = 2,
  segment_separation = 3,
  vertex_spacing = 4,
  vertex_segment_separation = 5,
  reversal_angle = 6,
  seam_proximity = 7,
};

const char* rule_name(Rule r);

struct Violation {
  Rule rule;
  int index_a = -1;
  int index_b = -1;
  double measured = 0.0;
  double threshold = 0.0;
};

struct AcceptanceReport {
  bool passed = false;
  std::vector<Violation> violations;
};

struct SeparationResult {
  double segment_segment = std::numeric_limits<double>::infinity();
  double vertex_segment = std::numeric_limits<double>::infinity();
};

double arc_length(const Polyline& p);

// Arc length over endpoint chord (sinuosity). Throws ChordTooShort when the
// endpoints nearly coincide.
double tortuosity(const Polyline& p, double epsilon_chord = 1e-6);

std::vector<Crossing> self_intersections(const Polyline& p);

// Internal enumeration that reports collinear positive-length overlaps
// instead of throwing; used by the acceptance gate.
std::vector<Crossing> enumerate_crossings(const Polyline& p,
                                          std::vector<std::pair<int, int>>* collinear_overlaps);

int bin_tortuosity(double t);
int bin_intersections(int c);

SeparationResult separation_distances(const Polyline& p, double masking_radius);

AcceptanceReport check_constraints(const Polyline& p, const GeometryConfig& g, bool has_glyphs);

Polyline fit_to_view(const Polyline& p, const GeometryConfig& g);

// Turn deviation from straight continuation at interior vertex i, degrees in [0, 180].
double turn_deviation_deg(const Polyline& p, int i);

// (n-2)(n-3)/2: every crossing needs a non-adjacent segment pair.
inline int max_crossings_for_points(int n) { return n < 4 ? 0 : (n - 2) * (n - 3) / 2; }

}  // namespace pathbench
