#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pathbench/generator.hpp"

namespace pathbench {

enum class GlyphColor { red, blue, green, orange, yellow, cyan, purple, brown };
enum class GlyphShape { circle, square, tri, star, plus };

constexpr int kGlyphColors = 8;
constexpr int kGlyphShapes = 5;
constexpr int kGlyphVocabulary = kGlyphColors * kGlyphShapes;

struct Glyph {
  GlyphColor color = GlyphColor::red;
  GlyphShape shape = GlyphShape::circle;

  bool operator==(const Glyph&) const = default;
};

const char* color_name(GlyphColor c);
const char* shape_name(GlyphShape s);
std::string glyph_text(Glyph g);            // "red square"
Glyph glyph_from_index(int index);          // index in [0, 40)
int glyph_index(Glyph g);
bool parse_glyph(const std::string& text, Glyph& out);

inline Glyph start_glyph() { return {GlyphColor::red, GlyphShape::square}; }

using GlyphAssignment = std::vector<Glyph>;

// First element is always (red, square); the rest are drawn without
// replacement from the other 39 combos.
GlyphAssignment assign_glyphs(int n_points, uint64_t seed);

struct Confound {
  Point2 a, b;
  int encounter = -1;  // first vertex index within encounter distance, -1 if never
};

struct ConfoundSet {
  std::vector<Confound> segments;
  std::vector<int> encounter_token_indices;  // sorted, encountered confounds only
};

struct ConfoundConfig {
  double d_min_factor = 1.5;  // x glyph radius
  double d_max_factor = 6.0;
  double d_enc_factor = 3.0;
  double len_min_factor = 3.0;  // x spacing S
  double len_max_factor = 8.0;
  bool allow_crossing = false;
  int retry_budget = 400;  // per requested segment
};

ConfoundSet place_confounds(const BackboneRecord& record, int k, const GeometryConfig& g,
                            const ConfoundConfig& cc, uint64_t seed);

struct SceneSpec {
  int view_px = 672;
  double stroke_width = 3.0;
  double glyph_radius = 9.0;
  std::string background = "white";
  std::string stroke_color = "black";
};

inline SceneSpec scene_from_geometry(const GeometryConfig& g) {
  SceneSpec s;
  s.view_px = g.view_px;
  s.stroke_width = g.stroke_width;
  s.glyph_radius = g.glyph_radius;
  return s;
}

std::string render_svg(const BackboneRecord& record, const GlyphAssignment& glyphs,
                       const ConfoundSet& confounds, const SceneSpec& spec);

// Renders the constrained SVG dialect emitted by render_svg into a PNG.
void rasterize(const std::string& svg_text, const std::string& out_path);

struct SceneRecord {
  int64_t record_id = 0;
  std::string svg_path;
  std::string png_path;  // empty unless rasterized
  std::vector<std::string> glyphs;
  ConfoundSet confounds;
  int requested_confounds = 0;
  uint64_t glyph_seed = 0;
  uint64_t confound_seed = 0;
};

void write_scenes(const std::string& path, const std::vector<SceneRecord>& scenes);
std::vector<SceneRecord> read_scenes(const std::string& path);

}  // namespace pathbench
