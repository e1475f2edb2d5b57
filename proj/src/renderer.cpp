#include "pathbench/renderer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "pathbench/jsonl.hpp"
#include "pathbench/rng.hpp"

namespace pathbench {

namespace {
constexpr double kPi = 3.14159265358979323846;

const char* kColorNames[kGlyphColors] = {"red",  "blue",   "green",  "orange",
                                         "yellow", "cyan", "purple", "brown"};
const char* kShapeNames[kGlyphShapes] = {"circle", "square", "tri", "star", "plus"};
}  // namespace

const char* color_name(GlyphColor c) { return kColorNames[static_cast<int>(c)]; }
const char* shape_name(GlyphShape s) { return kShapeNames[static_cast<int>(s)]; }

std::string glyph_text(Glyph g) {
  return std::string(color_name(g.color)) + " " + shape_name(g.shape);
}

Glyph glyph_from_index(int index) {
  return {static_cast<GlyphColor>(index / kGlyphShapes),
          static_cast<GlyphShape>(index % kGlyphShapes)};
}

int glyph_index(Glyph g) {
  return static_cast<int>(g.color) * kGlyphShapes + static_cast<int>(g.shape);
}

bool parse_glyph(const std::string& text, Glyph& out) {
  auto sp = text.find(' ');
  if (sp == std::string::npos) return false;
  std::string c = text.substr(0, sp), s = text.substr(sp + 1);
  for (int i = 0; i < kGlyphColors; ++i)
    if (c == kColorNames[i])
      for (int j = 0; j < kGlyphShapes; ++j)
        if (s == kShapeNames[j]) {
          out = {static_cast<GlyphColor>(i), static_cast<GlyphShape>(j)};
          return true;
        }
  return false;
}

GlyphAssignment assign_glyphs(int n_points, uint64_t seed) {
  if (n_points > kGlyphVocabulary)
    throw Error(ErrorKind::TooManyPoints,
                std::to_string(n_points) + " vertices exceed the 40-combo vocabulary");
  if (n_points < 2) throw Error(ErrorKind::UsageError, "need at least 2 vertices");
  Rng rng(seed);
  std::vector<int> pool;
  pool.reserve(kGlyphVocabulary - 1);
  int start = glyph_index(start_glyph());
  for (int i = 0; i < kGlyphVocabulary; ++i)
    if (i != start) pool.push_back(i);
  rng.shuffle(pool);
  GlyphAssignment out{start_glyph()};
  for (int i = 0; i < n_points - 1; ++i) out.push_back(glyph_from_index(pool[static_cast<size_t>(i)]));
  return out;
}

namespace {

double dist_segment_polyline(Point2 a, Point2 b, const Polyline& p) {
  double best = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i + 1 < p.size(); ++i)
    best = std::min(best, dist_segment_segment(a, b, p[i], p[i + 1]));
  return best;
}

int first_encounter_vertex(const Polyline& p, Point2 a, Point2 b, double d_enc) {
  if (dist_point_segment(p[0], a, b) <= d_enc) return 0;
  double best = std::numeric_limits<double>::infinity();
  for (size_t v = 1; v < p.size(); ++v) {
    best = std::min(best, dist_segment_segment(p[v - 1], p[v], a, b));
    if (best <= d_enc) return static_cast<int>(v);
  }
  return -1;
}

}  // namespace

ConfoundSet place_confounds(const BackboneRecord& record, int k, const GeometryConfig& g,
                            const ConfoundConfig& cc, uint64_t seed) {
  if (k < 0) throw Error(ErrorKind::UsageError, "negative confound count");
  ConfoundSet out;
  if (k == 0) return out;
  const Polyline& path = record.vertices;
  Rng rng(seed);
  double r = g.glyph_radius, S = g.spacing();
  double d_min = cc.d_min_factor * r, d_max = cc.d_max_factor * r, d_enc = cc.d_enc_factor * r;
  double pad = 8.0;
  int budget = cc.retry_budget * k;

  while (static_cast<int>(out.segments.size()) < k && budget-- > 0) {
    size_t si = static_cast<size_t>(rng.uniform_int(0, static_cast<int64_t>(path.size()) - 2));
    double t = rng.uniform(0.1, 0.9);
    Point2 anchor = path[si] + (path[si + 1] - path[si]) * t;
    Point2 dir = path[si + 1] - path[si];
    double len_dir = norm(dir);
    dir = dir * (1.0 / len_dir);
    Point2 perp{-dir.y, dir.x};
    double side = rng.bernoulli(0.5) ? 1.0 : -1.0;
    Point2 center = anchor + perp * (side * rng.uniform(d_min + 2.0, d_max - 2.0));
    double ang = rng.uniform(-0.45, 0.45);
    double ca = std::cos(ang), sa = std::sin(ang);
    Point2 cd{dir.x * ca - dir.y * sa, dir.x * sa + dir.y * ca};
    double len = rng.uniform(cc.len_min_factor * S, cc.len_max_factor * S);
    Point2 a = center - cd * (len / 2.0), b = center + cd * (len / 2.0);
    if (a.x < pad || a.x > g.view_px - pad || a.y < pad || a.y > g.view_px - pad) continue;
    if (b.x < pad || b.x > g.view_px - pad || b.y < pad || b.y > g.view_px - pad) continue;
    double d_path = dist_segment_polyline(a, b, path);
    if (cc.allow_crossing) {
      if (d_path > d_max) continue;
    } else {
      if (d_path < d_min || d_path > d_max) continue;
    }
    bool clear = true;
    for (const auto& v : path)
      if (dist_point_segment(v, a, b) < 2.0 * r) {
        clear = false;
        break;
      }
    if (!clear) continue;
    Confound c{a, b, first_encounter_vertex(path, a, b, d_enc)};
    out.segments.push_back(c);
  }
  if (out.segments.empty())
    throw Error(ErrorKind::PlacementInfeasible, "no confound placement satisfied the bands");
  for (const auto& c : out.segments)
    if (c.encounter >= 0) out.encounter_token_indices.push_back(c.encounter);
  std::sort(out.encounter_token_indices.begin(), out.encounter_token_indices.end());
  return out;
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

void append_glyph(std::string& svg, Glyph g, Point2 c, double r) {
  const std::string fill = color_name(g.color);
  switch (g.shape) {
    case GlyphShape::circle:
      svg += "<circle cx=\"" + fmt(c.x) + "\" cy=\"" + fmt(c.y) + "\" r=\"" + fmt(r) +
             "\" fill=\"" + fill + "\"/>\n";
      return;
    case GlyphShape::square: {
      double a = 0.9 * r;
      svg += "<rect x=\"" + fmt(c.x - a) + "\" y=\"" + fmt(c.y - a) + "\" width=\"" +
             fmt(2 * a) + "\" height=\"" + fmt(2 * a) + "\" fill=\"" + fill + "\"/>\n";
      return;
    }
    case GlyphShape::tri: {
      double h = r * std::sqrt(3.0) / 2.0;
      svg += "<polygon points=\"" + fmt(c.x) + "," + fmt(c.y - r) + " " + fmt(c.x - h) + "," +
             fmt(c.y + r / 2) + " " + fmt(c.x + h) + "," + fmt(c.y + r / 2) + "\" fill=\"" +
             fill + "\"/>\n";
      return;
    }
    case GlyphShape::star: {
      svg += "<polygon points=\"";
      for (int i = 0; i < 10; ++i) {
        double rad = (i % 2 == 0) ? r : 0.381966 * r;
        double ang = -kPi / 2.0 + i * kPi / 5.0;
        if (i) svg += " ";
        svg += fmt(c.x + rad * std::cos(ang)) + "," + fmt(c.y + rad * std::sin(ang));
      }
      svg += "\" fill=\"" + fill + "\"/>\n";
      return;
    }
    case GlyphShape::plus: {
      double w = 0.3 * r;
      const double xs[12] = {-w, w, w, r, r, w, w, -w, -w, -r, -r, -w};
      const double ys[12] = {-r, -r, -w, -w, w, w, r, r, w, w, -w, -w};
      svg += "<polygon points=\"";
      for (int i = 0; i < 12; ++i) {
        if (i) svg += " ";
        svg += fmt(c.x + xs[i]) + "," + fmt(c.y + ys[i]);
      }
      svg += "\" fill=\"" + fill + "\"/>\n";
      return;
    }
  }
}

}  // namespace

std::string render_svg(const BackboneRecord& record, const GlyphAssignment& glyphs,
                       const ConfoundSet& confounds, const SceneSpec& spec) {
  if (glyphs.size() != record.vertices.size())
    throw Error(ErrorKind::UsageError, "glyph count does not match vertex count");
  std::string svg;
  std::string view = std::to_string(spec.view_px);
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + view + "\" height=\"" + view +
         "\" viewBox=\"0 0 " + view + " " + view + "\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"" + view + "\" height=\"" + view + "\" fill=\"" +
         spec.background + "\"/>\n";
  const std::string stroke =
      "stroke=\"" + spec.stroke_color + "\" stroke-width=\"" + fmt(spec.stroke_width) +
      "\" stroke-linecap=\"round\" stroke-linejoin=\"round\"";
  svg += "<polyline fill=\"none\" " + stroke + " points=\"";
  for (size_t i = 0; i < record.vertices.size(); ++i) {
    if (i) svg += " ";
    svg += fmt(record.vertices[i].x) + "," + fmt(record.vertices[i].y);
  }
  svg += "\"/>\n";
  for (const auto& c : confounds.segments)
    svg += "<line x1=\"" + fmt(c.a.x) + "\" y1=\"" + fmt(c.a.y) + "\" x2=\"" + fmt(c.b.x) +
           "\" y2=\"" + fmt(c.b.y) + "\" " + stroke + "/>\n";
  for (size_t i = 0; i < glyphs.size(); ++i) {
    svg += "<g>\n";
    append_glyph(svg, glyphs[i], record.vertices[i], spec.glyph_radius);
    svg += "</g>\n";
  }
  svg += "</svg>\n";
  return svg;
}

void write_scenes(const std::string& path, const std::vector<SceneRecord>& scenes) {
  std::vector<json> rows;
  rows.reserve(scenes.size());
  for (const auto& s : scenes) {
    json segs = json::array();
    json encounters = json::array();
    for (const auto& c : s.confounds.segments) {
      segs.push_back({c.a.x, c.a.y, c.b.x, c.b.y});
      encounters.push_back(c.encounter);
    }
    rows.push_back({{"record_id", s.record_id},
                    {"svg", s.svg_path},
                    {"png", s.png_path},
                    {"glyphs", s.glyphs},
                    {"confound_segments", segs},
                    {"confound_encounters", encounters},
                    {"requested_confounds", s.requested_confounds},
                    {"glyph_seed", s.glyph_seed},
                    {"confound_seed", s.confound_seed}});
  }
  write_jsonl(path, rows);
}

std::vector<SceneRecord> read_scenes(const std::string& path) {
  std::vector<SceneRecord> out;
  for (const auto& row : read_jsonl(path)) {
    try {
      SceneRecord s;
      s.record_id = row.at("record_id").get<int64_t>();
      s.svg_path = row.at("svg").get<std::string>();
      s.png_path = row.at("png").get<std::string>();
      s.glyphs = row.at("glyphs").get<std::vector<std::string>>();
      const auto& segs = row.at("confound_segments");
      const auto& encs = row.at("confound_encounters");
      for (size_t i = 0; i < segs.size(); ++i) {
        Confound c;
        c.a = {segs[i][0].get<double>(), segs[i][1].get<double>()};
        c.b = {segs[i][2].get<double>(), segs[i][3].get<double>()};
        c.encounter = encs[i].get<int>();
        s.confounds.segments.push_back(c);
        if (c.encounter >= 0) s.confounds.encounter_token_indices.push_back(c.encounter);
      }
      std::sort(s.confounds.encounter_token_indices.begin(),
                s.confounds.encounter_token_indices.end());
      s.requested_confounds = row.at("requested_confounds").get<int>();
      s.glyph_seed = row.at("glyph_seed").get<uint64_t>();
      s.confound_seed = row.at("confound_seed").get<uint64_t>();
      out.push_back(std::move(s));
    } catch (const json::exception& e) {
      throw Error(ErrorKind::SchemaMismatch, path + ": " + e.what());
    }
  }
  return out;
}

}  // namespace pathbench
