#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <vector>

#include "pathbench/renderer.hpp"

// Software rasterizer for the SVG dialect emitted by render_svg. One sample
// per pixel, no anti-aliasing.

namespace pathbench {

namespace {

struct Rgb {
  uint8_t r, g, b;
};

Rgb color_value(const std::string& name) {
  static const std::map<std::string, Rgb> table = {
      {"white", {255, 255, 255}}, {"black", {0, 0, 0}},       {"red", {255, 0, 0}},
      {"blue", {0, 0, 255}},      {"green", {0, 128, 0}},     {"orange", {255, 165, 0}},
      {"yellow", {255, 255, 0}},  {"cyan", {0, 255, 255}},    {"purple", {128, 0, 128}},
      {"brown", {165, 42, 42}},
  };
  auto it = table.find(name);
  if (it == table.end()) throw Error(ErrorKind::SvgParse, "unknown color '" + name + "'");
  return it->second;
}

struct Element {
  std::string tag;
  std::map<std::string, std::string> attrs;
};

std::vector<Element> parse_elements(const std::string& svg) {
  std::vector<Element> out;
  size_t pos = 0;
  while ((pos = svg.find('<', pos)) != std::string::npos) {
    size_t end = svg.find('>', pos);
    if (end == std::string::npos) throw Error(ErrorKind::SvgParse, "unterminated tag");
    std::string body = svg.substr(pos + 1, end - pos - 1);
    pos = end + 1;
    if (!body.empty() && body.back() == '/') body.pop_back();
    if (body.empty() || body[0] == '/' || body[0] == '?' || body[0] == '!') continue;
    Element el;
    size_t sp = body.find_first_of(" \t\n");
    el.tag = body.substr(0, sp);
    while (sp != std::string::npos) {
      size_t name_start = body.find_first_not_of(" \t\n", sp);
      if (name_start == std::string::npos) break;
      size_t eq = body.find('=', name_start);
      if (eq == std::string::npos) throw Error(ErrorKind::SvgParse, "attribute without value");
      size_t q1 = body.find('"', eq);
      size_t q2 = q1 == std::string::npos ? std::string::npos : body.find('"', q1 + 1);
      if (q2 == std::string::npos) throw Error(ErrorKind::SvgParse, "unquoted attribute");
      el.attrs[body.substr(name_start, eq - name_start)] = body.substr(q1 + 1, q2 - q1 - 1);
      sp = q2 + 1;
    }
    out.push_back(std::move(el));
  }
  if (out.empty() || out[0].tag != "svg") throw Error(ErrorKind::SvgParse, "missing <svg> root");
  return out;
}

double attr_num(const Element& el, const std::string& key) {
  auto it = el.attrs.find(key);
  if (it == el.attrs.end())
    throw Error(ErrorKind::SvgParse, el.tag + " missing attribute " + key);
  try {
    return std::stod(it->second);
  } catch (const std::exception&) {
    throw Error(ErrorKind::SvgParse, "bad number in " + key);
  }
}

std::string attr_str(const Element& el, const std::string& key) {
  auto it = el.attrs.find(key);
  if (it == el.attrs.end())
    throw Error(ErrorKind::SvgParse, el.tag + " missing attribute " + key);
  return it->second;
}

std::vector<Point2> parse_points(const std::string& s) {
  std::vector<Point2> pts;
  size_t pos = 0;
  while (pos < s.size()) {
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\n')) ++pos;
    if (pos >= s.size()) break;
    size_t comma = s.find(',', pos);
    if (comma == std::string::npos) throw Error(ErrorKind::SvgParse, "bad points list");
    size_t end = s.find(' ', comma);
    if (end == std::string::npos) end = s.size();
    try {
      pts.push_back({std::stod(s.substr(pos, comma - pos)),
                     std::stod(s.substr(comma + 1, end - comma - 1))});
    } catch (const std::exception&) {
      throw Error(ErrorKind::SvgParse, "bad coordinate in points list");
    }
    pos = end;
  }
  return pts;
}

class Canvas {
 public:
  Canvas(int w, int h) : w_(w), h_(h), px_(static_cast<size_t>(w) * h * 3, 255) {}

  void fill_rect(double x, double y, double w, double h, Rgb c) {
    int x0 = std::max(0, static_cast<int>(std::floor(x)));
    int y0 = std::max(0, static_cast<int>(std::floor(y)));
    int x1 = std::min(w_, static_cast<int>(std::ceil(x + w)));
    int y1 = std::min(h_, static_cast<int>(std::ceil(y + h)));
    for (int py = y0; py < y1; ++py)
      for (int px = x0; px < x1; ++px) set(px, py, c);
  }

  void fill_circle(double cx, double cy, double r, Rgb c) {
    int x0 = std::max(0, static_cast<int>(cx - r - 1));
    int y0 = std::max(0, static_cast<int>(cy - r - 1));
    int x1 = std::min(w_, static_cast<int>(cx + r + 2));
    int y1 = std::min(h_, static_cast<int>(cy + r + 2));
    for (int py = y0; py < y1; ++py)
      for (int px = x0; px < x1; ++px) {
        double dx = px + 0.5 - cx, dy = py + 0.5 - cy;
        if (dx * dx + dy * dy <= r * r) set(px, py, c);
      }
  }

  void fill_polygon(const std::vector<Point2>& pts, Rgb c) {
    double miny = 1e18, maxy = -1e18;
    for (auto p : pts) {
      miny = std::min(miny, p.y);
      maxy = std::max(maxy, p.y);
    }
    int y0 = std::max(0, static_cast<int>(std::floor(miny)));
    int y1 = std::min(h_, static_cast<int>(std::ceil(maxy)) + 1);
    for (int py = y0; py < y1; ++py) {
      double yc = py + 0.5;
      std::vector<double> xs;
      for (size_t i = 0; i < pts.size(); ++i) {
        Point2 a = pts[i], b = pts[(i + 1) % pts.size()];
        if ((a.y <= yc && b.y > yc) || (b.y <= yc && a.y > yc))
          xs.push_back(a.x + (yc - a.y) / (b.y - a.y) * (b.x - a.x));
      }
      std::sort(xs.begin(), xs.end());
      for (size_t i = 0; i + 1 < xs.size(); i += 2) {
        int x0 = std::max(0, static_cast<int>(std::ceil(xs[i] - 0.5)));
        int x1 = std::min(w_, static_cast<int>(std::floor(xs[i + 1] - 0.5)) + 1);
        for (int px = x0; px < x1; ++px) set(px, py, c);
      }
    }
  }

  void stroke_segment(Point2 a, Point2 b, double width, Rgb c) {
    double hw = width / 2.0;
    int x0 = std::max(0, static_cast<int>(std::min(a.x, b.x) - hw - 1));
    int y0 = std::max(0, static_cast<int>(std::min(a.y, b.y) - hw - 1));
    int x1 = std::min(w_, static_cast<int>(std::max(a.x, b.x) + hw + 2));
    int y1 = std::min(h_, static_cast<int>(std::max(a.y, b.y) + hw + 2));
    for (int py = y0; py < y1; ++py)
      for (int px = x0; px < x1; ++px)
        if (dist_point_segment({px + 0.5, py + 0.5}, a, b) <= hw) set(px, py, c);
  }

  int width() const { return w_; }
  int height() const { return h_; }
  const std::vector<uint8_t>& pixels() const { return px_; }

 private:
  void set(int x, int y, Rgb c) {
    size_t i = (static_cast<size_t>(y) * w_ + x) * 3;
    px_[i] = c.r;
    px_[i + 1] = c.g;
    px_[i + 2] = c.b;
  }

  int w_, h_;
  std::vector<uint8_t> px_;
};

void put_u32(std::string& s, uint32_t v) {
  s.push_back(static_cast<char>(v >> 24));
  s.push_back(static_cast<char>(v >> 16));
  s.push_back(static_cast<char>(v >> 8));
  s.push_back(static_cast<char>(v));
}

void put_chunk(std::string& out, const char type[4], const std::string& data) {
  put_u32(out, static_cast<uint32_t>(data.size()));
  std::string body(type, 4);
  body += data;
  out += body;
  uint32_t crc = static_cast<uint32_t>(
      ::crc32(0, reinterpret_cast<const Bytef*>(body.data()), static_cast<uInt>(body.size())));
  put_u32(out, crc);
}

std::string encode_png(const Canvas& canvas) {
  int w = canvas.width(), h = canvas.height();
  std::string raw;
  raw.reserve(static_cast<size_t>(h) * (1 + 3 * w));
  for (int y = 0; y < h; ++y) {
    raw.push_back('\0');  // filter type 0
    raw.append(reinterpret_cast<const char*>(canvas.pixels().data() + static_cast<size_t>(y) * w * 3),
               static_cast<size_t>(w) * 3);
  }
  uLongf bound = compressBound(static_cast<uLong>(raw.size()));
  std::string compressed(bound, '\0');
  if (compress2(reinterpret_cast<Bytef*>(compressed.data()), &bound,
                reinterpret_cast<const Bytef*>(raw.data()), static_cast<uLong>(raw.size()),
                9) != Z_OK)
    throw Error(ErrorKind::IoError, "zlib compression failed");
  compressed.resize(bound);

  std::string png("\x89PNG\r\n\x1a\n", 8);
  std::string ihdr;
  put_u32(ihdr, static_cast<uint32_t>(w));
  put_u32(ihdr, static_cast<uint32_t>(h));
  ihdr += '\x08';  // bit depth
  ihdr += '\x02';  // truecolor
  ihdr += '\x00';
  ihdr += '\x00';
  ihdr += '\x00';
  put_chunk(png, "IHDR", ihdr);
  put_chunk(png, "IDAT", compressed);
  put_chunk(png, "IEND", "");
  return png;
}

}  // namespace

void rasterize(const std::string& svg_text, const std::string& out_path) {
  auto elements = parse_elements(svg_text);
  int w = static_cast<int>(attr_num(elements[0], "width"));
  int h = static_cast<int>(attr_num(elements[0], "height"));
  if (w <= 0 || h <= 0 || w > 8192 || h > 8192)
    throw Error(ErrorKind::SvgParse, "bad canvas size");
  Canvas canvas(w, h);

  for (size_t i = 1; i < elements.size(); ++i) {
    const Element& el = elements[i];
    if (el.tag == "g") continue;
    if (el.tag == "rect") {
      canvas.fill_rect(attr_num(el, "x"), attr_num(el, "y"), attr_num(el, "width"),
                       attr_num(el, "height"), color_value(attr_str(el, "fill")));
    } else if (el.tag == "circle") {
      canvas.fill_circle(attr_num(el, "cx"), attr_num(el, "cy"), attr_num(el, "r"),
                         color_value(attr_str(el, "fill")));
    } else if (el.tag == "polygon") {
      canvas.fill_polygon(parse_points(attr_str(el, "points")),
                          color_value(attr_str(el, "fill")));
    } else if (el.tag == "polyline") {
      auto pts = parse_points(attr_str(el, "points"));
      double width = attr_num(el, "stroke-width");
      Rgb c = color_value(attr_str(el, "stroke"));
      for (size_t j = 1; j < pts.size(); ++j)
        canvas.stroke_segment(pts[j - 1], pts[j], width, c);
    } else if (el.tag == "line") {
      canvas.stroke_segment({attr_num(el, "x1"), attr_num(el, "y1")},
                            {attr_num(el, "x2"), attr_num(el, "y2")},
                            attr_num(el, "stroke-width"), color_value(attr_str(el, "stroke")));
    } else {
      throw Error(ErrorKind::SvgParse, "unsupported element <" + el.tag + ">");
    }
  }

  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + out_path);
  std::string png = encode_png(canvas);
  out.write(png.data(), static_cast<std::streamsize>(png.size()));
}

}  // namespace pathbench
