#include "pathbench/taskset.hpp"

#include <algorithm>
#include <cmath>

#include "pathbench/jsonl.hpp"
#include "pathbench/rng.hpp"

namespace pathbench {

const char* lr_flag_name(LrFlag f) {
  switch (f) {
    case LrFlag::lr: return "lr";
    case LrFlag::rl: return "rl";
    case LrFlag::ambiguous: return "ambiguous";
  }
  return "ambiguous";
}

const char* benchmark_name(Benchmark b) {
  return b == Benchmark::main ? "main" : "reading_order";
}

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::ltr_tb: return "ltr_tb";
    case Regime::rtl_tb: return "rtl_tb";
    case Regime::ttb_rl: return "ttb_rl";
    case Regime::ttb_lr: return "ttb_lr";
  }
  return "ltr_tb";
}

Regime regime_from_name(const std::string& name) {
  for (Regime r : {Regime::ltr_tb, Regime::rtl_tb, Regime::ttb_rl, Regime::ttb_lr})
    if (name == regime_name(r)) return r;
  throw Error(ErrorKind::SchemaMismatch, "unknown regime '" + name + "'");
}

std::vector<std::string> gold_sequence(const BackboneRecord& record,
                                       const GlyphAssignment& glyphs) {
  if (glyphs.size() != record.vertices.size())
    throw Error(ErrorKind::UsageError, "glyph count does not match vertex count");
  std::vector<std::string> out;
  out.reserve(glyphs.size());
  for (const auto& g : glyphs) out.push_back(glyph_text(g));
  return out;
}

std::vector<int> crossing_decision_tokens(const std::vector<Crossing>& crossings) {
  std::vector<int> out;
  for (const auto& c : crossings) out.push_back(c.second_pass_vertex);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<int> crossing_first_pass_tokens(const std::vector<Crossing>& crossings) {
  std::vector<int> out;
  for (const auto& c : crossings) out.push_back(c.first_pass_vertex);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

LrFlag lr_flag(const Polyline& p) {
  require_valid_polyline(p);
  double dx = p.back().x - p.front().x;
  if (std::fabs(dx) <= 1e-9) return LrFlag::ambiguous;
  return dx > 0 ? LrFlag::lr : LrFlag::rl;
}

std::pair<std::string, std::string> build_prompt(int n, const std::string& start_token) {
  if (n < 1) throw Error(ErrorKind::UsageError, "prompt needs n >= 1");
  std::string system =
      "You are a strict evaluation function. Output ONLY the final answer in the exact format "
      "requested. No preamble, no explanation, no coordinates, no bullets, no extra lines, no "
      "markdown/code fences.";
  std::string user =
      "You are shown a single polyline path with colored shape markers at each vertex. The path "
      "is a single continuous polyline (no branches). There is exactly one next marker at each "
      "step.\n\n"
      "The START of the path is the marker \"" + start_token + "\". This exact combo appears "
      "only once. Starting from START, follow the polyline continuously and list every marker "
      "you encounter in order until the path ends.\n\n"
      "You must output EXACTLY " + std::to_string(n) + " markers. If you are uncertain, still "
      "give your best guess---do not stop early.\n\n"
      "Each marker must be written exactly as: <color> <shape> (lowercase). Allowed colors: "
      "red, blue, green, orange, yellow, cyan, purple, brown. Allowed shapes: circle, square, "
      "tri, star, plus.\n\n"
      "Reply ONLY as a comma-separated list of exactly " + std::to_string(n) + " items. No "
      "extra words. No markdown/code fences.";
  return {system, user};
}

ReadingOrderLayout build_reading_order(Regime regime, int lane_count, int n_points,
                                       const GeometryConfig& g, uint64_t seed) {
  if (lane_count < 1 || n_points < lane_count)
    throw Error(ErrorKind::UsageError, "need n_points >= lane_count >= 1");
  Rng rng(seed);
  double S = g.spacing();
  double lo = g.margin_px, hi = g.view_px - g.margin_px;
  double span = hi - lo;

  std::vector<int> lane_sizes(static_cast<size_t>(lane_count), n_points / lane_count);
  for (int i = 0; i < n_points % lane_count; ++i) ++lane_sizes[static_cast<size_t>(i)];
  int max_lane = *std::max_element(lane_sizes.begin(), lane_sizes.end());
  double along_step = max_lane > 1 ? span / (max_lane - 1) : span;
  if (along_step < 1.1 * S)
    throw Error(ErrorKind::LayoutInfeasible, "lane spacing falls below glyph spacing");
  double lane_gap = lane_count > 1 ? span / (lane_count - 1) : 0.0;
  if (lane_count > 1 && lane_gap < 1.4 * S)
    throw Error(ErrorKind::LayoutInfeasible, "lane gap falls below glyph spacing");
  // seed jitter runs along the lane axis so the cross-lane coordinate stays
  // exactly constant within a lane
  double jitter_amp = std::clamp(0.42 * (along_step - 1.12 * S), 0.0, 0.3 * along_step);

  bool horizontal = (regime == Regime::ltr_tb || regime == Regime::rtl_tb);
  ReadingOrderLayout out;
  for (int lane = 0; lane < lane_count; ++lane) {
    int count = lane_sizes[static_cast<size_t>(lane)];
    double lane_pos;  // the fixed coordinate of this lane
    if (horizontal) {
      lane_pos = lane_count > 1 ? lo + lane * lane_gap : (lo + hi) / 2.0;
    } else {
      double x_lr = lane_count > 1 ? lo + lane * lane_gap : (lo + hi) / 2.0;
      lane_pos = (regime == Regime::ttb_lr) ? x_lr : (lo + hi) - x_lr;
    }
    double lane_span = count > 1 ? (count - 1) * along_step : 0.0;
    double start_along = lo + (span - lane_span) / 2.0;
    for (int i = 0; i < count; ++i) {
      double along = start_along + i * along_step + rng.uniform(-jitter_amp, jitter_amp);
      Point2 v;
      if (regime == Regime::ltr_tb) v = {along, lane_pos};
      if (regime == Regime::rtl_tb) v = {(lo + hi) - along, lane_pos};
      if (regime == Regime::ttb_lr || regime == Regime::ttb_rl) v = {lane_pos, along};
      out.path.push_back(v);
      out.lane_of_vertex.push_back(lane);
    }
  }

  auto report = check_constraints(out.path, g, true);
  if (!report.passed || !self_intersections(out.path).empty())
    throw Error(ErrorKind::LayoutInfeasible, "reading-order layout failed the constraint suite");
  return out;
}

TaskInstance build_task(const std::string& task_id, const BackboneRecord& record,
                        const GlyphAssignment& glyphs, const ConfoundSet& confounds,
                        const std::string& image) {
  TaskInstance t;
  t.task_id = task_id;
  t.image = image;
  t.start_token = glyph_text(start_glyph());
  t.gold = gold_sequence(record, glyphs);
  t.n = static_cast<int>(t.gold.size());
  auto prompts = build_prompt(t.n, t.start_token);
  t.prompt_system = prompts.first;
  t.prompt_user = prompts.second;
  auto crossings = self_intersections(record.vertices);
  t.meta.tbin = record.tbin;
  t.meta.sbin = record.sbin;
  t.meta.n_points = record.n_points;
  t.meta.confound_count = static_cast<int>(confounds.segments.size());
  t.meta.crossing_tokens = crossing_decision_tokens(crossings);
  t.meta.crossing_tokens_first_pass = crossing_first_pass_tokens(crossings);
  t.meta.confound_encounters = confounds.encounter_token_indices;
  t.meta.lr = lr_flag(record.vertices);
  return t;
}

void write_tasks(const std::string& path, const std::vector<TaskInstance>& tasks) {
  std::vector<json> rows;
  rows.reserve(tasks.size());
  for (const auto& t : tasks) {
    json meta{{"tbin", t.meta.tbin},
              {"sbin", t.meta.sbin},
              {"n_points", t.meta.n_points},
              {"confound_count", t.meta.confound_count},
              {"crossing_tokens", t.meta.crossing_tokens},
              {"crossing_tokens_first_pass", t.meta.crossing_tokens_first_pass},
              {"confound_encounters", t.meta.confound_encounters},
              {"lr_flag", lr_flag_name(t.meta.lr)},
              {"benchmark", benchmark_name(t.meta.benchmark)},
              {"lane_count", t.meta.lane_count}};
    meta["regime"] = t.meta.regime ? json(regime_name(*t.meta.regime)) : json(nullptr);
    rows.push_back({{"schema_version", kTaskSchemaVersion},
                    {"task_id", t.task_id},
                    {"image", t.image},
                    {"start_token", t.start_token},
                    {"gold", t.gold},
                    {"n", t.n},
                    {"prompt_system", t.prompt_system},
                    {"prompt_user", t.prompt_user},
                    {"meta", meta}});
  }
  write_jsonl(path, rows);
}

std::vector<TaskInstance> read_tasks(const std::string& path) {
  std::vector<TaskInstance> out;
  size_t line = 0;
  for (const auto& row : read_jsonl(path)) {
    ++line;
    try {
      int version = row.at("schema_version").get<int>();
      if (version != kTaskSchemaVersion)
        throw Error(ErrorKind::SchemaMismatch,
                    path + ":" + std::to_string(line) + ": task schema version " +
                        std::to_string(version) + " unsupported");
      TaskInstance t;
      t.task_id = row.at("task_id").get<std::string>();
      t.image = row.at("image").get<std::string>();
      t.start_token = row.at("start_token").get<std::string>();
      t.gold = row.at("gold").get<std::vector<std::string>>();
      t.n = row.at("n").get<int>();
      t.prompt_system = row.at("prompt_system").get<std::string>();
      t.prompt_user = row.at("prompt_user").get<std::string>();
      const auto& meta = row.at("meta");
      t.meta.tbin = meta.at("tbin").get<int>();
      t.meta.sbin = meta.at("sbin").get<int>();
      t.meta.n_points = meta.at("n_points").get<int>();
      t.meta.confound_count = meta.at("confound_count").get<int>();
      t.meta.crossing_tokens = meta.at("crossing_tokens").get<std::vector<int>>();
      t.meta.crossing_tokens_first_pass =
          meta.at("crossing_tokens_first_pass").get<std::vector<int>>();
      t.meta.confound_encounters = meta.at("confound_encounters").get<std::vector<int>>();
      std::string lr = meta.at("lr_flag").get<std::string>();
      t.meta.lr = lr == "lr" ? LrFlag::lr : (lr == "rl" ? LrFlag::rl : LrFlag::ambiguous);
      t.meta.benchmark = meta.at("benchmark").get<std::string>() == "reading_order"
                             ? Benchmark::reading_order
                             : Benchmark::main;
      if (!meta.at("regime").is_null())
        t.meta.regime = regime_from_name(meta.at("regime").get<std::string>());
      t.meta.lane_count = meta.at("lane_count").get<int>();
      out.push_back(std::move(t));
    } catch (const Error&) {
      throw;
    } catch (const json::exception& e) {
      throw Error(ErrorKind::MalformedLine, path + ":" + std::to_string(line) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace pathbench
