#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pathbench/renderer.hpp"

namespace pathbench {

enum class LrFlag { lr, rl, ambiguous };
enum class Benchmark { main, reading_order };
enum class Regime { ltr_tb, rtl_tb, ttb_rl, ttb_lr };

const char* lr_flag_name(LrFlag f);
const char* benchmark_name(Benchmark b);
const char* regime_name(Regime r);
Regime regime_from_name(const std::string& name);

struct TaskMeta {
  int tbin = 0;
  int sbin = 0;
  int n_points = 0;
  int confound_count = 0;
  std::vector<int> crossing_tokens;             // second-pass anchors (default)
  std::vector<int> crossing_tokens_first_pass;  // first-pass anchors, stored alongside
  std::vector<int> confound_encounters;
  LrFlag lr = LrFlag::ambiguous;
  Benchmark benchmark = Benchmark::main;
  std::optional<Regime> regime;
  int lane_count = 0;
};

struct TaskInstance {
  std::string task_id;
  std::string image;  // scene reference (SVG path; PNG derived on demand)
  std::string start_token;
  std::vector<std::string> gold;
  int n = 0;
  std::string prompt_system;
  std::string prompt_user;
  TaskMeta meta;
};

std::vector<std::string> gold_sequence(const BackboneRecord& record, const GlyphAssignment& glyphs);

// Decision token for each crossing: the vertex emitted right after the second
// pass through the crossing point. Deduplicated, ascending.
std::vector<int> crossing_decision_tokens(const std::vector<Crossing>& crossings);
std::vector<int> crossing_first_pass_tokens(const std::vector<Crossing>& crossings);

LrFlag lr_flag(const Polyline& p);

// Byte-exact prompt pair with {START_TOKEN} and {N} substituted.
std::pair<std::string, std::string> build_prompt(int n, const std::string& start_token);

struct ReadingOrderLayout {
  Polyline path;
  std::vector<int> lane_of_vertex;
};

ReadingOrderLayout build_reading_order(Regime regime, int lane_count, int n_points,
                                       const GeometryConfig& g, uint64_t seed);

TaskInstance build_task(const std::string& task_id, const BackboneRecord& record,
                        const GlyphAssignment& glyphs, const ConfoundSet& confounds,
                        const std::string& image);

constexpr int kTaskSchemaVersion = 1;

void write_tasks(const std::string& path, const std::vector<TaskInstance>& tasks);
std::vector<TaskInstance> read_tasks(const std::string& path);

}  // namespace pathbench
