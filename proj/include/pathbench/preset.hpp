#pragma once

#include <map>
#include <string>
#include <vector>

#include "pathbench/analysis.hpp"

namespace pathbench {

struct ExperimentPreset {
  std::string name = "unnamed";
  uint64_t master_seed = 0;
  GeneratorConfig gen;
  bool dedup_enabled = true;
  std::vector<int> confound_counts = {0};
  ConfoundConfig confound_cfg;
  int glyph_variants = 1;
  bool reading_order_enabled = false;
  std::vector<Regime> ro_regimes = {Regime::ltr_tb, Regime::rtl_tb, Regime::ttb_rl,
                                    Regime::ttb_lr};
  std::vector<int> ro_lanes = {1, 2, 3};
  std::vector<int> ro_points = {9, 15};
  int ro_per_combo = 3;
  AgentSpec agent;
  std::string agent_label = "oracle";
  std::vector<std::string> analyses;  // cells, windows, prefix, confounds, ols, regimes, answer_rate
  bool raster = false;
};

ExperimentPreset preset_from_json(const nlohmann::json& j);
ExperimentPreset load_preset(const std::string& path);

struct PresetResult {
  std::map<std::string, std::string> digests;  // relative path -> sha256
  EvalSummary summary;
};

// Runs generate -> dedup -> render -> tasks -> eval -> analyses into out_dir,
// validating each stage's output through its reader, and writes a manifest
// whose digests are reproducible for any job count.
PresetResult run_preset(const ExperimentPreset& preset, const std::string& out_dir, int jobs);

}  // namespace pathbench
