#include "pathbench/preset.hpp"

#include <atomic>
#include <filesystem>
#include <iostream>
#include <functional>
#include <thread>

#include "pathbench/jsonl.hpp"
#include "pathbench/rng.hpp"
#include "pathbench/sha256.hpp"

namespace fs = std::filesystem;

namespace pathbench {

namespace {

GeometryConfig geometry_from_json(const json& j) {
  GeometryConfig g;
  if (j.contains("view_px")) g.view_px = j["view_px"].get<int>();
  if (j.contains("margin_px")) g.margin_px = j["margin_px"].get<double>();
  if (j.contains("glyph_radius")) g.glyph_radius = j["glyph_radius"].get<double>();
  if (j.contains("glyph_padding")) g.glyph_padding = j["glyph_padding"].get<double>();
  if (j.contains("stroke_width")) g.stroke_width = j["stroke_width"].get<double>();
  if (j.contains("min_segment_len")) g.min_segment_len = j["min_segment_len"].get<double>();
  if (j.contains("min_extent")) g.min_extent = j["min_extent"].get<double>();
  if (j.contains("min_nonlocal_sep")) g.min_nonlocal_sep = j["min_nonlocal_sep"].get<double>();
  if (j.contains("min_vertex_seg_sep"))
    g.min_vertex_seg_sep = j["min_vertex_seg_sep"].get<double>();
  if (j.contains("reversal_angle_min_deg"))
    g.reversal_angle_min_deg = j["reversal_angle_min_deg"].get<double>();
  if (j.contains("masking_radius")) g.masking_radius = j["masking_radius"].get<double>();
  if (j.contains("seam_avoidance")) g.seam_avoidance = j["seam_avoidance"].get<bool>();
  if (j.contains("seam_pitch")) g.seam_pitch = j["seam_pitch"].get<double>();
  if (j.contains("seam_pad")) g.seam_pad = j["seam_pad"].get<double>();
  return g;
}

}  // namespace

ExperimentPreset preset_from_json(const json& j) {
  ExperimentPreset p;
  if (j.contains("name")) p.name = j["name"].get<std::string>();
  if (j.contains("master_seed")) p.master_seed = j["master_seed"].get<uint64_t>();
  p.gen.master_seed = p.master_seed;
  if (j.contains("geometry")) p.gen.geom = geometry_from_json(j["geometry"]);

  if (!j.contains("grid")) throw Error(ErrorKind::SchemaMismatch, "preset needs a grid section");
  const auto& grid = j["grid"];
  if (grid.contains("cells")) {
    for (const auto& c : grid["cells"])
      p.gen.cells.push_back({c.at(0).get<int>(), c.at(1).get<int>(), c.at(2).get<int>(),
                             c.at(3).get<int>()});
  } else if (grid.contains("default")) {
    auto counts = grid["default"].value("point_counts", default_point_counts());
    int quota = grid["default"].value("quota", 8);
    p.gen.cells = default_grid(counts, quota);
  } else {
    throw Error(ErrorKind::SchemaMismatch, "grid needs 'cells' or 'default'");
  }
  if (grid.contains("skip"))
    for (const auto& s : grid["skip"])
      p.gen.skip_cells.push_back({s.at(0).get<int>(), s.at(1).get<int>()});
  if (grid.contains("bootstrap"))
    for (const auto& b : grid["bootstrap"])
      p.gen.bootstrap.push_back({b.at(0).get<int>(), b.at(1).get<int>(), b.at(2).get<int>(),
                                 b.at(3).get<int>()});
  p.gen.budget_per_cell = grid.value("budget_per_cell", 20000);

  if (j.contains("dedup")) {
    p.dedup_enabled = j["dedup"].value("enabled", true);
    p.gen.dedup_threshold = j["dedup"].value("threshold", 0.05);
    p.gen.dedup_max_reps = j["dedup"].value("max_reps", 25);
  }
  if (j.contains("confounds")) {
    p.confound_counts = j["confounds"].value("counts", std::vector<int>{0});
    p.confound_cfg.allow_crossing = j["confounds"].value("allow_crossing", false);
    p.confound_cfg.retry_budget = j["confounds"].value("retry_budget", 400);
  }
  p.glyph_variants = j.value("glyph_variants", 1);

  if (j.contains("reading_order")) {
    const auto& ro = j["reading_order"];
    p.reading_order_enabled = ro.value("enabled", true);
    if (ro.contains("regimes")) {
      p.ro_regimes.clear();
      for (const auto& r : ro["regimes"]) p.ro_regimes.push_back(regime_from_name(r));
    }
    if (ro.contains("lanes")) p.ro_lanes = ro["lanes"].get<std::vector<int>>();
    if (ro.contains("points")) p.ro_points = ro["points"].get<std::vector<int>>();
    p.ro_per_combo = ro.value("per_combo", 3);
  }

  if (j.contains("agent")) {
    const auto& a = j["agent"];
    p.agent = agent_from_string(a.value("kind", "oracle"));
    p.agent.q_cross = a.value("q_cross", 0.0);
    p.agent.q_confound = a.value("q_confound", 0.0);
    p.agent.seed = a.value("seed", p.master_seed);
    p.agent_label = a.value("label", a.value("kind", "oracle"));
  }
  p.analyses = j.value("analyses", std::vector<std::string>{"cells", "answer_rate"});
  p.raster = j.value("raster", false);
  return p;
}

ExperimentPreset load_preset(const std::string& path) {
  try {
    return preset_from_json(json::parse(read_text_file(path)));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::SchemaMismatch, path + ": " + e.what());
  }
}

namespace {

struct SceneJob {
  const BackboneRecord* record;
  int k;
  int variant;
};

void parallel_for(size_t count, int jobs, const std::function<void(size_t)>& fn) {
  if (jobs <= 1 || count <= 1) {
    for (size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      size_t i = next.fetch_add(1);
      if (i >= count) return;
      fn(i);
    }
  };
  std::vector<std::thread> threads;
  int nthreads = std::min<size_t>(static_cast<size_t>(jobs), count);
  for (int t = 0; t < nthreads; ++t) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
}

}  // namespace

PresetResult run_preset(const ExperimentPreset& preset, const std::string& out_dir, int jobs) {
  if (jobs < 1) jobs = static_cast<int>(std::thread::hardware_concurrency());
  if (jobs < 1) jobs = 1;
  fs::create_directories(out_dir);
  fs::create_directories(fs::path(out_dir) / "scenes");
  fs::create_directories(fs::path(out_dir) / "analysis");
  auto rel = [&](const std::string& name) { return (fs::path(out_dir) / name).string(); };

  std::cerr << "[preset " << preset.name << "] generating backbones\n";
  GridResult grid = generate_grid(preset.gen, jobs);
  write_backbones(rel("backbones.jsonl"), grid.records);
  write_coverage_csv(rel("coverage.csv"), grid.cells);
  for (const auto& r : read_backbones(rel("backbones.jsonl"))) {
    auto problems = validate_record(r, preset.gen.geom);
    if (!problems.empty())
      throw Error(ErrorKind::SchemaMismatch, "[gen-backbones] " + problems.front());
  }

  std::vector<BackboneRecord> records = grid.records;
  if (preset.dedup_enabled) {
    std::map<std::tuple<int, int, int>, std::vector<BackboneRecord>> per_cell;
    for (const auto& r : records) per_cell[{r.tbin, r.sbin, r.n_points}].push_back(r);
    records.clear();
    for (auto& [cell, rs] : per_cell) {
      auto kept = dedup(rs, preset.gen.dedup_threshold, preset.gen.dedup_max_reps);
      records.insert(records.end(), kept.begin(), kept.end());
    }
    std::sort(records.begin(), records.end(),
              [](const BackboneRecord& a, const BackboneRecord& b) { return a.id < b.id; });
    write_backbones(rel("backbones_dedup.jsonl"), records);
  }

  std::cerr << "[preset " << preset.name << "] rendering " << records.size() << " backbones\n";
  std::vector<SceneJob> jobs_list;
  for (const auto& r : records)
    for (int k : preset.confound_counts)
      for (int v = 0; v < preset.glyph_variants; ++v) jobs_list.push_back({&r, k, v});

  std::vector<SceneRecord> scenes(jobs_list.size());
  std::vector<TaskInstance> tasks(jobs_list.size());
  std::vector<char> scene_ok(jobs_list.size(), 0);
  SceneSpec spec = scene_from_geometry(preset.gen.geom);
  parallel_for(jobs_list.size(), jobs, [&](size_t i) {
    const SceneJob& job = jobs_list[i];
    const BackboneRecord& r = *job.record;
    uint64_t glyph_seed = mix_seed({preset.master_seed, 101, static_cast<uint64_t>(r.id),
                                    static_cast<uint64_t>(job.variant)});
    uint64_t conf_seed = mix_seed({preset.master_seed, 202, static_cast<uint64_t>(r.id),
                                   static_cast<uint64_t>(job.k),
                                   static_cast<uint64_t>(job.variant)});
    GlyphAssignment glyphs = assign_glyphs(r.n_points, glyph_seed);
    ConfoundSet confounds;
    if (job.k > 0) {
      try {
        confounds = place_confounds(r, job.k, preset.gen.geom, preset.confound_cfg, conf_seed);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::PlacementInfeasible) throw;
        return;  // scene dropped, slot stays unset
      }
    }
    std::string stem = "scenes/scene_" + std::to_string(r.id) + "_k" + std::to_string(job.k) +
                       "_v" + std::to_string(job.variant);
    std::string svg = render_svg(r, glyphs, confounds, spec);
    write_text_file(rel(stem + ".svg"), svg);
    SceneRecord scene;
    scene.record_id = r.id;
    scene.svg_path = stem + ".svg";
    if (preset.raster) {
      rasterize(svg, rel(stem + ".png"));
      scene.png_path = stem + ".png";
    }
    for (const auto& g : glyphs) scene.glyphs.push_back(glyph_text(g));
    scene.confounds = confounds;
    scene.requested_confounds = job.k;
    scene.glyph_seed = glyph_seed;
    scene.confound_seed = conf_seed;
    scenes[i] = std::move(scene);
    std::string task_id = "t" + std::to_string(r.id) + "_k" + std::to_string(job.k) + "_v" +
                          std::to_string(job.variant);
    tasks[i] = build_task(task_id, r, glyphs, confounds, stem + ".svg");
    scene_ok[i] = 1;
  });

  std::vector<SceneRecord> kept_scenes;
  std::vector<TaskInstance> kept_tasks;
  for (size_t i = 0; i < jobs_list.size(); ++i)
    if (scene_ok[i]) {
      kept_scenes.push_back(std::move(scenes[i]));
      kept_tasks.push_back(std::move(tasks[i]));
    }

  if (preset.reading_order_enabled) {
    for (Regime regime : preset.ro_regimes)
      for (int lanes : preset.ro_lanes)
        for (int n : preset.ro_points)
          for (int i = 0; i < preset.ro_per_combo; ++i) {
            uint64_t seed = mix_seed({preset.master_seed, 303,
                                      static_cast<uint64_t>(regime), static_cast<uint64_t>(lanes),
                                      static_cast<uint64_t>(n), static_cast<uint64_t>(i)});
            auto layout = build_reading_order(regime, lanes, n, preset.gen.geom, seed);
            BackboneRecord r;
            r.id = 1000000 + static_cast<int64_t>(kept_scenes.size());
            r.family = FamilyKind::proposal_walk;
            r.vertices = layout.path;
            r.tortuosity = tortuosity(layout.path);
            r.crossings = 0;
            r.tbin = bin_tortuosity(r.tortuosity);
            r.sbin = 0;
            r.n_points = n;
            r.seed = seed;
            GlyphAssignment glyphs = assign_glyphs(n, mix_seed({seed, 1}));
            std::string stem = "scenes/ro_" + std::string(regime_name(regime)) + "_l" +
                               std::to_string(lanes) + "_n" + std::to_string(n) + "_i" +
                               std::to_string(i);
            std::string svg = render_svg(r, glyphs, {}, spec);
            write_text_file(rel(stem + ".svg"), svg);
            SceneRecord scene;
            scene.record_id = r.id;
            scene.svg_path = stem + ".svg";
            if (preset.raster) {
              rasterize(svg, rel(stem + ".png"));
              scene.png_path = stem + ".png";
            }
            for (const auto& g : glyphs) scene.glyphs.push_back(glyph_text(g));
            scene.glyph_seed = mix_seed({seed, 1});
            scene.confound_seed = 0;
            kept_scenes.push_back(scene);
            std::string task_id = "ro_" + std::string(regime_name(regime)) + "_l" +
                                  std::to_string(lanes) + "_n" + std::to_string(n) + "_i" +
                                  std::to_string(i);
            TaskInstance t = build_task(task_id, r, glyphs, {}, stem + ".svg");
            t.meta.benchmark = Benchmark::reading_order;
            t.meta.regime = regime;
            t.meta.lane_count = lanes;
            kept_tasks.push_back(std::move(t));
          }
  }

  write_scenes(rel("scenes.jsonl"), kept_scenes);
  read_scenes(rel("scenes.jsonl"));
  write_tasks(rel("tasks.jsonl"), kept_tasks);
  auto reread_tasks = read_tasks(rel("tasks.jsonl"));
  if (reread_tasks.size() != kept_tasks.size())
    throw Error(ErrorKind::SchemaMismatch, "[build-tasks] round-trip lost tasks");

  std::cerr << "[preset " << preset.name << "] evaluating " << kept_tasks.size() << " tasks\n";
  if (fs::exists(rel("evals.jsonl"))) fs::remove(rel("evals.jsonl"));
  PresetResult result;
  result.summary = run_eval(kept_tasks, preset.agent, rel("evals.jsonl"), preset.agent_label);
  auto evals = read_evals(rel("evals.jsonl"));

  Dataset ds = join_dataset(std::move(reread_tasks), std::move(evals));
  for (const auto& kind : preset.analyses) {
    if (kind == "cells") {
      write_cell_table_csv(rel("analysis/cells_em.csv"), cell_table(ds, Metric::em), Metric::em);
      write_cell_table_csv(rel("analysis/cells_tok_acc.csv"), cell_table(ds, Metric::tok_acc),
                           Metric::tok_acc);
    } else if (kind == "windows") {
      std::vector<WindowCurve> curves;
      for (int k = 1; k <= 4; ++k) {
        try {
          curves.push_back(crossing_windows(ds, k, 3));
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::InsufficientData) throw;
        }
      }
      write_window_curves_csv(rel("analysis/crossing_windows.csv"), curves);
    } else if (kind == "prefix") {
      write_prefix_control_csv(rel("analysis/prefix_control.csv"), matched_prefix_control(ds));
    } else if (kind == "confounds") {
      write_confound_curves_csv(rel("analysis/confound_local.csv"),
                                rel("analysis/confound_cumulative.csv"), confound_curves(ds, 3));
    } else if (kind == "ols") {
      write_regression_csv(rel("analysis/ols_tok_acc.csv"), ols(ds, false, Metric::tok_acc));
      write_regression_csv(rel("analysis/ols_em.csv"), ols(ds, false, Metric::em));
      try {
        write_regression_csv(rel("analysis/ols_tok_acc_lr.csv"), ols(ds, true, Metric::tok_acc));
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::RankDeficient) throw;
      }
    } else if (kind == "regimes") {
      write_regime_deltas_csv(rel("analysis/regime_deltas.csv"), regime_deltas(ds));
    } else if (kind == "answer_rate") {
      write_answer_rate_csv(rel("analysis/answer_rate.csv"), answer_rate_tables(ds, {"model"}),
                            {"model"});
    } else {
      throw Error(ErrorKind::UsageError, "unknown analysis '" + kind + "'");
    }
  }

  // manifest: config + digest of every artifact; no timestamps so reruns match
  json manifest;
  manifest["preset"] = preset.name;
  manifest["master_seed"] = preset.master_seed;
  json digests = json::object();
  std::vector<std::string> files;
  for (const auto& entry : fs::recursive_directory_iterator(out_dir)) {
    if (!entry.is_regular_file()) continue;
    std::string relpath = fs::relative(entry.path(), out_dir).string();
    if (relpath == "manifest.json") continue;
    files.push_back(relpath);
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    std::string digest = sha256_file_hex((fs::path(out_dir) / f).string());
    digests[f] = digest;
    result.digests[f] = digest;
  }
  manifest["digests"] = digests;
  write_text_file(rel("manifest.json"), manifest.dump(2) + "\n");
  return result;
}

}  // namespace pathbench
