#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <map>
#include <thread>

#include "pathbench/jsonl.hpp"
#include "pathbench/preset.hpp"
#include "pathbench/rng.hpp"
#include "pathbench/sha256.hpp"

namespace fs = std::filesystem;
using namespace pathbench;

namespace {

struct GlobalOpts {
  std::string config_path;
  int jobs = 0;
  json config = json::object();
};

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::TransportError:
    case ErrorKind::AuthError:
    case ErrorKind::Timeout:
      return 4;
    case ErrorKind::IoError:
      return 5;
    case ErrorKind::UsageError:
      return 2;
    default:
      return 3;
  }
}

GeometryConfig geometry_from_config(const json& cfg) {
  GeometryConfig g;
  if (!cfg.contains("geometry")) return g;
  const auto& j = cfg["geometry"];
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

EndpointConfig endpoint_from_config(const json& cfg, const std::string& name) {
  if (!cfg.contains("endpoints"))
    throw Error(ErrorKind::UsageError, "config has no endpoints section");
  for (const auto& e : cfg["endpoints"]) {
    if (e.value("name", "") != name && cfg["endpoints"].size() > 1) continue;
    EndpointConfig ep;
    ep.base_url = e.at("base_url").get<std::string>();
    ep.model_name = e.at("model_name").get<std::string>();
    ep.auth_env = e.value("auth_env", "");
    if (e.contains("params")) ep.params = e["params"];
    ep.max_in_flight = e.value("max_in_flight", 4);
    ep.max_retries = e.value("max_retries", 3);
    ep.backoff_initial_s = e.value("backoff_initial_s", 1.0);
    ep.timeout_s = e.value("timeout_s", 120.0);
    return ep;
  }
  throw Error(ErrorKind::UsageError, "no endpoint named '" + name + "' in config");
}

std::vector<int> parse_int_list(const std::string& csv) {
  std::vector<int> out;
  size_t pos = 0;
  while (pos < csv.size()) {
    size_t comma = csv.find(',', pos);
    if (comma == std::string::npos) comma = csv.size();
    out.push_back(std::stoi(csv.substr(pos, comma - pos)));
    pos = comma + 1;
  }
  return out;
}

int validate_file(const std::string& path, const GeometryConfig& g) {
  auto rows = read_jsonl(path);
  if (rows.empty()) {
    std::cerr << "error kind=UsageError stage=validate msg=\"empty file\"\n";
    return 3;
  }
  int failures = 0;
  if (rows.front().contains("family")) {
    for (const auto& r : read_backbones(path)) {
      for (const auto& msg : validate_record(r, g)) {
        std::cerr << "error kind=ValidationFailure stage=validate msg=\"" << msg << "\"\n";
        ++failures;
      }
    }
    std::cout << "validated " << rows.size() << " backbone records\n";
  } else if (rows.front().contains("gold")) {
    auto tasks = read_tasks(path);
    for (const auto& t : tasks) {
      if (static_cast<int>(t.gold.size()) != t.n) {
        std::cerr << "error kind=ValidationFailure stage=validate msg=\"task " << t.task_id
                  << ": gold length != n\"\n";
        ++failures;
      }
      if (t.gold.empty() || t.gold.front() != glyph_text(start_glyph())) {
        std::cerr << "error kind=ValidationFailure stage=validate msg=\"task " << t.task_id
                  << ": gold does not start with the start token\"\n";
        ++failures;
      }
      for (int d : t.meta.crossing_tokens)
        if (d < 1 || d >= t.n) {
          std::cerr << "error kind=ValidationFailure stage=validate msg=\"task " << t.task_id
                    << ": crossing token out of range\"\n";
          ++failures;
        }
    }
    std::cout << "validated " << tasks.size() << " tasks\n";
  } else {
    std::cerr << "error kind=UsageError stage=validate msg=\"unrecognized file schema\"\n";
    return 3;
  }
  return failures == 0 ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Procedural path-traversal benchmark generator and evaluation harness"};
  app.require_subcommand(1);
  GlobalOpts global;
  app.add_option("--config", global.config_path, "JSON config file");
  app.add_option("--jobs", global.jobs, "worker count (0 = hardware parallelism)");

  std::string stage = "startup";
  try {
    // ---- gen-backbones
    auto* gen = app.add_subcommand("gen-backbones", "Generate accepted polyline backbones");
    struct {
      std::string grid = "default";
      std::string points = "9,11,13,15,17";
      std::string skip;
      uint64_t seed = 0;
      int quota = 8;
      int budget = 20000;
      std::string out = "backbones.jsonl";
      std::string coverage;
    } gb;
    gen->add_option("--grid", gb.grid, "'default' or a JSON file with [[t,s,n,quota],...]");
    gen->add_option("--points", gb.points, "point counts for the default grid");
    gen->add_option("--quota", gb.quota, "records per cell for the default grid");
    gen->add_option("--seed", gb.seed, "master seed");
    gen->add_option("--budget", gb.budget, "attempt budget per cell");
    gen->add_option("--skip", gb.skip, "a-priori skipped cells, e.g. '0,4;0,5'");
    gen->add_option("--out", gb.out, "backbone JSONL output");
    gen->add_option("--coverage", gb.coverage, "coverage CSV output (default <out>.coverage.csv)");

    // ---- dedup
    auto* dd = app.add_subcommand("dedup", "Near-duplicate filtering within each cell");
    struct {
      std::string in, out;
      double threshold = 0.05;
      int max_reps = 25;
    } ddo;
    dd->add_option("--in", ddo.in, "backbone JSONL input")->required();
    dd->add_option("--out", ddo.out, "filtered JSONL output")->required();
    dd->add_option("--threshold", ddo.threshold, "signature distance threshold");
    dd->add_option("--max-reps", ddo.max_reps, "max representatives per cell");

    // ---- render
    auto* rd = app.add_subcommand("render", "Render scenes (glyphs + confounds) to SVG");
    struct {
      std::string backbones, out_dir = "scenes", scenes = "scenes.jsonl";
      std::string confounds = "0";
      int variants = 1;
      uint64_t seed = 0;
      bool raster = false;
    } rdo;
    rd->add_option("--backbones", rdo.backbones)->required();
    rd->add_option("--out-dir", rdo.out_dir, "directory for SVG files");
    rd->add_option("--scenes", rdo.scenes, "scene manifest JSONL output");
    rd->add_option("--confounds", rdo.confounds, "comma list of confound counts per record");
    rd->add_option("--variants", rdo.variants, "glyph assignments per (record, k)");
    rd->add_option("--seed", rdo.seed);
    rd->add_flag("--raster", rdo.raster, "also write 672x672 PNGs");

    // ---- build-tasks
    auto* bt = app.add_subcommand("build-tasks", "Assemble task instances from scenes");
    struct {
      std::string backbones, scenes, out = "tasks.jsonl";
    } bto;
    bt->add_option("--backbones", bto.backbones)->required();
    bt->add_option("--scenes", bto.scenes)->required();
    bt->add_option("--out", bto.out);

    // ---- gen-reading-order
    auto* ro = app.add_subcommand("gen-reading-order", "Generate the auxiliary reading-order tasks");
    struct {
      std::string regimes = "ltr_tb,rtl_tb,ttb_rl,ttb_lr";
      std::string lanes = "1,2,3";
      std::string points = "9,15";
      int per_combo = 3;
      uint64_t seed = 0;
      std::string out_dir = "scenes";
      std::string tasks = "reading_tasks.jsonl";
      std::string scenes = "reading_scenes.jsonl";
      bool raster = false;
    } roo;
    ro->add_option("--regimes", roo.regimes);
    ro->add_option("--lanes", roo.lanes);
    ro->add_option("--points", roo.points);
    ro->add_option("--per-combo", roo.per_combo);
    ro->add_option("--seed", roo.seed);
    ro->add_option("--out-dir", roo.out_dir);
    ro->add_option("--tasks", roo.tasks);
    ro->add_option("--scenes", roo.scenes);
    ro->add_flag("--raster", roo.raster);

    // ---- eval
    auto* ev = app.add_subcommand("eval", "Run an agent over tasks and score");
    struct {
      std::string tasks, out = "evals.jsonl", agent = "oracle", endpoint_name, label;
      double q_cross = 0.0, q_confound = 0.0;
      uint64_t seed = 0;
    } evo;
    ev->add_option("--tasks", evo.tasks)->required();
    ev->add_option("--out", evo.out);
    ev->add_option("--agent", evo.agent, "oracle | noisy | endpoint");
    ev->add_option("--q-cross", evo.q_cross);
    ev->add_option("--q-confound", evo.q_confound);
    ev->add_option("--seed", evo.seed);
    ev->add_option("--endpoint", evo.endpoint_name, "endpoint name from --config");
    ev->add_option("--model-label", evo.label, "model column value in eval records");

    // ---- score
    auto* sc = app.add_subcommand("score", "Score raw response JSONL against tasks");
    struct {
      std::string tasks, responses, out = "evals.jsonl";
    } sco;
    sc->add_option("--tasks", sco.tasks)->required();
    sc->add_option("--responses", sco.responses, "JSONL with task_id, model, text")->required();
    sc->add_option("--out", sco.out);

    // ---- analyze
    auto* an = app.add_subcommand("analyze", "Aggregate eval records into CSV tables");
    struct {
      std::string tasks, evals, kind = "cells", out_dir = "analysis";
      int window = 3;
    } ano;
    an->add_option("--tasks", ano.tasks)->required();
    an->add_option("--evals", ano.evals)->required();
    an->add_option("--kind", ano.kind,
                   "cells | windows | prefix | confounds | ols | regimes | answer-rate");
    an->add_option("--out-dir", ano.out_dir);
    an->add_option("--window", ano.window, "half-width for window curves");

    // ---- run-preset
    auto* rp = app.add_subcommand("run-preset", "Run a full experiment preset");
    struct {
      std::string preset, out;
    } rpo;
    rp->add_option("--preset", rpo.preset, "preset JSON file")->required();
    rp->add_option("--out", rpo.out, "output directory")->required();

    // ---- validate
    auto* va = app.add_subcommand("validate", "Re-check a backbone or task file");
    std::string validate_path;
    va->add_option("file", validate_path, "JSONL file to validate")->required();

    CLI11_PARSE(app, argc, argv);

    if (!global.config_path.empty())
      global.config = json::parse(read_text_file(global.config_path));
    GeometryConfig geom = geometry_from_config(global.config);
    int jobs = global.jobs > 0 ? global.jobs
                               : static_cast<int>(std::thread::hardware_concurrency());

    if (gen->parsed()) {
      stage = "gen-backbones";
      GeneratorConfig cfg;
      cfg.geom = geom;
      cfg.master_seed = gb.seed;
      cfg.budget_per_cell = gb.budget;
      if (gb.grid == "default") {
        cfg.cells = default_grid(parse_int_list(gb.points), gb.quota);
      } else {
        for (const auto& c : json::parse(read_text_file(gb.grid)))
          cfg.cells.push_back(
              {c.at(0).get<int>(), c.at(1).get<int>(), c.at(2).get<int>(), c.at(3).get<int>()});
      }
      if (!gb.skip.empty()) {
        size_t pos = 0;
        while (pos < gb.skip.size()) {
          size_t semi = gb.skip.find(';', pos);
          if (semi == std::string::npos) semi = gb.skip.size();
          auto pair = parse_int_list(gb.skip.substr(pos, semi - pos));
          cfg.skip_cells.push_back({pair.at(0), pair.at(1)});
          pos = semi + 1;
        }
      }
      auto grid = generate_grid(cfg, jobs);
      write_backbones(gb.out, grid.records);
      std::string coverage = gb.coverage.empty() ? gb.out + ".coverage.csv" : gb.coverage;
      write_coverage_csv(coverage, grid.cells);
      std::cout << "wrote " << grid.records.size() << " records to " << gb.out << "\n";
    } else if (dd->parsed()) {
      stage = "dedup";
      auto records = read_backbones(ddo.in);
      std::map<std::tuple<int, int, int>, std::vector<BackboneRecord>> per_cell;
      for (const auto& r : records) per_cell[{r.tbin, r.sbin, r.n_points}].push_back(r);
      std::vector<BackboneRecord> kept;
      for (auto& [cell, rs] : per_cell) {
        auto k = dedup(rs, ddo.threshold, ddo.max_reps);
        kept.insert(kept.end(), k.begin(), k.end());
      }
      std::sort(kept.begin(), kept.end(),
                [](const BackboneRecord& a, const BackboneRecord& b) { return a.id < b.id; });
      write_backbones(ddo.out, kept);
      std::cout << "kept " << kept.size() << " of " << records.size() << " records\n";
    } else if (rd->parsed()) {
      stage = "render";
      auto records = read_backbones(rdo.backbones);
      fs::create_directories(rdo.out_dir);
      SceneSpec spec = scene_from_geometry(geom);
      ConfoundConfig ccfg;
      std::vector<SceneRecord> scenes;
      for (const auto& r : records)
        for (int k : parse_int_list(rdo.confounds))
          for (int v = 0; v < rdo.variants; ++v) {
            uint64_t gseed = mix_seed({rdo.seed, 101, static_cast<uint64_t>(r.id),
                                       static_cast<uint64_t>(v)});
            uint64_t cseed = mix_seed({rdo.seed, 202, static_cast<uint64_t>(r.id),
                                       static_cast<uint64_t>(k), static_cast<uint64_t>(v)});
            auto glyphs = assign_glyphs(r.n_points, gseed);
            ConfoundSet confounds;
            if (k > 0) {
              try {
                confounds = place_confounds(r, k, geom, ccfg, cseed);
              } catch (const Error& e) {
                if (e.kind() != ErrorKind::PlacementInfeasible) throw;
                continue;
              }
            }
            std::string stem = rdo.out_dir + "/scene_" + std::to_string(r.id) + "_k" +
                               std::to_string(k) + "_v" + std::to_string(v);
            std::string svg = render_svg(r, glyphs, confounds, spec);
            write_text_file(stem + ".svg", svg);
            SceneRecord s;
            s.record_id = r.id;
            s.svg_path = stem + ".svg";
            if (rdo.raster) {
              rasterize(svg, stem + ".png");
              s.png_path = stem + ".png";
            }
            for (const auto& g2 : glyphs) s.glyphs.push_back(glyph_text(g2));
            s.confounds = confounds;
            s.requested_confounds = k;
            s.glyph_seed = gseed;
            s.confound_seed = cseed;
            scenes.push_back(std::move(s));
          }
      write_scenes(rdo.scenes, scenes);
      std::cout << "rendered " << scenes.size() << " scenes\n";
    } else if (bt->parsed()) {
      stage = "build-tasks";
      auto records = read_backbones(bto.backbones);
      std::map<int64_t, const BackboneRecord*> by_id;
      for (const auto& r : records) by_id[r.id] = &r;
      std::vector<TaskInstance> tasks;
      for (const auto& s : read_scenes(bto.scenes)) {
        auto it = by_id.find(s.record_id);
        if (it == by_id.end())
          throw Error(ErrorKind::JoinFailure,
                      "scene references unknown record " + std::to_string(s.record_id));
        GlyphAssignment glyphs;
        for (const auto& name : s.glyphs) {
          Glyph g2;
          if (!parse_glyph(name, g2))
            throw Error(ErrorKind::SchemaMismatch, "bad glyph '" + name + "' in scene manifest");
          glyphs.push_back(g2);
        }
        std::string task_id = "t" + std::to_string(s.record_id) + "_k" +
                              std::to_string(s.requested_confounds) + "_v" +
                              std::to_string(s.glyph_seed % 1000);
        tasks.push_back(build_task(task_id, *it->second, glyphs, s.confounds, s.svg_path));
      }
      write_tasks(bto.out, tasks);
      std::cout << "built " << tasks.size() << " tasks\n";
    } else if (ro->parsed()) {
      stage = "gen-reading-order";
      fs::create_directories(roo.out_dir);
      SceneSpec spec = scene_from_geometry(geom);
      std::vector<TaskInstance> tasks;
      std::vector<SceneRecord> scenes;
      std::vector<Regime> regimes;
      {
        size_t pos = 0;
        while (pos < roo.regimes.size()) {
          size_t comma = roo.regimes.find(',', pos);
          if (comma == std::string::npos) comma = roo.regimes.size();
          regimes.push_back(regime_from_name(roo.regimes.substr(pos, comma - pos)));
          pos = comma + 1;
        }
      }
      int64_t next_id = 1000000;
      for (Regime regime : regimes)
        for (int lanes : parse_int_list(roo.lanes))
          for (int n : parse_int_list(roo.points))
            for (int i = 0; i < roo.per_combo; ++i) {
              uint64_t seed = mix_seed({roo.seed, 303, static_cast<uint64_t>(regime),
                                        static_cast<uint64_t>(lanes), static_cast<uint64_t>(n),
                                        static_cast<uint64_t>(i)});
              auto layout = build_reading_order(regime, lanes, n, geom, seed);
              BackboneRecord r;
              r.id = next_id++;
              r.family = FamilyKind::proposal_walk;
              r.vertices = layout.path;
              r.tortuosity = tortuosity(layout.path);
              r.crossings = 0;
              r.tbin = bin_tortuosity(r.tortuosity);
              r.sbin = 0;
              r.n_points = n;
              r.seed = seed;
              auto glyphs = assign_glyphs(n, mix_seed({seed, 1}));
              std::string stem = roo.out_dir + "/ro_" + regime_name(regime) + "_l" +
                                 std::to_string(lanes) + "_n" + std::to_string(n) + "_i" +
                                 std::to_string(i);
              std::string svg = render_svg(r, glyphs, {}, spec);
              write_text_file(stem + ".svg", svg);
              SceneRecord s;
              s.record_id = r.id;
              s.svg_path = stem + ".svg";
              if (roo.raster) {
                rasterize(svg, stem + ".png");
                s.png_path = stem + ".png";
              }
              for (const auto& g2 : glyphs) s.glyphs.push_back(glyph_text(g2));
              s.glyph_seed = mix_seed({seed, 1});
              scenes.push_back(s);
              std::string task_id = std::string("ro_") + regime_name(regime) + "_l" +
                                    std::to_string(lanes) + "_n" + std::to_string(n) + "_i" +
                                    std::to_string(i);
              TaskInstance t = build_task(task_id, r, glyphs, {}, stem + ".svg");
              t.meta.benchmark = Benchmark::reading_order;
              t.meta.regime = regime;
              t.meta.lane_count = lanes;
              tasks.push_back(std::move(t));
            }
      write_scenes(roo.scenes, scenes);
      write_tasks(roo.tasks, tasks);
      std::cout << "built " << tasks.size() << " reading-order tasks\n";
    } else if (ev->parsed()) {
      stage = "eval";
      auto tasks = read_tasks(evo.tasks);
      AgentSpec agent = agent_from_string(evo.agent);
      agent.q_cross = evo.q_cross;
      agent.q_confound = evo.q_confound;
      agent.seed = evo.seed;
      std::string label = evo.label.empty() ? evo.agent : evo.label;
      if (agent.kind == AgentSpec::Kind::endpoint) {
        agent.endpoint = endpoint_from_config(global.config, evo.endpoint_name);
        if (evo.label.empty()) label = agent.endpoint.model_name;
      }
      auto summary = run_eval(tasks, agent, evo.out, label);
      std::cout << "evaluated " << summary.total << " tasks: em=" << summary.em
                << " tok_acc=" << summary.tok_acc << " answer_rate=" << summary.answer_rate
                << "\n";
    } else if (sc->parsed()) {
      stage = "score";
      auto tasks = read_tasks(sco.tasks);
      std::map<std::string, const TaskInstance*> by_id;
      for (const auto& t : tasks) by_id[t.task_id] = &t;
      std::vector<EvalRecord> evals;
      for (const auto& row : read_jsonl(sco.responses)) {
        std::string task_id = row.at("task_id").get<std::string>();
        auto it = by_id.find(task_id);
        if (it == by_id.end())
          throw Error(ErrorKind::JoinFailure, "response for unknown task " + task_id);
        auto parsed = parse_answer(row.at("text").get<std::string>(), it->second->n);
        EvalRecord rec = score(parsed, it->second->gold);
        rec.task_id = task_id;
        rec.model = row.value("model", "unknown");
        rec.latency_ms = row.value("latency_ms", 0.0);
        evals.push_back(std::move(rec));
      }
      write_evals(sco.out, evals, false);
      std::cout << "scored " << evals.size() << " responses\n";
    } else if (an->parsed()) {
      stage = "analyze";
      fs::create_directories(ano.out_dir);
      Dataset ds = join_dataset(read_tasks(ano.tasks), read_evals(ano.evals));
      auto out = [&](const std::string& f) { return ano.out_dir + "/" + f; };
      if (ano.kind == "cells") {
        write_cell_table_csv(out("cells_em.csv"), cell_table(ds, Metric::em), Metric::em);
        write_cell_table_csv(out("cells_tok_acc.csv"), cell_table(ds, Metric::tok_acc),
                             Metric::tok_acc);
      } else if (ano.kind == "windows") {
        std::vector<WindowCurve> curves;
        for (int k = 1; k <= 4; ++k) {
          try {
            curves.push_back(crossing_windows(ds, k, ano.window));
          } catch (const Error& e) {
            if (e.kind() != ErrorKind::InsufficientData) throw;
          }
        }
        write_window_curves_csv(out("crossing_windows.csv"), curves);
      } else if (ano.kind == "prefix") {
        write_prefix_control_csv(out("prefix_control.csv"), matched_prefix_control(ds));
      } else if (ano.kind == "confounds") {
        write_confound_curves_csv(out("confound_local.csv"), out("confound_cumulative.csv"),
                                  confound_curves(ds, ano.window));
      } else if (ano.kind == "ols") {
        write_regression_csv(out("ols_tok_acc.csv"), ols(ds, false, Metric::tok_acc));
        write_regression_csv(out("ols_em.csv"), ols(ds, false, Metric::em));
      } else if (ano.kind == "regimes") {
        write_regime_deltas_csv(out("regime_deltas.csv"), regime_deltas(ds));
      } else if (ano.kind == "answer-rate") {
        write_answer_rate_csv(out("answer_rate.csv"), answer_rate_tables(ds, {"model"}),
                              {"model"});
      } else {
        throw Error(ErrorKind::UsageError, "unknown analysis kind '" + ano.kind + "'");
      }
      std::cout << "wrote " << ano.kind << " tables to " << ano.out_dir << "\n";
    } else if (rp->parsed()) {
      stage = "run-preset";
      auto preset = load_preset(rpo.preset);
      auto result = run_preset(preset, rpo.out, jobs);
      std::cout << "preset " << preset.name << ": " << result.summary.total
                << " tasks, em=" << result.summary.em << ", tok_acc=" << result.summary.tok_acc
                << ", answer_rate=" << result.summary.answer_rate << "\n";
    } else if (va->parsed()) {
      stage = "validate";
      return validate_file(validate_path, geom);
    }
    return 0;
  } catch (const Error& e) {
    std::cerr << "error kind=" << error_kind_name(e.kind()) << " stage=" << stage << " msg=\""
              << e.what() << "\"\n";
    return exit_code_for(e.kind());
  } catch (const json::exception& e) {
    std::cerr << "error kind=MalformedInput stage=" << stage << " msg=\"" << e.what() << "\"\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error kind=Internal stage=" << stage << " msg=\"" << e.what() << "\"\n";
    return 3;
  }
}
