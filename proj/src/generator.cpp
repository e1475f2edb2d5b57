#include "pathbench/generator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <thread>

#include "pathbench/jsonl.hpp"
#include "pathbench/rng.hpp"

namespace pathbench {

const char* family_name(FamilyKind f) {
  switch (f) {
    case FamilyKind::bowtie: return "bowtie";
    case FamilyKind::rail_weave: return "rail_weave";
    case FamilyKind::split_star: return "split_star";
    case FamilyKind::braid: return "braid";
    case FamilyKind::knot_template: return "knot_template";
    case FamilyKind::proposal_walk: return "proposal_walk";
    case FamilyKind::bootstrap: return "bootstrap";
  }
  return "unknown";
}

FamilyKind family_from_name(const std::string& name) {
  for (FamilyKind f : {FamilyKind::bowtie, FamilyKind::rail_weave, FamilyKind::split_star,
                       FamilyKind::braid, FamilyKind::knot_template, FamilyKind::proposal_walk,
                       FamilyKind::bootstrap})
    if (name == family_name(f)) return f;
  throw Error(ErrorKind::SchemaMismatch, "unknown family '" + name + "'");
}

bool points_preserving(FamilyKind f) {
  switch (f) {
    case FamilyKind::bowtie:
    case FamilyKind::rail_weave:
    case FamilyKind::split_star:
    case FamilyKind::knot_template:
    case FamilyKind::bootstrap:
      return true;
    case FamilyKind::braid:
    case FamilyKind::proposal_walk:
      return false;
  }
  return true;
}

const char* cell_status_name(CellStatus s) {
  switch (s) {
    case CellStatus::filled: return "filled";
    case CellStatus::partial: return "partial";
    case CellStatus::infeasible: return "infeasible";
    case CellStatus::skipped: return "skipped";
  }
  return "unknown";
}

std::vector<int> default_point_counts() { return {9, 11, 13, 15, 17}; }

std::vector<CellTarget> default_grid(const std::vector<int>& point_counts, int quota) {
  std::vector<CellTarget> cells;
  for (int n : point_counts)
    for (int t = 0; t < BinThresholds::bin_count; ++t)
      for (int s = 0; s < BinThresholds::bin_count; ++s) cells.push_back({t, s, n, quota});
  return cells;
}

std::optional<BackboneRecord> accept(const Polyline& candidate, const CellTarget& cell,
                                     const GeometryConfig& g) {
  try {
    Polyline fitted = fit_to_view(candidate, g);
    if (static_cast<int>(fitted.size()) != cell.n_points) return std::nullopt;
    double t = tortuosity(fitted, g.epsilon_chord);
    auto crossings = self_intersections(fitted);
    int c = static_cast<int>(crossings.size());
    if (bin_tortuosity(t) != cell.tbin) return std::nullopt;
    if (bin_intersections(c) != cell.sbin) return std::nullopt;
    if (!check_constraints(fitted, g, /*has_glyphs=*/true).passed) return std::nullopt;
    BackboneRecord r;
    r.family = FamilyKind::proposal_walk;  // caller overrides
    r.vertices = std::move(fitted);
    r.tortuosity = t;
    r.crossings = c;
    r.tbin = cell.tbin;
    r.sbin = cell.sbin;
    r.n_points = cell.n_points;
    return r;
  } catch (const Error&) {
    return std::nullopt;
  }
}

Polyline mutate(const Polyline& p, MutationKind kind, uint64_t seed, const GeometryConfig& g) {
  require_valid_polyline(p);
  Rng rng(seed);
  const int n = static_cast<int>(p.size());
  switch (kind) {
    case MutationKind::anisotropic_scale: {
      double sx = rng.uniform(0.75, 1.45);
      double sy = rng.uniform(0.75, 1.45);
      if (std::fabs(sx - sy) < 0.1) sy = sx + (sy >= sx ? 0.12 : -0.12);
      Point2 c{0, 0};
      for (auto v : p) c = c + v;
      c = c * (1.0 / n);
      Polyline out = p;
      for (auto& v : out) v = {c.x + (v.x - c.x) * sx, c.y + (v.y - c.y) * sy};
      return out;
    }
    case MutationKind::local_warp: {
      if (n < 4) throw Error(ErrorKind::MutationInfeasible, "local_warp needs 4+ vertices");
      int center = static_cast<int>(rng.uniform_int(1, n - 2));
      double sigma = rng.uniform(1.0, 2.5);
      double mag = rng.uniform(14.0, 60.0);
      double ang = rng.uniform(0.0, 2.0 * 3.14159265358979323846);
      Point2 d{mag * std::cos(ang), mag * std::sin(ang)};
      Polyline out = p;
      for (int i = 0; i < n; ++i) {
        double w = std::exp(-0.5 * (i - center) * (i - center) / (sigma * sigma));
        out[static_cast<size_t>(i)] = out[static_cast<size_t>(i)] + d * w;
      }
      return out;
    }
    case MutationKind::extend_endpoint: {
      bool front = rng.bernoulli(0.5);
      Point2 a = front ? p[1] : p[n - 2];
      Point2 b = front ? p[0] : p[n - 1];
      Point2 dir = b - a;
      double len = norm(dir);
      dir = dir * (1.0 / len);
      double turn = rng.uniform(-0.9, 0.9);
      double c = std::cos(turn), s = std::sin(turn);
      Point2 rd{dir.x * c - dir.y * s, dir.x * s + dir.y * c};
      Point2 nv = b + rd * rng.uniform(1.3 * g.spacing(), 3.0 * g.spacing());
      Polyline out = p;
      if (front)
        out.insert(out.begin(), nv);
      else
        out.push_back(nv);
      return out;
    }
    case MutationKind::safe_split: {
      double min_len = std::max(g.min_segment_len, g.spacing());
      int base = static_cast<int>(self_intersections(p).size());
      std::vector<int> eligible;
      for (int i = 0; i + 1 < n; ++i)
        if (dist(p[static_cast<size_t>(i)], p[static_cast<size_t>(i + 1)]) >= 2.15 * min_len)
          eligible.push_back(i);
      if (eligible.empty())
        throw Error(ErrorKind::MutationInfeasible, "no segment long enough to split");
      rng.shuffle(eligible);
      for (int i : eligible) {
        Point2 a = p[static_cast<size_t>(i)], b = p[static_cast<size_t>(i + 1)];
        Point2 d = b - a;
        double len = norm(d);
        Point2 perp{-d.y / len, d.x / len};
        for (int attempt = 0; attempt < 6; ++attempt) {
          double t = rng.uniform(0.42, 0.58);
          double j = rng.uniform(-6.0, 6.0) / (1 << attempt);
          Polyline out = p;
          out.insert(out.begin() + i + 1, a + d * t + perp * j);
          try {
            if (static_cast<int>(self_intersections(out).size()) == base) return out;
          } catch (const Error&) {
          }
        }
      }
      throw Error(ErrorKind::MutationInfeasible, "splits kept changing the crossing count");
    }
    case MutationKind::permute_crossings: {
      if (n < 5) throw Error(ErrorKind::MutationInfeasible, "too short to permute");
      int i = static_cast<int>(rng.uniform_int(1, n - 3));
      int j = static_cast<int>(rng.uniform_int(i + 1, n - 2));
      Polyline out = p;
      std::reverse(out.begin() + i, out.begin() + j + 1);
      require_valid_polyline(out);
      return out;
    }
  }
  throw Error(ErrorKind::MutationInfeasible, "unknown mutation");
}

Polyline bootstrap_grow(const BackboneRecord& source, int target_n, const GeometryConfig& g,
                        uint64_t seed) {
  if (target_n <= source.n_points)
    throw Error(ErrorKind::UsageError, "bootstrap target must exceed the source point count");
  Rng rng(seed);
  Polyline p = fit_to_view(source.vertices, g);
  int base = static_cast<int>(self_intersections(p).size());
  int needed = target_n - static_cast<int>(p.size());
  int budget = 40 * needed;
  while (static_cast<int>(p.size()) < target_n) {
    bool placed = false;
    while (budget-- > 0 && !placed) {
      try {
        Polyline out = mutate(p, MutationKind::safe_split, rng.u64(), g);
        if (static_cast<int>(self_intersections(out).size()) == base) {
          p = std::move(out);
          placed = true;
        }
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::MutationInfeasible)
          throw Error(ErrorKind::GrowthInfeasible, "no safe insertion available");
      }
    }
    if (!placed) throw Error(ErrorKind::GrowthInfeasible, "insertion budget exhausted");
  }
  return p;
}

Signature signature(const Polyline& p) {
  require_valid_polyline(p);
  std::vector<double> cum{0.0};
  for (size_t i = 1; i < p.size(); ++i) cum.push_back(cum.back() + dist(p[i - 1], p[i]));
  double total = cum.back();
  Signature sig;
  sig.samples.reserve(kSignatureSamples);
  size_t seg = 0;
  for (int i = 0; i < kSignatureSamples; ++i) {
    double target = total * i / (kSignatureSamples - 1);
    while (seg + 1 < cum.size() - 1 && cum[seg + 1] < target) ++seg;
    double span = cum[seg + 1] - cum[seg];
    double t = span > 0 ? (target - cum[seg]) / span : 0.0;
    sig.samples.push_back(p[seg] + (p[seg + 1] - p[seg]) * t);
  }
  double minx = sig.samples[0].x, maxx = minx, miny = sig.samples[0].y, maxy = miny;
  for (auto v : sig.samples) {
    minx = std::min(minx, v.x);
    maxx = std::max(maxx, v.x);
    miny = std::min(miny, v.y);
    maxy = std::max(maxy, v.y);
  }
  double span = std::max(maxx - minx, maxy - miny);
  for (auto& v : sig.samples) v = {(v.x - minx) / span, (v.y - miny) / span};
  return sig;
}

double signature_distance(const Signature& a, const Signature& b) {
  double fwd = 0.0, rev = 0.0;
  const int m = kSignatureSamples;
  for (int i = 0; i < m; ++i) {
    fwd += dist(a.samples[static_cast<size_t>(i)], b.samples[static_cast<size_t>(i)]);
    rev += dist(a.samples[static_cast<size_t>(i)], b.samples[static_cast<size_t>(m - 1 - i)]);
  }
  return std::min(fwd, rev) / m;
}

std::vector<BackboneRecord> dedup(const std::vector<BackboneRecord>& records, double threshold,
                                  int max_reps) {
  std::vector<const BackboneRecord*> order;
  order.reserve(records.size());
  for (const auto& r : records) order.push_back(&r);
  std::sort(order.begin(), order.end(),
            [](const BackboneRecord* a, const BackboneRecord* b) { return a->id < b->id; });
  std::vector<BackboneRecord> kept;
  std::vector<Signature> kept_sigs;
  for (const BackboneRecord* r : order) {
    if (static_cast<int>(kept.size()) >= max_reps) break;
    Signature s = signature(r->vertices);
    bool distinct = true;
    for (const auto& ks : kept_sigs)
      if (signature_distance(s, ks) <= threshold) {
        distinct = false;
        break;
      }
    if (distinct) {
      kept.push_back(*r);
      kept_sigs.push_back(std::move(s));
    }
  }
  return kept;
}

void SourceStore::add(const BackboneRecord& r) {
  by_cell_[{r.tbin, r.sbin, r.n_points}].push_back(r);
}

const std::vector<BackboneRecord>* SourceStore::find(int tbin, int sbin, int n_points) const {
  auto it = by_cell_.find({tbin, sbin, n_points});
  return it == by_cell_.end() ? nullptr : &it->second;
}

namespace {

const std::vector<BackboneRecord>* bootstrap_sources_for(const CellTarget& cell,
                                                         const GeneratorConfig& cfg,
                                                         const SourceStore* sources) {
  if (!sources) return nullptr;
  for (const auto& rule : cfg.bootstrap)
    if (rule.tbin == cell.tbin && rule.sbin == cell.sbin && rule.n_points == cell.n_points)
      return sources->find(rule.tbin, rule.sbin, rule.source_n);
  return nullptr;
}

}  // namespace

CellResult generate_cell(const CellTarget& cell, const GeneratorConfig& cfg,
                         const SourceStore* sources) {
  CellResult result;
  result.cell = cell;

  int s_lo = BinThresholds::intersection_edges[static_cast<size_t>(cell.sbin)];
  if (max_crossings_for_points(cell.n_points) < s_lo) {
    result.status = CellStatus::infeasible;
    return result;
  }

  std::vector<FamilyKind> families;
  for (FamilyKind f : {FamilyKind::bowtie, FamilyKind::rail_weave, FamilyKind::split_star,
                       FamilyKind::braid, FamilyKind::knot_template, FamilyKind::proposal_walk})
    if (family_applicable(f, cell)) families.push_back(f);
  const std::vector<BackboneRecord>* boot = bootstrap_sources_for(cell, cfg, sources);
  if (boot && !boot->empty()) families.push_back(FamilyKind::bootstrap);
  if (families.empty()) {
    result.status = CellStatus::infeasible;
    return result;
  }

  static constexpr std::array<MutationKind, 5> kMutations = {
      MutationKind::anisotropic_scale, MutationKind::local_warp, MutationKind::extend_endpoint,
      MutationKind::safe_split, MutationKind::permute_crossings};

  for (int attempt = 0; attempt < cfg.budget_per_cell; ++attempt) {
    if (static_cast<int>(result.records.size()) >= cell.quota) break;
    ++result.attempts;
    uint64_t seed = mix_seed({cfg.master_seed, static_cast<uint64_t>(cell.tbin),
                              static_cast<uint64_t>(cell.sbin),
                              static_cast<uint64_t>(cell.n_points),
                              static_cast<uint64_t>(attempt)});
    try {
      Polyline candidate;
      FamilyKind fam;
      std::optional<int64_t> provenance;
      bool mutate_mode = (attempt % 5 == 4) && !result.records.empty();
      if (mutate_mode) {
        Rng rng(seed);
        const BackboneRecord& base =
            result.records[static_cast<size_t>(rng.uniform_int(
                0, static_cast<int64_t>(result.records.size()) - 1))];
        candidate = base.vertices;
        int chain = static_cast<int>(rng.uniform_int(1, 2));
        for (int i = 0; i < chain; ++i)
          candidate = mutate(candidate, kMutations[static_cast<size_t>(rng.uniform_int(0, 4))],
                             rng.u64(), cfg.geom);
        fam = base.family;
        provenance = base.provenance;
      } else {
        fam = families[static_cast<size_t>(attempt) % families.size()];
        if (fam == FamilyKind::bootstrap) {
          Rng rng(seed);
          const BackboneRecord& src = boot->at(static_cast<size_t>(
              rng.uniform_int(0, static_cast<int64_t>(boot->size()) - 1)));
          candidate = bootstrap_grow(src, cell.n_points, cfg.geom, rng.u64());
          provenance = src.id;
        } else {
          candidate = propose(fam, cell, seed, cfg.geom);
        }
      }
      if (auto rec = accept(candidate, cell, cfg.geom)) {
        rec->family = fam;
        rec->seed = seed;
        rec->provenance = provenance;
        result.records.push_back(std::move(*rec));
      }
    } catch (const Error&) {
      // rejected attempt; the seed schedule moves on
    }
  }

  if (static_cast<int>(result.records.size()) >= cell.quota)
    result.status = CellStatus::filled;
  else if (!result.records.empty())
    result.status = CellStatus::partial;
  else
    result.status = CellStatus::infeasible;
  return result;
}

GridResult generate_grid(const GeneratorConfig& cfg, int jobs) {
  GridResult out;
  out.cells.resize(cfg.cells.size());

  auto skipped = [&](const CellTarget& c) {
    for (auto [t, s] : cfg.skip_cells)
      if (t == c.tbin && s == c.sbin) return true;
    return false;
  };

  // waves by ascending point count so bootstrap sources exist before use
  std::vector<int> counts;
  for (const auto& c : cfg.cells)
    if (std::find(counts.begin(), counts.end(), c.n_points) == counts.end())
      counts.push_back(c.n_points);
  std::sort(counts.begin(), counts.end());

  SourceStore store;
  for (int n : counts) {
    std::vector<size_t> wave;
    for (size_t i = 0; i < cfg.cells.size(); ++i)
      if (cfg.cells[i].n_points == n) wave.push_back(i);

    std::atomic<size_t> next{0};
    auto worker = [&]() {
      for (;;) {
        size_t w = next.fetch_add(1);
        if (w >= wave.size()) return;
        size_t idx = wave[w];
        const CellTarget& cell = cfg.cells[idx];
        if (skipped(cell)) {
          out.cells[idx].cell = cell;
          out.cells[idx].status = CellStatus::skipped;
          continue;
        }
        out.cells[idx] = generate_cell(cell, cfg, &store);
      }
    };
    int nthreads = std::max(1, std::min<int>(jobs, static_cast<int>(wave.size())));
    if (nthreads == 1) {
      worker();
    } else {
      std::vector<std::thread> threads;
      for (int i = 0; i < nthreads; ++i) threads.emplace_back(worker);
      for (auto& t : threads) t.join();
    }
    for (size_t idx : wave)
      for (const auto& r : out.cells[idx].records) store.add(r);
  }

  int64_t next_id = 1;
  for (auto& cell : out.cells)
    for (auto& r : cell.records) {
      r.id = next_id++;
      out.records.push_back(r);
    }
  return out;
}

void write_backbones(const std::string& path, const std::vector<BackboneRecord>& records) {
  std::vector<json> rows;
  rows.reserve(records.size());
  for (const auto& r : records) {
    json verts = json::array();
    for (auto v : r.vertices) verts.push_back({v.x, v.y});
    json row{{"id", r.id},
             {"family", family_name(r.family)},
             {"vertices", verts},
             {"tortuosity", r.tortuosity},
             {"crossings", r.crossings},
             {"tbin", r.tbin},
             {"sbin", r.sbin},
             {"n_points", r.n_points},
             {"seed", r.seed}};
    row["provenance"] = r.provenance ? json(*r.provenance) : json(nullptr);
    rows.push_back(std::move(row));
  }
  write_jsonl(path, rows);
}

std::vector<BackboneRecord> read_backbones(const std::string& path) {
  std::vector<BackboneRecord> records;
  for (const auto& row : read_jsonl(path)) {
    try {
      BackboneRecord r;
      r.id = row.at("id").get<int64_t>();
      r.family = family_from_name(row.at("family").get<std::string>());
      for (const auto& v : row.at("vertices"))
        r.vertices.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
      r.tortuosity = row.at("tortuosity").get<double>();
      r.crossings = row.at("crossings").get<int>();
      r.tbin = row.at("tbin").get<int>();
      r.sbin = row.at("sbin").get<int>();
      r.n_points = row.at("n_points").get<int>();
      r.seed = row.at("seed").get<uint64_t>();
      if (!row.at("provenance").is_null()) r.provenance = row.at("provenance").get<int64_t>();
      records.push_back(std::move(r));
    } catch (const json::exception& e) {
      throw Error(ErrorKind::SchemaMismatch, path + ": " + e.what());
    }
  }
  return records;
}

void write_coverage_csv(const std::string& path, const std::vector<CellResult>& cells) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path);
  out << "tbin,sbin,n_points,requested,accepted,status\n";
  for (const auto& c : cells)
    out << c.cell.tbin << "," << c.cell.sbin << "," << c.cell.n_points << "," << c.cell.quota
        << "," << c.records.size() << "," << cell_status_name(c.status) << "\n";
}

std::vector<std::string> validate_record(const BackboneRecord& r, const GeometryConfig& g) {
  std::vector<std::string> problems;
  auto fail = [&](const std::string& msg) {
    problems.push_back("record " + std::to_string(r.id) + ": " + msg);
  };
  try {
    require_valid_polyline(r.vertices);
    if (static_cast<int>(r.vertices.size()) != r.n_points) fail("vertex count != n_points");
    double t = tortuosity(r.vertices, g.epsilon_chord);
    if (std::fabs(t - r.tortuosity) > 1e-9 * std::max(1.0, std::fabs(t)))
      fail("stored tortuosity drifts from measurement");
    int c = static_cast<int>(self_intersections(r.vertices).size());
    if (c != r.crossings) fail("stored crossing count mismatch");
    if (bin_tortuosity(t) != r.tbin) fail("tortuosity bin mismatch");
    if (bin_intersections(c) != r.sbin) fail("intersection bin mismatch");
    auto rep = check_constraints(r.vertices, g, true);
    if (!rep.passed) {
      for (const auto& v : rep.violations)
        fail(std::string("constraint ") + rule_name(v.rule) + " measured " +
             std::to_string(v.measured) + " < " + std::to_string(v.threshold));
    }
  } catch (const Error& e) {
    fail(e.what());
  }
  return problems;
}

}  // namespace pathbench
