#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "oracle_util.hpp"
#include "pathbench/generator.hpp"
#include "pathbench/jsonl.hpp"
#include "pathbench/rng.hpp"

using namespace pathbench;

namespace {

GeometryConfig geom() { return GeometryConfig{}; }

BackboneRecord make_record(const CellTarget& cell, uint64_t seed_hint = 1) {
  GeneratorConfig cfg;
  cfg.geom = geom();
  cfg.master_seed = seed_hint;
  cfg.budget_per_cell = 4000;
  CellTarget c = cell;
  c.quota = 1;
  auto res = generate_cell(c, cfg, nullptr);
  REQUIRE(!res.records.empty());
  return res.records.front();
}

}  // namespace

TEST_CASE("propose bowtie: figure-eight candidate with one crossing") {
  CellTarget cell{4, 1, 5, 1};
  auto p = propose(FamilyKind::bowtie, cell, 7, geom());
  CHECK(p.size() == 5);
  CHECK(oracle::brute_crossings(p).size() == 1);
}

TEST_CASE("propose walk: non-self-intersecting low-sinuosity candidate") {
  CellTarget cell{0, 0, 9, 1};
  for (uint64_t seed = 1; seed < 40; ++seed) {
    try {
      auto p = propose(FamilyKind::proposal_walk, cell, seed, geom());
      CHECK(p.size() == 9);
      CHECK(oracle::brute_crossings(p).empty());
      return;
    } catch (const Error&) {
    }
  }
  FAIL("no walk seed in 1..40 produced a candidate");
}

TEST_CASE("propose split_star: too few vertices for regime is inapplicable") {
  CellTarget cell{3, 5, 4, 1};
  CHECK_THROWS_AS(propose(FamilyKind::split_star, cell, 1, geom()), Error);
  try {
    propose(FamilyKind::split_star, cell, 1, geom());
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::FamilyInapplicable);
  }
}

TEST_CASE("propose is deterministic in (family, cell, seed)") {
  CellTarget cell{2, 1, 9, 1};
  for (uint64_t seed = 1; seed < 30; ++seed) {
    Polyline a, b;
    try {
      a = propose(FamilyKind::rail_weave, cell, seed, geom());
      b = propose(FamilyKind::rail_weave, cell, seed, geom());
    } catch (const Error&) {
      continue;
    }
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].x == b[i].x);
      CHECK(a[i].y == b[i].y);
    }
    return;
  }
  FAIL("rail_weave produced no candidate in 30 seeds");
}

TEST_CASE("mutate: safe_split keeps endpoints and adds an interior vertex") {
  GeometryConfig g = geom();
  Polyline p{{0, 0}, {100, 0}, {100, 100}, {200, 140}};
  auto out = mutate(p, MutationKind::safe_split, 5, g);
  CHECK(out.size() == p.size() + 1);
  int inserted = -1;
  for (size_t i = 0, j = 0; i < out.size(); ++i) {
    if (j < p.size() && out[i].x == p[j].x && out[i].y == p[j].y) {
      ++j;
    } else {
      CHECK(inserted == -1);
      inserted = static_cast<int>(i);
    }
  }
  REQUIRE(inserted > 0);
  CHECK(dist(out[inserted - 1], out[inserted]) >= 32.0 * 0.9);
  CHECK(dist(out[inserted], out[inserted + 1]) >= 32.0 * 0.9);
  CHECK(oracle::brute_crossings(out).size() == oracle::brute_crossings(p).size());
}

TEST_CASE("mutate: anisotropic scale keeps a straight line straight") {
  auto out = mutate({{0, 0}, {50, 0}, {100, 0}, {200, 0}}, MutationKind::anisotropic_scale, 3, geom());
  CHECK(tortuosity(out) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("mutate: extend_endpoint grows the path by one vertex") {
  Polyline p{{0, 0}, {100, 0}, {200, 50}};
  auto out = mutate(p, MutationKind::extend_endpoint, 11, geom());
  CHECK(out.size() == 4);
}

TEST_CASE("accept: straight line fills the easiest cell") {
  CellTarget cell{0, 0, 2, 1};
  auto rec = accept({{0, 0}, {500, 0}}, cell, geom());
  REQUIRE(rec.has_value());
  CHECK(rec->tortuosity == doctest::Approx(1.0));
  CHECK(rec->crossings == 0);
  CHECK(rec->vertices[0].x == doctest::Approx(40.0));
}

TEST_CASE("accept: bowtie rejected for the zero-crossing regime") {
  CellTarget cell{0, 0, 4, 1};
  Polyline bow{{0, 0}, {200, 200}, {200, 0}, {0, 200}};
  CHECK(!accept(bow, cell, geom()).has_value());
}

TEST_CASE("accept: spacing violation rejected") {
  // 4 vertices, two of them closer than S after fitting
  CellTarget cell{1, 0, 4, 1};
  Polyline p{{0, 0}, {592, 0}, {592, 300}, {2, 10}};
  auto rep = check_constraints(fit_to_view(p, geom()), geom(), true);
  bool spacing_violated = false;
  for (const auto& v : rep.violations)
    if (v.rule == Rule::vertex_spacing || v.rule == Rule::min_segment_length ||
        v.rule == Rule::segment_separation)
      spacing_violated = true;
  CHECK(spacing_violated);
  CHECK(!accept(p, cell, geom()).has_value());
}

TEST_CASE("bootstrap_grow preserves crossing count") {
  auto rec = make_record({3, 1, 9, 1}, 77);
  auto grown = bootstrap_grow(rec, 11, geom(), 5);
  CHECK(grown.size() == 11);
  CHECK(static_cast<int>(oracle::brute_crossings(grown).size()) == rec.crossings);

  CHECK_THROWS_AS(bootstrap_grow(rec, rec.n_points, geom(), 5), Error);

  BackboneRecord cramped = rec;
  cramped.vertices = {{0, 0}, {40, 0}, {40, 40}, {0, 40}, {0, 80}, {40, 80}};
  cramped.n_points = 6;
  GeometryConfig tiny = geom();
  tiny.view_px = 120;
  tiny.margin_px = 10;
  CHECK_THROWS_AS(bootstrap_grow(cramped, 8, tiny, 3), Error);
}

TEST_CASE("signature distances") {
  auto rec = make_record({1, 1, 9, 1}, 13);
  const Polyline& p = rec.vertices;

  Polyline scaled;
  for (auto v : p) scaled.push_back({2 * v.x + 100, 2 * v.y - 40});
  CHECK(signature_distance(signature(p), signature(scaled)) <= 1e-9);

  Polyline reversed(p.rbegin(), p.rend());
  CHECK(signature_distance(signature(p), signature(reversed)) <= 1e-9);

  auto other = make_record({3, 0, 9, 1}, 21);
  CHECK(signature_distance(signature(p), signature(other.vertices)) > 0.05);
  CHECK(signature_distance(signature(p), signature(other.vertices)) ==
        doctest::Approx(signature_distance(signature(other.vertices), signature(p))));
}

TEST_CASE("dedup: translated copy collapses, distinct shapes survive") {
  auto base = make_record({1, 0, 9, 1}, 31);
  std::vector<BackboneRecord> records;
  for (int i = 0; i < 3; ++i) {
    BackboneRecord r = base;
    r.id = i + 1;
    for (auto& v : r.vertices) v = {v.x + 7.0 * i, v.y - 3.0 * i};
    records.push_back(r);
  }
  auto kept = dedup(records, 0.05, 25);
  CHECK(kept.size() == 1);
  CHECK(kept[0].id == 1);

  CHECK(dedup({}, 0.05, 25).empty());

  // all-distinct shapes, capped at 3
  std::vector<BackboneRecord> mixed;
  uint64_t hint = 40;
  for (int t = 0; t < 5; ++t) {
    auto r = make_record({t % 4, t % 2, 9, 1}, hint + static_cast<uint64_t>(t));
    r.id = t + 1;
    mixed.push_back(r);
  }
  auto capped = dedup(mixed, 0.02, 3);
  CHECK(capped.size() <= 3);
  for (size_t a = 0; a < capped.size(); ++a)
    for (size_t b = a + 1; b < capped.size(); ++b)
      CHECK(signature_distance(signature(capped[a].vertices), signature(capped[b].vertices)) > 0.02);
}

TEST_CASE("generate_cell fills an easy cell and self-checks") {
  GeneratorConfig cfg;
  cfg.geom = geom();
  cfg.master_seed = 42;
  cfg.budget_per_cell = 3000;
  auto res = generate_cell({0, 0, 9, 10}, cfg, nullptr);
  CHECK(res.status == CellStatus::filled);
  CHECK(res.records.size() == 10);
  for (const auto& r : res.records) {
    auto problems = validate_record(r, cfg.geom);
    for (const auto& msg : problems) MESSAGE(msg);
    CHECK(problems.empty());
    CHECK(static_cast<int>(oracle::brute_crossings(r.vertices).size()) == r.crossings);
  }
}

TEST_CASE("generate_cell: combinatorially impossible cell is infeasible") {
  GeneratorConfig cfg;
  cfg.geom = geom();
  cfg.budget_per_cell = 100;
  auto res = generate_cell({0, 5, 5, 4}, cfg, nullptr);
  CHECK(res.status == CellStatus::infeasible);
  CHECK(res.attempts == 0);
}

TEST_CASE("generate_grid: deterministic across job counts, skip honored") {
  GeneratorConfig cfg;
  cfg.geom = geom();
  cfg.master_seed = 5150;
  cfg.budget_per_cell = 1500;
  cfg.cells = {{0, 0, 9, 3}, {1, 1, 9, 3}, {2, 0, 11, 3}, {5, 5, 9, 2}, {1, 0, 13, 3}};
  cfg.skip_cells = {{5, 5}};

  auto a = generate_grid(cfg, 1);
  auto b = generate_grid(cfg, 8);

  REQUIRE(a.records.size() == b.records.size());
  auto tmp = std::filesystem::temp_directory_path();
  auto pa = (tmp / "grid_a.jsonl").string();
  auto pb = (tmp / "grid_b.jsonl").string();
  write_backbones(pa, a.records);
  write_backbones(pb, b.records);
  CHECK(read_text_file(pa) == read_text_file(pb));

  bool found_skip = false;
  for (const auto& c : a.cells)
    if (c.cell.tbin == 5 && c.cell.sbin == 5) {
      CHECK(c.status == CellStatus::skipped);
      CHECK(c.records.empty());
      found_skip = true;
    }
  CHECK(found_skip);

  auto round = read_backbones(pa);
  REQUIRE(round.size() == a.records.size());
  for (size_t i = 0; i < round.size(); ++i) {
    CHECK(round[i].id == a.records[i].id);
    CHECK(round[i].seed == a.records[i].seed);
    CHECK(round[i].vertices.size() == a.records[i].vertices.size());
  }
  std::filesystem::remove(pa);
  std::filesystem::remove(pb);
}

TEST_CASE("generate_grid: bootstrap wave uses lower point counts") {
  GeneratorConfig cfg;
  cfg.geom = geom();
  cfg.master_seed = 99;
  cfg.budget_per_cell = 2500;
  cfg.cells = {{3, 1, 9, 2}, {3, 1, 11, 2}};
  cfg.bootstrap = {{3, 1, 11, 9}};
  auto res = generate_grid(cfg, 2);
  for (const auto& r : res.records)
    if (r.family == FamilyKind::bootstrap) {
      CHECK(r.provenance.has_value());
      CHECK(r.n_points == 11);
    }
  CHECK(res.records.size() >= 2);
}
