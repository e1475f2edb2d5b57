#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "oracle_util.hpp"
#include "pathbench/geometry.hpp"
#include "pathbench/rng.hpp"

using namespace pathbench;

namespace {

Polyline pentagram_closed() {
  // {5/2} traversal on the unit circle, closed back to the start
  Polyline p;
  for (int j = 0; j <= 5; ++j) {
    double ang = 2.0 * M_PI * ((j * 2) % 5) / 5.0;
    p.push_back({std::cos(ang), std::sin(ang)});
  }
  return p;
}

}  // namespace

TEST_CASE("arc_length fixtures") {
  CHECK(arc_length({{0, 0}, {3, 0}, {3, 4}}) == doctest::Approx(7.0).epsilon(1e-12));
  CHECK(arc_length({{0, 0}, {1, 0}}) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(arc_length({{0, 0}}), Error);
  CHECK_THROWS_AS(arc_length({{0, 0}, {0, 0}}), Error);
}

TEST_CASE("tortuosity fixtures") {
  CHECK(tortuosity({{0, 0}, {10, 0}}) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(tortuosity({{0, 0}, {1, 0}, {1, 1}}) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
  CHECK(tortuosity({{0, 0}, {0, 1}, {1, 1}, {1, 0}}) == doctest::Approx(3.0).epsilon(1e-9));
  Polyline closed{{0, 0}, {1, 0}, {1, 1}, {0, 1e-9}};
  CHECK_THROWS_AS(tortuosity(closed, 1e-6), Error);
  try {
    tortuosity(closed, 1e-6);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ChordTooShort);
  }
}

TEST_CASE("self_intersections fixtures") {
  CHECK(self_intersections({{0, 0}, {1, 1}, {2, 0}}).empty());

  auto cs = self_intersections({{0, 0}, {2, 2}, {2, 0}, {0, 2}});
  REQUIRE(cs.size() == 1);
  CHECK(cs[0].seg_a == 0);
  CHECK(cs[0].seg_b == 2);
  CHECK(cs[0].point.x == doctest::Approx(1.0));
  CHECK(cs[0].point.y == doctest::Approx(1.0));
  CHECK(cs[0].first_pass_vertex == 1);
  CHECK(cs[0].second_pass_vertex == 3);

  // five-point star: expected count frozen from the brute-force oracle
  auto star = pentagram_closed();
  auto brute = oracle::brute_crossings(star);
  CHECK(brute.size() == 5);
  CHECK(self_intersections(star).size() == 5);

  Polyline overlap{{0, 0}, {10, 0}, {10, 5}, {2, 0}, {8, 0}};
  CHECK_THROWS_AS(self_intersections(overlap), Error);
}

TEST_CASE("binning fixtures and partition") {
  CHECK(bin_tortuosity(1.15) == 0);
  CHECK(bin_tortuosity(1.3) == 1);
  CHECK(bin_tortuosity(2.0) == 2);
  CHECK(bin_tortuosity(1.0 - 5e-10) == 0);
  CHECK_THROWS_AS(bin_tortuosity(9.4), Error);
  CHECK_THROWS_AS(bin_tortuosity(9.0), Error);
  CHECK_THROWS_AS(bin_tortuosity(0.9), Error);

  CHECK(bin_intersections(0) == 0);
  CHECK(bin_intersections(1) == 1);
  CHECK(bin_intersections(2) == 2);
  CHECK(bin_intersections(3) == 2);
  CHECK(bin_intersections(4) == 3);
  CHECK(bin_intersections(6) == 4);
  CHECK(bin_intersections(9) == 5);
  CHECK(bin_intersections(12) == 5);
  CHECK_THROWS_AS(bin_intersections(13), Error);
  CHECK_THROWS_AS(bin_intersections(-1), Error);

  // partition: every in-range value maps to exactly one left-closed bin
  for (double t = 1.0; t < 9.0; t += 0.01) {
    int b = bin_tortuosity(t);
    CHECK(t >= BinThresholds::tortuosity_edges[static_cast<size_t>(b)]);
    CHECK(t < BinThresholds::tortuosity_edges[static_cast<size_t>(b) + 1]);
  }
  for (int c = 0; c < 13; ++c) {
    int b = bin_intersections(c);
    CHECK(c >= BinThresholds::intersection_edges[static_cast<size_t>(b)]);
    CHECK(c < BinThresholds::intersection_edges[static_cast<size_t>(b) + 1]);
  }
}

TEST_CASE("separation distances") {
  Polyline rect{{0, 0}, {10, 0}, {10, 5}, {0, 5}};
  auto sep = separation_distances(rect, 0.0);
  CHECK(sep.segment_segment == doctest::Approx(5.0));
  CHECK(sep.vertex_segment == doctest::Approx(5.0));

  // bowtie fully inside the masking disc: crossing pair exempt entirely
  Polyline bow{{0, 0}, {2, 2}, {2, 0}, {0, 2}};
  auto masked = separation_distances(bow, 10.0);
  CHECK(std::isinf(masked.segment_segment));
  CHECK(masked.vertex_segment == doctest::Approx(std::sqrt(2.0)));
  // without masking the crossing pair contributes zero
  CHECK(separation_distances(bow, 0.0).segment_segment == doctest::Approx(0.0));

  auto two = separation_distances({{0, 0}, {1, 0}}, 0.0);
  CHECK(std::isinf(two.segment_segment));
  CHECK(std::isinf(two.vertex_segment));
}

TEST_CASE("check_constraints rules") {
  GeometryConfig g;
  CHECK(g.spacing() == doctest::Approx(32.0));

  auto has_rule = [](const AcceptanceReport& r, Rule rule) {
    for (const auto& v : r.violations)
      if (v.rule == rule) return true;
    return false;
  };

  // straight 2-segment path, 100 px segments: rule 1 passes with S = 32
  Polyline straight{{0, 0}, {100, 0}, {200, 0}};
  auto rep = check_constraints(straight, g, true);
  CHECK(!has_rule(rep, Rule::min_segment_length));

  // near-reversal: interior deviation of 178 degrees against the 160 cap
  double ang = 178.0 * M_PI / 180.0;
  Polyline rev{{0, 0}, {100, 0}, {100 + 100 * std::cos(ang), 100 * std::sin(ang)}};
  CHECK(has_rule(check_constraints(rev, g, false), Rule::reversal_angle));

  GeometryConfig seam = g;
  seam.seam_avoidance = true;
  Polyline on_seam{{336, 100}, {400, 200}, {500, 100}};
  CHECK(has_rule(check_constraints(on_seam, seam, false), Rule::seam_proximity));
  Polyline off_seam{{200, 100}, {280, 200}, {200, 300}};
  CHECK(!has_rule(check_constraints(off_seam, seam, false), Rule::seam_proximity));

  // short segments fail rule 1 only when glyphs raise the threshold
  Polyline tight{{0, 0}, {20, 0}, {40, 14}};
  CHECK(has_rule(check_constraints(tight, g, true), Rule::min_segment_length));
  CHECK(!has_rule(check_constraints(tight, g, false), Rule::min_segment_length));
}

TEST_CASE("check_constraints threshold monotonicity") {
  Rng rng(411);
  GeometryConfig strict;
  strict.min_segment_len = 30;
  strict.min_nonlocal_sep = 20;
  strict.min_vertex_seg_sep = 18;
  strict.min_extent = 400;
  strict.reversal_angle_min_deg = 45;
  GeometryConfig relaxed = strict;
  relaxed.min_segment_len = 5;
  relaxed.min_nonlocal_sep = 4;
  relaxed.min_vertex_seg_sep = 3;
  relaxed.min_extent = 50;
  relaxed.reversal_angle_min_deg = 10;

  for (int it = 0; it < 120; ++it) {
    auto p = oracle::random_polyline(rng, 12);
    auto vs = check_constraints(p, strict, false);
    auto vr = check_constraints(p, relaxed, false);
    std::set<std::tuple<int, int, int>> strict_set;
    for (const auto& v : vs.violations)
      strict_set.insert({static_cast<int>(v.rule), v.index_a, v.index_b});
    for (const auto& v : vr.violations)
      CHECK(strict_set.count({static_cast<int>(v.rule), v.index_a, v.index_b}) == 1);
  }
}

TEST_CASE("fit_to_view") {
  GeometryConfig g;
  Polyline square{{0, 0}, {0, 1}, {1, 1}, {1, 0}};
  auto fitted = fit_to_view(square, g);
  double minx = 1e9, maxx = -1e9, miny = 1e9, maxy = -1e9;
  for (auto v : fitted) {
    minx = std::min(minx, v.x);
    maxx = std::max(maxx, v.x);
    miny = std::min(miny, v.y);
    maxy = std::max(maxy, v.y);
  }
  CHECK(minx == doctest::Approx(40.0));
  CHECK(maxx == doctest::Approx(632.0));
  CHECK(miny == doctest::Approx(40.0));
  CHECK(maxy == doctest::Approx(632.0));

  auto line = fit_to_view({{3, 7}, {11, 7}}, g);
  CHECK(line[0].x == doctest::Approx(40.0));
  CHECK(line[1].x == doctest::Approx(632.0));
  CHECK(line[0].y == doctest::Approx(336.0));

  auto twice = fit_to_view(fitted, g);
  for (size_t i = 0; i < fitted.size(); ++i) {
    CHECK(twice[i].x == doctest::Approx(fitted[i].x).epsilon(1e-9));
    CHECK(twice[i].y == doctest::Approx(fitted[i].y).epsilon(1e-9));
  }

  CHECK_THROWS_AS(fit_to_view({{1, 1}, {1, 1}}, g), Error);
}

TEST_CASE("fit preserves tortuosity, crossings, turning angles") {
  Rng rng(7021);
  GeometryConfig g;
  for (int it = 0; it < 100; ++it) {
    auto p = oracle::random_polyline(rng, 14);
    double chord = dist(p.front(), p.back());
    if (chord < 1.0) continue;
    auto fitted = fit_to_view(p, g);
    CHECK(self_intersections(fitted).size() == self_intersections(p).size());
    double t0 = tortuosity(p);
    if (t0 < 50.0)
      CHECK(tortuosity(fitted) == doctest::Approx(t0).epsilon(1e-9));
    for (int i = 1; i + 1 < static_cast<int>(p.size()); ++i)
      CHECK(turn_deviation_deg(fitted, i) == doctest::Approx(turn_deviation_deg(p, i)).epsilon(1e-6));
  }
}

TEST_CASE("tortuosity invariant under rigid motion and scale") {
  Rng rng(99);
  for (int it = 0; it < 200; ++it) {
    auto p = oracle::random_polyline(rng, 16);
    if (dist(p.front(), p.back()) < 1.0) continue;
    double t0 = tortuosity(p);
    double ang = rng.uniform(0, 2 * M_PI), s = rng.uniform(0.1, 10.0);
    double c = std::cos(ang), sn = std::sin(ang);
    Point2 shift{rng.uniform(-50, 50), rng.uniform(-50, 50)};
    Polyline q;
    for (auto v : p) q.push_back({s * (v.x * c - v.y * sn) + shift.x, s * (v.x * sn + v.y * c) + shift.y});
    CHECK(tortuosity(q) == doctest::Approx(t0).epsilon(1e-9));
  }
}

TEST_CASE("crossing count invariant under positive-determinant affine maps") {
  Rng rng(1234);
  for (int it = 0; it < 120; ++it) {
    auto p = oracle::random_polyline(rng, 14);
    double a = rng.uniform(0.3, 2.0), b = rng.uniform(-0.6, 0.6);
    double cc = rng.uniform(-0.6, 0.6), d = rng.uniform(0.3, 2.0);
    if (a * d - b * cc <= 0.05) continue;
    Polyline q;
    for (auto v : p) q.push_back({a * v.x + b * v.y + 5, cc * v.x + d * v.y - 3});
    CHECK(self_intersections(q).size() == self_intersections(p).size());
  }
}

TEST_CASE("oracle equivalence on random polylines") {
  Rng rng(20260809);
  for (int it = 0; it < 400; ++it) {
    auto p = oracle::random_polyline(rng);
    auto got = self_intersections(p);
    auto want = oracle::brute_crossings(p);
    REQUIRE(got.size() == want.size());
    for (size_t i = 0; i < got.size(); ++i) {
      bool found = false;
      for (const auto& w : want)
        if (w.seg_a == got[i].seg_a && w.seg_b == got[i].seg_b &&
            std::fabs(w.point.x - got[i].point.x) < 1e-9 &&
            std::fabs(w.point.y - got[i].point.y) < 1e-9)
          found = true;
      CHECK(found);
    }
  }
}
