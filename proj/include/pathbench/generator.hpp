#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pathbench/geometry.hpp"

namespace pathbench {

enum class FamilyKind {
  bowtie,
  rail_weave,
  split_star,
  braid,
  knot_template,
  proposal_walk,
  bootstrap,
};

const char* family_name(FamilyKind f);
FamilyKind family_from_name(const std::string& name);

// Families whose vertex sets are structural and must not be resampled to hit
// a point-count target.
bool points_preserving(FamilyKind f);

struct CellTarget {
  int tbin = 0;
  int sbin = 0;
  int n_points = 2;
  int quota = 1;
};

struct BackboneRecord {
  int64_t id = 0;
  FamilyKind family = FamilyKind::proposal_walk;
  Polyline vertices;
  double tortuosity = 0.0;
  int crossings = 0;
  int tbin = 0;
  int sbin = 0;
  int n_points = 0;
  uint64_t seed = 0;
  std::optional<int64_t> provenance;  // source record id for bootstrap growth
};

struct Signature {
  std::vector<Point2> samples;  // arc-length uniform, unit-bbox normalized
};

bool family_applicable(FamilyKind f, const CellTarget& cell);

Polyline propose(FamilyKind f, const CellTarget& cell, uint64_t seed, const GeometryConfig& g);

enum class MutationKind {
  anisotropic_scale,
  local_warp,
  extend_endpoint,
  safe_split,
  permute_crossings,
};

Polyline mutate(const Polyline& p, MutationKind kind, uint64_t seed, const GeometryConfig& g);

// Fits, measures, bins, and gates the candidate against the cell. Rejection
// is the empty optional; the returned record stores the fitted vertices, with
// id and seed left for the caller.
std::optional<BackboneRecord> accept(const Polyline& candidate, const CellTarget& cell,
                                     const GeometryConfig& g);

Polyline bootstrap_grow(const BackboneRecord& source, int target_n, const GeometryConfig& g,
                        uint64_t seed);

constexpr int kSignatureSamples = 64;

Signature signature(const Polyline& p);
double signature_distance(const Signature& a, const Signature& b);

std::vector<BackboneRecord> dedup(const std::vector<BackboneRecord>& records, double threshold,
                                  int max_reps);

enum class CellStatus { filled, partial, infeasible, skipped };
const char* cell_status_name(CellStatus s);

struct CellResult {
  CellTarget cell;
  std::vector<BackboneRecord> records;
  CellStatus status = CellStatus::infeasible;
  int attempts = 0;
};

struct BootstrapRule {
  int tbin = 0;
  int sbin = 0;
  int n_points = 0;   // cell that uses bootstrap growth
  int source_n = 0;   // point count of the source records
};

struct GeneratorConfig {
  GeometryConfig geom;
  std::vector<CellTarget> cells;
  std::vector<std::pair<int, int>> skip_cells;  // (tbin, sbin) skipped a priori
  std::vector<BootstrapRule> bootstrap;
  uint64_t master_seed = 0;
  int budget_per_cell = 20000;
  double dedup_threshold = 0.05;
  int dedup_max_reps = 25;
};

// Default 6x6 grid over the configured point counts.
std::vector<CellTarget> default_grid(const std::vector<int>& point_counts, int quota);
std::vector<int> default_point_counts();  // {9, 11, 13, 15, 17}

// Source records available for bootstrap growth, keyed by (tbin, sbin, n_points).
class SourceStore {
 public:
  void add(const BackboneRecord& r);
  const std::vector<BackboneRecord>* find(int tbin, int sbin, int n_points) const;

 private:
  std::map<std::tuple<int, int, int>, std::vector<BackboneRecord>> by_cell_;
};

CellResult generate_cell(const CellTarget& cell, const GeneratorConfig& cfg,
                         const SourceStore* sources);

struct GridResult {
  std::vector<CellResult> cells;       // one per requested cell, config order
  std::vector<BackboneRecord> records; // ids assigned in canonical cell order
};

GridResult generate_grid(const GeneratorConfig& cfg, int jobs);

// Backbone JSONL and the coverage sidecar.
void write_backbones(const std::string& path, const std::vector<BackboneRecord>& records);
std::vector<BackboneRecord> read_backbones(const std::string& path);
void write_coverage_csv(const std::string& path, const std::vector<CellResult>& cells);

// Re-measures a record from its vertices; returns a list of mismatch
// descriptions (empty when the record is self-consistent and passes the
// glyph-aware gate).
std::vector<std::string> validate_record(const BackboneRecord& r, const GeometryConfig& g);

}  // namespace pathbench
