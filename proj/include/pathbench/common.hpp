#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace pathbench {

enum class ErrorKind {
  InvalidPolyline,
  ChordTooShort,
  OutOfRange,
  DegenerateOverlap,
  DegenerateBBox,
  FamilyInapplicable,
  ConstructionFailed,
  MutationInfeasible,
  GrowthInfeasible,
  TooManyPoints,
  PlacementInfeasible,
  LayoutInfeasible,
  SchemaMismatch,
  MalformedLine,
  JoinFailure,
  InsufficientData,
  RankDeficient,
  SvgParse,
  RasterBackendUnavailable,
  TransportError,
  AuthError,
  Timeout,
  IoError,
  UsageError,
};

const char* error_kind_name(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& msg)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + msg), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(Point2 a, double s) { return {a.x * s, a.y * s}; }
inline Point2 operator*(double s, Point2 a) { return a * s; }

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::sqrt(dot(a, a)); }
inline double dist(Point2 a, Point2 b) { return norm(a - b); }

// Ordered open polyline in view coordinates. Valid instances have at least
// two vertices, finite coordinates, and no two consecutive vertices equal.
using Polyline = std::vector<Point2>;

void require_valid_polyline(const Polyline& p);

double dist_point_segment(Point2 p, Point2 a, Point2 b);
double dist_segment_segment(Point2 a1, Point2 a2, Point2 b1, Point2 b2);

}  // namespace pathbench
