#pragma once

// Mesh quality: size, angles, zeta-regularity, Delaunay test, covering
// radius, spacing and protection of point sets.

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "dw/mesh.hpp"
#include "dw/surfaces.hpp"

namespace dw {

struct DelaunayViolation {
  int triangle = -1;
  int vertex = -1;
  double depth = 0.0;  // r - |p - q| > 0
};

struct QualityReport {
  double size = 0.0;
  double min_diam = 0.0;
  double min_angle = 0.0;
  double zeta_regular_for = 0.0;  // min(min_angle, min_diam / size)
  std::vector<DelaunayViolation> delaunay_violations;
  bool violations_truncated = false;  // stopped at the requested cap

  bool delaunay() const { return delaunay_violations.empty(); }
  bool zeta_regular(double zeta) const { return zeta_regular_for >= zeta; }
};

/// [lower, upper] bracket of max_{x in N} min_{y in X} |x - y|.
struct CoveringRadius {
  double lower = 0.0;
  double upper = 0.0;
};

struct ProtectionReport {
  CoveringRadius covering;
  double min_spacing = 0.0;
  double protection_margin = std::numeric_limits<double>::infinity();
  double protected_at = std::numeric_limits<double>::infinity();
  std::size_t triples_tested = 0;
};

namespace quality {

/// Points closer to the circumsphere than kDelaunayBand * r count as on it.
inline constexpr double kDelaunayBand = 1e-9;

/// Delaunay test is exhaustive over all (triangle, vertex) pairs; the
/// spatial hash only skips vertices outside the circumball. Collection
/// stops after max_violations entries.
QualityReport quality_report(const IndexedMesh& mesh,
                             std::size_t max_violations = std::numeric_limits<std::size_t>::max());

/// Surface sampled at spacing `sample_density`; lower is the max nearest
/// distance over the samples, upper adds the sample covering bound.
/// Throws EmptyPointSet.
CoveringRadius covering_radius(std::span<const Point3> points, const AnalyticSurface& surface,
                               double sample_density);

/// Minimum pairwise distance; +inf for fewer than two points.
double min_spacing(std::span<const Point3> points);

/// min over triples {x, y, z} with circumradius <= radius_limit and points
/// p outside the triple of | |p - q| - r |. +inf when no triple qualifies.
/// `triples` receives the number of triples tested.
double protection_margin(std::span<const Point3> points, double radius_limit, std::size_t* triples = nullptr);

/// Covering bracket, spacing and protection margin for triples with
/// circumradius <= covering.upper.
ProtectionReport protection_report(std::span<const Point3> points, const AnalyticSurface& surface,
                                   double sample_density);

/// Flat key=value text, one entry per line.
std::string to_key_value(const QualityReport& report);
std::string to_key_value(const ProtectionReport& report);
/// CSV triangle,vertex,depth; one row per Delaunay violation.
void write_violations_csv(std::ostream& out, const QualityReport& report);

}  // namespace quality
}  // namespace dw
