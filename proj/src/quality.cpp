#include "dw/quality.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>

#include "dw/spatial.hpp"

namespace dw::quality {

QualityReport quality_report(const IndexedMesh& mesh, std::size_t max_violations) {
  QualityReport report;
  if (mesh.empty()) return report;
  report.min_diam = std::numeric_limits<double>::infinity();
  report.min_angle = std::numeric_limits<double>::infinity();
  double mean_diam = 0.0;
  for (std::size_t i = 0; i < mesh.triangles.size(); ++i) {
    const Triangle t = mesh.triangle(i);
    const double d = t.diameter();
    report.size = std::max(report.size, d);
    report.min_diam = std::min(report.min_diam, d);
    report.min_angle = std::min(report.min_angle, t.min_angle());
    mean_diam += d;
  }
  mean_diam /= static_cast<double>(mesh.triangles.size());
  report.zeta_regular_for = std::min(report.min_angle, report.min_diam / report.size);

  const PointGrid grid(mesh.vertices, std::max(mean_diam, 1e-300));
  for (std::size_t i = 0; i < mesh.triangles.size(); ++i) {
    const Triangle t = mesh.triangle(i);
    if (!mesh::is_regular(t)) continue;
    const Circumdata c = mesh::circumcenter(t);
    const auto& tri = mesh.triangles[i];
    for (int v : grid.within(c.q, c.r)) {
      if (v == tri[0] || v == tri[1] || v == tri[2]) continue;
      const double depth = c.r - (mesh.vertices[v] - c.q).norm();
      if (depth > kDelaunayBand * c.r) {
        if (report.delaunay_violations.size() >= max_violations) {
          report.violations_truncated = true;
          return report;
        }
        report.delaunay_violations.push_back({static_cast<int>(i), v, depth});
      }
    }
  }
  return report;
}

CoveringRadius covering_radius(std::span<const Point3> points, const AnalyticSurface& surface, double sample_density) {
  if (points.empty()) throw Error(ErrorKind::EmptyPointSet, "covering radius of an empty set");
  const SurfaceSample sample = surface.sample(sample_density);
  const PointGrid grid(points, suggested_cell_size(points));
  CoveringRadius out;
  for (const auto& x : sample.points) out.lower = std::max(out.lower, grid.nearest(x).second);
  out.upper = out.lower + sample.covering_bound;
  return out;
}

double min_spacing(std::span<const Point3> points) {
  double best = std::numeric_limits<double>::infinity();
  if (points.size() < 2) return best;
  PointGrid grid(suggested_cell_size(points));
  for (const auto& p : points) {
    if (grid.size() > 0) best = std::min(best, grid.nearest(p).second);
    grid.insert(p);
  }
  return best;
}

double protection_margin(std::span<const Point3> points, double radius_limit, std::size_t* triples) {
  double best = std::numeric_limits<double>::infinity();
  std::size_t count = 0;
  if (points.size() < 4 || !(radius_limit > 0)) {
    if (triples) *triples = 0;
    return best;
  }
  const PointGrid grid(points, std::max(radius_limit, suggested_cell_size(points)));
  const double reach = 2.0 * radius_limit;
  const int n = static_cast<int>(points.size());
  for (int i = 0; i < n; ++i) {
    std::vector<int> nbrs;
    for (int j : grid.within(points[i], reach))
      if (j > i) nbrs.push_back(j);
    for (std::size_t a = 0; a < nbrs.size(); ++a) {
      for (std::size_t b = a + 1; b < nbrs.size(); ++b) {
        const int j = nbrs[a], k = nbrs[b];
        if ((points[j] - points[k]).norm() > reach) continue;
        const Triangle t{points[i], points[j], points[k]};
        if (!mesh::is_regular(t)) continue;
        const Circumdata c = mesh::circumcenter(t);
        if (c.r > radius_limit) continue;
        ++count;
        const double cap = std::isfinite(best) ? best : c.r;
        bool found = false;
        double local = std::numeric_limits<double>::infinity();
        for (int p : grid.within(c.q, c.r + cap)) {
          if (p == i || p == j || p == k) continue;
          local = std::min(local, std::abs((points[p] - c.q).norm() - c.r));
          found = true;
        }
        if (!found && !std::isfinite(best)) {
          for (int p = 0; p < n; ++p) {
            if (p == i || p == j || p == k) continue;
            local = std::min(local, std::abs((points[p] - c.q).norm() - c.r));
          }
        }
        best = std::min(best, local);
      }
    }
  }
  if (triples) *triples = count;
  return best;
}

ProtectionReport protection_report(std::span<const Point3> points, const AnalyticSurface& surface,
                                   double sample_density) {
  ProtectionReport report;
  report.covering = covering_radius(points, surface, sample_density);
  report.min_spacing = min_spacing(points);
  report.protection_margin = protection_margin(points, report.covering.upper, &report.triples_tested);
  report.protected_at = report.protection_margin;
  return report;
}

namespace {
std::string num(double x) {
  std::ostringstream s;
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  s << std::setprecision(12) << x;
  return s.str();
}
}  // namespace

std::string to_key_value(const QualityReport& r) {
  std::ostringstream s;
  s << "size=" << num(r.size) << '\n'
    << "min_diam=" << num(r.min_diam) << '\n'
    << "min_angle=" << num(r.min_angle) << '\n'
    << "min_angle_deg=" << num(r.min_angle * 180.0 / std::numbers::pi) << '\n'
    << "zeta_regular_for=" << num(r.zeta_regular_for) << '\n'
    << "delaunay=" << (r.delaunay() ? "true" : "false") << '\n'
    << "delaunay_violations=" << r.delaunay_violations.size() << (r.violations_truncated ? "+" : "") << '\n';
  return s.str();
}

std::string to_key_value(const ProtectionReport& r) {
  std::ostringstream s;
  s << "covering_radius_lower=" << num(r.covering.lower) << '\n'
    << "covering_radius_upper=" << num(r.covering.upper) << '\n'
    << "min_spacing=" << num(r.min_spacing) << '\n'
    << "protection_margin=" << num(r.protection_margin) << '\n'
    << "protected_at=" << num(r.protected_at) << '\n'
    << "triples_tested=" << r.triples_tested << '\n';
  return s.str();
}

void write_violations_csv(std::ostream& out, const QualityReport& report) {
  out << "triangle,vertex,depth\n";
  for (const auto& v : report.delaunay_violations)
    out << v.triangle << ',' << v.vertex << ',' << std::setprecision(17) << v.depth << '\n';
}

}  // namespace dw::quality
