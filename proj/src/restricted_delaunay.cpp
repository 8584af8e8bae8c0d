#include <algorithm>
#include <cmath>
#include <sstream>

#include "dw/generators.hpp"
#include "dw/quality.hpp"
#include "dw/spatial.hpp"

namespace dw::generators {
namespace {

// Roots of f on [-T, T] by sign scan and bisection.
std::vector<double> roots_on_segment(const std::function<double(double)>& f, double T, int steps = 64) {
  std::vector<double> out;
  double t0 = -T, f0 = f(t0);
  if (f0 == 0.0) out.push_back(t0);
  for (int i = 1; i <= steps; ++i) {
    const double t1 = -T + 2.0 * T * i / steps;
    const double f1 = f(t1);
    if (f1 == 0.0) {
      out.push_back(t1);
    } else if ((f0 < 0.0 && f1 > 0.0) || (f0 > 0.0 && f1 < 0.0)) {
      double lo = t0, hi = t1, flo = f0;
      for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + T); ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((fm < 0.0) == (flo < 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      out.push_back(0.5 * (lo + hi));
    }
    t0 = t1;
    f0 = f1;
  }
  return out;
}

}  // namespace

IndexedMesh restricted_delaunay(std::span<const Point3> points, const AnalyticSurface& surface,
                                const RestrictedDelaunayOptions& options) {
  if (points.size() < 3) throw Error(ErrorKind::EmptyPointSet, "need at least three points");
  double spacing = options.sample_spacing;
  if (!(spacing > 0)) spacing = quality::min_spacing(points) / 20.0;
  const CoveringRadius cover = quality::covering_radius(points, surface, spacing);
  const double D = cover.upper;

  const double margin = quality::protection_margin(points, D);
  if (!(margin > 1e-9 * D) || margin < options.protection) {
    std::ostringstream s;
    s << "protection margin " << margin << " below required " << std::max(options.protection, 1e-9 * D);
    throw Error(ErrorKind::InsufficientProtection, s.str());
  }

  const PointGrid grid(points, D);
  const int n = static_cast<int>(points.size());
  IndexedMesh mesh;
  mesh.vertices.assign(points.begin(), points.end());
  for (int i = 0; i < n; ++i) {
    std::vector<int> nbrs;
    for (int j : grid.within(points[i], 2.0 * D))
      if (j > i) nbrs.push_back(j);
    for (std::size_t a = 0; a < nbrs.size(); ++a) {
      for (std::size_t b = a + 1; b < nbrs.size(); ++b) {
        const int j = nbrs[a], k = nbrs[b];
        if ((points[j] - points[k]).norm() > 2.0 * D) continue;
        const Triangle t{points[i], points[j], points[k]};
        if (!mesh::is_regular(t)) continue;
        const Circumdata c = mesh::circumcenter(t);
        if (c.r > D) continue;
        const Vec3 nrm = mesh::triangle_normal(t);
        const double T = std::sqrt(std::max(D * D - c.r * c.r, 0.0));
        const auto roots = roots_on_segment([&](double s) { return surface.implicit(c.q + s * nrm); }, T);
        for (double s : roots) {
          const Point3 x = c.q + s * nrm;
          if (!surface.in_domain(x, 1e-12 * D)) continue;
          const double rho = std::hypot(c.r, s);
          bool empty = true;
          for (int p : grid.within(x, rho)) {
            if (p == i || p == j || p == k) continue;
            if ((points[p] - x).norm() < rho - 1e-12 * D) {
              empty = false;
              break;
            }
          }
          if (!empty) continue;
          TriangleIndices tri{i, j, k};
          if (nrm.dot(surface.implicit_gradient(x)) < 0.0) std::swap(tri[1], tri[2]);
          mesh.triangles.push_back(tri);
          break;
        }
      }
    }
  }
  const mesh::ManifoldVerdict verdict = mesh::check_manifold(mesh);
  if (!verdict.pass) {
    std::ostringstream s;
    s << verdict.violations.size() << " manifold violations, first: " << verdict.violations.front().detail;
    throw Error(ErrorKind::NonManifoldOutput, s.str());
  }
  return mesh;
}

}  // namespace dw::generators
