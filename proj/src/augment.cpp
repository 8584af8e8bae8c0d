#include <algorithm>
#include <cmath>
#include <sstream>

#include "dw/generators.hpp"
#include "dw/quality.hpp"
#include "dw/spatial.hpp"

namespace dw::generators {
namespace {

struct Sphere3 {
  Point3 q;
  double r;
};

// Circumspheres of triples of the current set with r <= 2 eps, indexed by
// centre for local queries.
class TriangleStore {
 public:
  explicit TriangleStore(double eps) : eps_(eps), centres_(eps) {}

  void add(const Point3& a, const Point3& b, const Point3& c) {
    const Triangle t{a, b, c};
    if (!mesh::is_regular(t)) return;
    const Circumdata d = mesh::circumcenter(t);
    if (d.r > 2.0 * eps_) return;
    centres_.insert(d.q);
    radii_.push_back(d.r);
  }

  // min | |p - q| - r | over stored spheres, capped at `cap`.
  double margin(const Point3& p, double cap) const {
    double best = cap;
    for (int id : centres_.within(p, 2.0 * eps_ + cap)) {
      best = std::min(best, std::abs((p - centres_.points()[id]).norm() - radii_[id]));
    }
    return best;
  }

 private:
  double eps_;
  PointGrid centres_;
  std::vector<double> radii_;
};

}  // namespace

std::vector<Point3> augment_protected(std::span<const Point3> seed, const AnalyticSurface& surface, double eps,
                                      double delta, double c) {
  if (!(eps > 0) || !(c > 0) || !(delta > 0)) throw Error(ErrorKind::InvalidArgument, "eps, delta, c must be positive");
  const double spacing_floor = 0.5 * eps * (1.0 - 1e-12);
  if (quality::min_spacing(seed) < spacing_floor)
    throw Error(ErrorKind::InvalidArgument, "seed spacing below eps / 2");
  const double seed_margin = quality::protection_margin(seed, eps);
  if (seed_margin < 0.5 * delta * eps * (1.0 - 1e-12)) {
    std::ostringstream s;
    s << "seed protection " << seed_margin << " below delta eps / 2 = " << 0.5 * delta * eps;
    throw Error(ErrorKind::InvalidArgument, s.str());
  }

  const double h = eps / 20.0;
  const SurfaceSample sample = surface.sample(h);
  const double reach = eps - sample.covering_bound;
  const PointGrid sample_grid(sample.points, 0.5 * eps);

  std::vector<Point3> points(seed.begin(), seed.end());
  PointGrid grid(eps);
  for (const auto& p : points) grid.insert(p);
  TriangleStore store(eps);
  for (std::size_t i = 0; i < points.size(); ++i)
    for (int j : grid.within(points[i], 4.0 * eps))
      for (int k : grid.within(points[i], 4.0 * eps))
        if (static_cast<int>(i) < j && j < k) store.add(points[i], points[j], points[k]);

  const double need = c * eps;
  auto admissible = [&](const Point3& p) {
    if (grid.any_within(p, spacing_floor)) return false;
    // p outside every stored circumsphere band.
    if (store.margin(p, need) < need) return false;
    // New triangles [p, y, z] against the existing points.
    const auto near = grid.within(p, 4.0 * eps);
    for (std::size_t a = 0; a < near.size(); ++a)
      for (std::size_t b = a + 1; b < near.size(); ++b) {
        const Triangle t{p, points[near[a]], points[near[b]]};
        if (!mesh::is_regular(t)) continue;
        const Circumdata d = mesh::circumcenter(t);
        if (d.r > 2.0 * eps) continue;
        for (int w : grid.within(d.q, d.r + need)) {
          if (w == near[a] || w == near[b]) continue;
          if (std::abs((points[w] - d.q).norm() - d.r) < need) return false;
        }
      }
    return true;
  };

  for (const auto& x : sample.points) {
    if (grid.any_within(x, reach)) continue;
    int chosen = -1;
    for (int id : sample_grid.within(x, 0.5 * eps)) {
      if (admissible(sample.points[id])) {
        chosen = id;
        break;
      }
    }
    if (chosen < 0) {
      std::ostringstream s;
      s << "no admissible insertion point near (" << x.x() << ", " << x.y() << ", " << x.z() << ") at c=" << c;
      throw Error(ErrorKind::EmptyCandidateSet, s.str());
    }
    const Point3 p = sample.points[chosen];
    const auto near = grid.within(p, 4.0 * eps);
    for (std::size_t a = 0; a < near.size(); ++a)
      for (std::size_t b = a + 1; b < near.size(); ++b) store.add(p, points[near[a]], points[near[b]]);
    points.push_back(p);
    grid.insert(p);
  }
  return points;
}

AugmentResult augment_protected_adaptive(std::span<const Point3> seed, const AnalyticSurface& surface, double eps,
                                         double delta, double c, double min_c) {
  AugmentResult out;
  out.c = c;
  while (true) {
    try {
      out.points = augment_protected(seed, surface, eps, delta, out.c);
      out.inserted = out.points.size() - seed.size();
      return out;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::EmptyCandidateSet || out.c * 0.5 < min_c) throw;
      out.c *= 0.5;
      ++out.retries;
    }
  }
}

}  // namespace dw::generators
