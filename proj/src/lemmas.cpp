#include "dw/lemmas.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "dw/generators.hpp"
#include "dw/traversal.hpp"

namespace dw {

bool LemmaReport::pass() const {
  return std::all_of(suites.begin(), suites.end(), [](const LemmaSuite& s) { return s.pass(); });
}

namespace lemmas {
namespace {

struct Rng {
  std::mt19937_64 engine;
  std::uniform_real_distribution<double> unit{0.0, 1.0};
  std::normal_distribution<double> gauss{0.0, 1.0};

  double u01() { return unit(engine); }
  double uniform(double a, double b) { return a + (b - a) * u01(); }
  double normal() { return gauss(engine); }
  int below(int n) { return static_cast<int>(engine() % static_cast<std::uint64_t>(n)); }
  bool coin(double p = 0.5) { return u01() < p; }
};

// Flat theta-grid covering [0, 1]^2 with a margin of `margin` grid steps.
FlatMeshIndex random_grid(Rng& rng, double eps, double margin) {
  ThetaGridSpec spec;
  const double m = margin * eps;
  spec.field = ScalarField2D::affine(0.0, 0.0, 0.0, Rect{-m, 1.0 + m, -m, 1.0 + m});
  spec.eps = eps;
  spec.theta = rng.uniform(0.1, 0.5) * (rng.coin() ? 1.0 : -1.0);
  return FlatMeshIndex(generators::theta_grid_flat(spec));
}

double random_eps(Rng& rng) {
  static constexpr double kSteps[] = {1.0 / 8, 1.0 / 10, 1.0 / 12, 1.0 / 16};
  return kSteps[rng.below(4)];
}

Vec2 random_direction(Rng& rng, double lo, double hi) {
  const double phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
  return rng.uniform(lo, hi) * Vec2(std::cos(phi), std::sin(phi));
}

// Interior edge of the grid chosen uniformly: endpoints and the apex on
// the L side.
struct EdgePick {
  Vec2 a, b, apex_l;
};

EdgePick random_edge(Rng& rng, const FlatMeshIndex& index) {
  const auto& edges = index.adjacency().edges;
  while (true) {
    const Edge& e = edges[rng.below(static_cast<int>(edges.size()))];
    if (!e.interior()) continue;
    int apex = -1;
    for (int v : index.mesh().triangles[e.tri_l])
      if (v != e.v0 && v != e.v1) apex = v;
    return {index.vertex(e.v0), index.vertex(e.v1), index.vertex(apex)};
  }
}

LemmaSuite indicator_suite(Rng& rng, const LemmaOptions& o) {
  LemmaSuite s{"indicator_area", o.trials, 0, 0.0, "relative error of Monte Carlo area vs |v| l theta"};
  for (int t = 0; t < o.trials; ++t) {
    const FlatMeshIndex grid = random_grid(rng, random_eps(rng), 1.0);
    const EdgePick e = random_edge(rng, grid);
    const Vec2 v = random_direction(rng, 0.05, 0.5);
    const double mc = traversal::indicator_area_mc(e.a, e.b, v, o.mc_strata, [&] { return rng.u01(); });
    const double exact = o.rhs_scale * traversal::indicator_area(e.a, e.b, v);
    const double err = std::abs(mc - exact) / exact;
    s.worst = std::max(s.worst, err);
    if (err <= o.mc_tolerance) ++s.passed;
  }
  return s;
}

LemmaSuite lifted_suite(Rng& rng, const LemmaOptions& o) {
  LemmaSuite s{"lifted_indicator_area", o.trials, 0, 0.0,
               "relative error of Monte Carlo area vs |v_bar| theta_bar l_bar / sqrt(1 + |w|^2)"};
  for (int t = 0; t < o.trials; ++t) {
    const FlatMeshIndex grid = random_grid(rng, random_eps(rng), 1.0);
    const EdgePick e = random_edge(rng, grid);
    const Vec2 v = random_direction(rng, 0.05, 0.5);
    const Vec2 w = random_direction(rng, 0.0, 2.0);
    const double mc = traversal::indicator_area_mc(e.a, e.b, v, o.mc_strata, [&] { return rng.u01(); });
    const double lifted = o.rhs_scale * traversal::lifted_indicator_area(e.a, e.b, e.apex_l, v, w);
    const double err = std::abs(mc - lifted) / lifted;
    s.worst = std::max(s.worst, err);
    if (err <= o.mc_tolerance) ++s.passed;
  }
  return s;
}

LemmaSuite telescoping_suite(Rng& rng, const LemmaOptions& o) {
  LemmaSuite s{"telescoping", o.trials, 0, 0.0, "absolute residual of the circumcenter telescoping sum"};
  for (int t = 0; t < o.trials; ++t) {
    const FlatMeshIndex grid = random_grid(rng, random_eps(rng), 2.0);
    Vec2 x, v;
    do {
      x = Vec2(rng.u01(), rng.u01());
      v = random_direction(rng, 0.01, 1.0);
    } while ((x + v).minCoeff() < 0 || (x + v).maxCoeff() > 1);
    const CrossingSequence seq = traversal::cross(grid, x, v);
    const IndexedMesh& m = grid.mesh();
    const Vec2 dir = v.normalized();
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < seq.triangles.size(); ++i) {
      const Vec2 a = mesh::circumcenter(m.triangle(seq.triangles[i])).q.head<2>();
      const Vec2 b = mesh::circumcenter(m.triangle(seq.triangles[i + 1])).q.head<2>();
      sum += (b - a).dot(dir);
    }
    const Vec2 q0 = mesh::circumcenter(m.triangle(seq.triangles.front())).q.head<2>();
    const Vec2 qn = mesh::circumcenter(m.triangle(seq.triangles.back())).q.head<2>();
    const double residual = std::abs(sum - o.rhs_scale * (qn - q0).dot(dir));
    s.worst = std::max(s.worst, residual);
    if (residual <= o.telescoping_tolerance) ++s.passed;
  }
  return s;
}

// Random smooth heights at the grid vertices; zero in a third of the trials.
std::vector<double> random_heights(Rng& rng, const IndexedMesh& flat) {
  std::vector<double> h(flat.vertices.size(), 0.0);
  const int mode = rng.below(3);
  if (mode == 0) return h;
  const double a = rng.uniform(0.0, 0.3), b = rng.uniform(-0.3, 0.3), c = rng.uniform(-0.3, 0.3);
  const double f = rng.uniform(1.0, 6.0), g = rng.uniform(1.0, 6.0);
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double x = flat.vertices[i].x(), y = flat.vertices[i].y();
    h[i] = mode == 1 ? a * x * x + b * x * y + c * y * y : a * std::sin(f * x) * std::cos(g * y);
  }
  return h;
}

LemmaSuite cs_suite(Rng& rng, const LemmaOptions& o) {
  LemmaSuite s{"cauchy_schwarz", o.trials, 0, 0.0, "lhs / rhs of the difference-quotient bound"};
  for (int t = 0; t < o.trials; ++t) {
    const double eps = random_eps(rng) / (rng.coin() ? 1.0 : 2.0);
    const FlatMeshIndex grid = random_grid(rng, eps, 2.0);
    const IndexedMesh& flat = grid.mesh();
    const std::vector<double> heights = random_heights(rng, flat);

    const Vec2 v = random_direction(rng, 0.05, 0.35);
    // W inside {x : [x, x + v] in [0, 1]^2}, sometimes all of it.
    Rect W{std::max(0.0, -v.x()), std::min(1.0, 1.0 - v.x()), std::max(0.0, -v.y()), std::min(1.0, 1.0 - v.y())};
    if (rng.coin(0.3)) {
      const double fx = rng.uniform(0.3, 1.0), fy = rng.uniform(0.3, 1.0);
      const double wx = (W.x1 - W.x0) * fx, wy = (W.y1 - W.y0) * fy;
      const double ox = rng.uniform(0.0, W.x1 - W.x0 - wx), oy = rng.uniform(0.0, W.y1 - W.y0 - wy);
      W = Rect{W.x0 + ox, W.x0 + ox + wx, W.y0 + oy, W.y0 + oy + wy};
    }

    // g near a linear function of the circumcenter along v, the case where
    // the bound is closest to equality, or plain noise.
    std::vector<double> g(flat.triangles.size());
    const bool structured = rng.coin(0.7);
    const double turn = rng.uniform(-0.3, 0.3);
    const Vec2 u = Eigen::Rotation2Dd(turn) * v.normalized();
    const double noise = rng.coin() ? 0.0 : rng.uniform(0.0, 0.5) * eps;
    for (std::size_t k = 0; k < g.size(); ++k) {
      if (structured) {
        Vec2 q = mesh::circumcenter(flat.triangle(k)).q.head<2>();
        // Constant outside the window swept by the segments.
        q.x() = std::clamp(q.x(), std::min(W.x0, W.x0 + v.x()), std::max(W.x1, W.x1 + v.x()));
        q.y() = std::clamp(q.y(), std::min(W.y0, W.y0 + v.y()), std::max(W.y1, W.y1 + v.y()));
        g[k] = u.dot(q) + noise * rng.normal();
      } else {
        g[k] = rng.normal();
      }
    }
    const traversal::CsBound b = traversal::cs_bound_check(grid, heights, g, v, W, o.cs_samples_per_side);
    const double rhs = o.rhs_scale * b.rhs;
    const double ratio = rhs > 0 ? b.lhs / rhs : (b.lhs > 0 ? std::numeric_limits<double>::infinity() : 0.0);
    s.worst = std::max(s.worst, ratio);
    if (b.lhs <= rhs * (1.0 + 1e-9)) ++s.passed;
  }
  return s;
}

}  // namespace

LemmaReport verify_lemmas(std::uint64_t seed, const LemmaOptions& options) {
  if (options.trials < 1) throw Error(ErrorKind::InvalidArgument, "need at least one trial");
  LemmaReport report;
  report.seed = seed;
  // Each suite draws from its own stream so suites stay reproducible alone.
  Rng r1{std::mt19937_64(seed * 4 + 0)}, r2{std::mt19937_64(seed * 4 + 1)}, r3{std::mt19937_64(seed * 4 + 2)},
      r4{std::mt19937_64(seed * 4 + 3)};
  report.suites.push_back(indicator_suite(r1, options));
  report.suites.push_back(lifted_suite(r2, options));
  report.suites.push_back(telescoping_suite(r3, options));
  report.suites.push_back(cs_suite(r4, options));
  return report;
}

}  // namespace lemmas
}  // namespace dw
