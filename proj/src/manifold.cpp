#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <unordered_map>

#include "dw/mesh.hpp"

namespace dw::mesh {
namespace {

// Distances below tol * (local length scale) count as contact.
constexpr double kContactTolerance = 1e-9;

int dominant_axis(const Vec3& n) {
  const Vec3 a = n.cwiseAbs();
  if (a.x() >= a.y() && a.x() >= a.z()) return 0;
  return a.y() >= a.z() ? 1 : 2;
}

Vec2 drop_axis(const Vec3& p, int axis) {
  switch (axis) {
    case 0: return {p.y(), p.z()};
    case 1: return {p.z(), p.x()};
    default: return {p.x(), p.y()};
  }
}

double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

bool point_in_triangle_2d(const Vec2& p, const Vec2& a, const Vec2& b, const Vec2& c, double tol) {
  const double area = cross2(b - a, c - a);
  const double s = area >= 0 ? 1.0 : -1.0;
  const double scale = std::max({(b - a).norm(), (c - b).norm(), (a - c).norm()});
  const double eps = tol * scale * scale;
  return s * cross2(b - a, p - a) >= -eps && s * cross2(c - b, p - b) >= -eps && s * cross2(a - c, p - c) >= -eps;
}

bool segments_intersect_2d(const Vec2& p, const Vec2& q, const Vec2& a, const Vec2& b, double tol) {
  const double scale = std::max({(q - p).norm(), (b - a).norm(), 1e-300});
  const double eps = tol * scale * scale;
  const double d1 = cross2(q - p, a - p);
  const double d2 = cross2(q - p, b - p);
  const double d3 = cross2(b - a, p - a);
  const double d4 = cross2(b - a, q - a);
  auto on_segment = [&](const Vec2& s0, const Vec2& s1, const Vec2& x) {
    return std::min(s0.x(), s1.x()) - eps <= x.x() && x.x() <= std::max(s0.x(), s1.x()) + eps &&
           std::min(s0.y(), s1.y()) - eps <= x.y() && x.y() <= std::max(s0.y(), s1.y()) + eps;
  };
  if (((d1 > eps && d2 < -eps) || (d1 < -eps && d2 > eps)) && ((d3 > eps && d4 < -eps) || (d3 < -eps && d4 > eps))) {
    return true;
  }
  if (std::abs(d1) <= eps && on_segment(p, q, a)) return true;
  if (std::abs(d2) <= eps && on_segment(p, q, b)) return true;
  if (std::abs(d3) <= eps && on_segment(a, b, p)) return true;
  if (std::abs(d4) <= eps && on_segment(a, b, q)) return true;
  return false;
}

// Closed segment [p, q] against closed triangle t.
bool segment_hits_triangle(const Vec3& p, const Vec3& q, const Triangle& t) {
  const Vec3 n = (t.b - t.a).cross(t.c - t.a);
  const double nn = n.norm();
  if (nn == 0.0) return false;
  const double scale = std::max(t.diameter(), (q - p).norm());
  const double eps = kContactTolerance * scale;
  const double sp = n.dot(p - t.a) / nn;
  const double sq = n.dot(q - t.a) / nn;
  if ((sp > eps && sq > eps) || (sp < -eps && sq < -eps)) return false;
  const int axis = dominant_axis(n);
  const Vec2 a2 = drop_axis(t.a, axis), b2 = drop_axis(t.b, axis), c2 = drop_axis(t.c, axis);
  if (std::abs(sp) <= eps && std::abs(sq) <= eps) {
    const Vec2 p2 = drop_axis(p, axis), q2 = drop_axis(q, axis);
    if (point_in_triangle_2d(p2, a2, b2, c2, kContactTolerance) ||
        point_in_triangle_2d(q2, a2, b2, c2, kContactTolerance))
      return true;
    return segments_intersect_2d(p2, q2, a2, b2, kContactTolerance) ||
           segments_intersect_2d(p2, q2, b2, c2, kContactTolerance) ||
           segments_intersect_2d(p2, q2, c2, a2, kContactTolerance);
  }
  double s;
  if (std::abs(sp) <= eps) {
    s = 0.0;
  } else if (std::abs(sq) <= eps) {
    s = 1.0;
  } else {
    s = sp / (sp - sq);
  }
  const Vec3 x = p + s * (q - p);
  return point_in_triangle_2d(drop_axis(x, axis), a2, b2, c2, kContactTolerance);
}

bool triangles_intersect(const Triangle& a, const Triangle& b) {
  const std::array<std::pair<Vec3, Vec3>, 3> ea{{{a.a, a.b}, {a.b, a.c}, {a.c, a.a}}};
  const std::array<std::pair<Vec3, Vec3>, 3> eb{{{b.a, b.b}, {b.b, b.c}, {b.c, b.a}}};
  for (const auto& [p, q] : ea)
    if (segment_hits_triangle(p, q, b)) return true;
  for (const auto& [p, q] : eb)
    if (segment_hits_triangle(p, q, a)) return true;
  return false;
}

// Direction s lies in the closed wedge {alpha e1 + beta e2 : alpha, beta >= 0}.
bool in_wedge(const Vec3& e1, const Vec3& e2, const Vec3& s) {
  const Vec3 u1 = e1.normalized(), u2 = e2.normalized(), d = s.normalized();
  const Vec3 n = u1.cross(u2);
  if (std::abs(n.normalized().dot(d)) > 1e-9) return false;
  // Solve d = alpha u1 + beta u2 via cross products.
  const double nn = n.squaredNorm();
  const double alpha = d.cross(u2).dot(n) / nn;
  const double beta = u1.cross(d).dot(n) / nn;
  return alpha >= -1e-9 && beta >= -1e-9;
}

// Triangles sharing exactly the vertex v: do they meet beyond v?
bool wedges_overlap(const Vec3& v, const Vec3& a1, const Vec3& a2, const Vec3& b1, const Vec3& b2) {
  const Vec3 ea1 = a1 - v, ea2 = a2 - v, eb1 = b1 - v, eb2 = b2 - v;
  const Vec3 na = ea1.cross(ea2).normalized();
  const Vec3 nb = eb1.cross(eb2).normalized();
  const Vec3 line = na.cross(nb);
  if (line.norm() > 1e-9) {
    const Vec3 d = line.normalized();
    return (in_wedge(ea1, ea2, d) && in_wedge(eb1, eb2, d)) || (in_wedge(ea1, ea2, -d) && in_wedge(eb1, eb2, -d));
  }
  return in_wedge(ea1, ea2, eb1) || in_wedge(ea1, ea2, eb2) || in_wedge(eb1, eb2, ea1) || in_wedge(eb1, eb2, ea2);
}

// Triangles sharing the edge (u, w) with apexes a, b: only a coplanar fold
// produces an overlap beyond the edge.
bool edge_pair_overlaps(const Vec3& u, const Vec3& w, const Vec3& a, const Vec3& b) {
  const Vec3 e = w - u;
  const Vec3 na = e.cross(a - u);
  const double scale = std::max({e.norm(), (a - u).norm(), (b - u).norm()});
  const double dist_b = na.normalized().dot(b - u);
  if (std::abs(dist_b) > kContactTolerance * scale) return false;
  return na.dot(e.cross(b - u)) > 0.0;
}

struct Box {
  Vec3 lo, hi;
};

}  // namespace

ManifoldVerdict check_manifold(const IndexedMesh& mesh) {
  ManifoldVerdict verdict;
  auto fail = [&](ManifoldViolation::Kind kind, int a, int b, std::string detail) {
    verdict.pass = false;
    verdict.violations.push_back({kind, a, b, std::move(detail)});
  };

  const int nv = static_cast<int>(mesh.vertices.size());
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    for (int v : tri) {
      if (v < 0 || v >= nv) {
        fail(ManifoldViolation::Kind::InvalidIndex, static_cast<int>(t), v, "index out of range");
        return verdict;
      }
    }
    if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2] || !is_regular(mesh.triangle(t))) {
      fail(ManifoldViolation::Kind::Degenerate, static_cast<int>(t), -1, "degenerate triangle");
    }
  }
  if (!verdict.pass) return verdict;

  // Edge valence.
  std::map<std::pair<int, int>, int> valence;
  for (const auto& tri : mesh.triangles) {
    for (int i = 0; i < 3; ++i) {
      int a = tri[i], b = tri[(i + 1) % 3];
      if (a > b) std::swap(a, b);
      ++valence[{a, b}];
    }
  }
  for (const auto& [edge, count] : valence) {
    if (count > 2) {
      fail(ManifoldViolation::Kind::EdgeValence, edge.first, edge.second,
           "edge shared by " + std::to_string(count) + " triangles");
    }
  }

  // Vertex links: a single path or a single cycle.
  std::vector<std::vector<std::pair<int, int>>> link(mesh.vertices.size());
  for (const auto& tri : mesh.triangles) {
    for (int i = 0; i < 3; ++i) link[tri[i]].emplace_back(tri[(i + 1) % 3], tri[(i + 2) % 3]);
  }
  for (int v = 0; v < nv; ++v) {
    const auto& edges = link[v];
    if (edges.empty()) continue;
    std::unordered_map<int, std::vector<int>> graph;
    for (const auto& [a, b] : edges) {
      graph[a].push_back(b);
      graph[b].push_back(a);
    }
    bool ok = true;
    int endpoints = 0;
    for (const auto& [node, nbrs] : graph) {
      if (nbrs.size() > 2) ok = false;
      if (nbrs.size() == 1) ++endpoints;
    }
    // Connectivity.
    std::set<int> seen;
    std::vector<int> stack{graph.begin()->first};
    while (!stack.empty()) {
      const int x = stack.back();
      stack.pop_back();
      if (!seen.insert(x).second) continue;
      for (int y : graph[x])
        if (!seen.count(y)) stack.push_back(y);
    }
    if (seen.size() != graph.size()) ok = false;
    const bool cycle = endpoints == 0 && edges.size() == graph.size();
    const bool path = endpoints == 2 && edges.size() + 1 == graph.size();
    if (!ok || !(cycle || path)) {
      fail(ManifoldViolation::Kind::VertexLink, v, -1, "vertex link is not a single path or cycle");
    }
  }

  // Pairwise geometric test with a uniform-grid bounding-box prefilter.
  const std::size_t nt = mesh.triangles.size();
  if (nt < 2) return verdict;
  std::vector<Box> boxes(nt);
  double mean_diam = 0.0;
  for (std::size_t t = 0; t < nt; ++t) {
    const Triangle tri = mesh.triangle(t);
    const double pad = kContactTolerance * tri.diameter();
    boxes[t].lo = tri.a.cwiseMin(tri.b).cwiseMin(tri.c).array() - pad;
    boxes[t].hi = tri.a.cwiseMax(tri.b).cwiseMax(tri.c).array() + pad;
    mean_diam += tri.diameter();
  }
  mean_diam /= static_cast<double>(nt);
  const double cell = std::max(mean_diam, 1e-12);
  auto cell_of = [cell](double x) { return static_cast<std::int64_t>(std::floor(x / cell)); };
  auto key = [](std::int64_t i, std::int64_t j, std::int64_t k) {
    const std::int64_t mask = (1 << 21) - 1;
    return ((i & mask) << 42) | ((j & mask) << 21) | (k & mask);
  };
  std::unordered_map<std::int64_t, std::vector<int>> grid;
  for (std::size_t t = 0; t < nt; ++t) {
    for (auto i = cell_of(boxes[t].lo.x()); i <= cell_of(boxes[t].hi.x()); ++i)
      for (auto j = cell_of(boxes[t].lo.y()); j <= cell_of(boxes[t].hi.y()); ++j)
        for (auto k = cell_of(boxes[t].lo.z()); k <= cell_of(boxes[t].hi.z()); ++k)
          grid[key(i, j, k)].push_back(static_cast<int>(t));
  }

  std::vector<std::size_t> stamp(nt, static_cast<std::size_t>(-1));
  std::size_t reported = 0;
  for (std::size_t t = 0; t < nt && reported < 1000; ++t) {
    const Box& bt = boxes[t];
    for (auto i = cell_of(bt.lo.x()); i <= cell_of(bt.hi.x()); ++i)
      for (auto j = cell_of(bt.lo.y()); j <= cell_of(bt.hi.y()); ++j)
        for (auto k = cell_of(bt.lo.z()); k <= cell_of(bt.hi.z()); ++k) {
          auto it = grid.find(key(i, j, k));
          if (it == grid.end()) continue;
          for (int o : it->second) {
            const auto u = static_cast<std::size_t>(o);
            if (u <= t || stamp[u] == t) continue;
            stamp[u] = t;
            const Box& bu = boxes[u];
            if ((bt.hi.array() < bu.lo.array()).any() || (bu.hi.array() < bt.lo.array()).any()) continue;

            const auto& ta = mesh.triangles[t];
            const auto& tb = mesh.triangles[u];
            std::vector<int> shared;
            for (int x : ta)
              if (std::find(tb.begin(), tb.end(), x) != tb.end()) shared.push_back(x);
            bool bad = false;
            if (shared.size() == 3) {
              bad = true;
            } else if (shared.size() == 2) {
              auto apex = [&](const TriangleIndices& tri) {
                for (int x : tri)
                  if (x != shared[0] && x != shared[1]) return x;
                return -1;
              };
              bad = edge_pair_overlaps(mesh.vertices[shared[0]], mesh.vertices[shared[1]],
                                       mesh.vertices[apex(ta)], mesh.vertices[apex(tb)]);
            } else if (shared.size() == 1) {
              const int v = shared[0];
              std::array<int, 2> oa{}, ob{};
              int ia = 0, ib = 0;
              for (int x : ta)
                if (x != v) oa[ia++] = x;
              for (int x : tb)
                if (x != v) ob[ib++] = x;
              const auto& P = mesh.vertices;
              bad = wedges_overlap(P[v], P[oa[0]], P[oa[1]], P[ob[0]], P[ob[1]]);
            } else {
              bad = triangles_intersect(mesh.triangle(t), mesh.triangle(u));
            }
            if (bad) {
              fail(ManifoldViolation::Kind::Intersection, static_cast<int>(t), static_cast<int>(u),
                   "triangles meet in more than a shared vertex or edge");
              ++reported;
            }
          }
        }
  }
  return verdict;
}

}  // namespace dw::mesh
