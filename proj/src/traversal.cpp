#include "dw/traversal.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

namespace dw {
namespace {

double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

Vec2 perp(const Vec2& a) { return {-a.y(), a.x()}; }

using Polygon = std::vector<Vec2>;

double polygon_area(const Polygon& p) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += cross2(p[i], p[(i + 1) % p.size()]);
  return 0.5 * std::abs(s);
}

// Keeps the part of p on the left of a -> b.
Polygon clip_halfplane(const Polygon& p, const Vec2& a, const Vec2& b) {
  Polygon out;
  if (p.empty()) return out;
  const Vec2 e = b - a;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Vec2& s = p[i];
    const Vec2& t = p[(i + 1) % p.size()];
    const double ds = cross2(e, s - a), dt = cross2(e, t - a);
    if (ds >= 0) out.push_back(s);
    if ((ds >= 0) != (dt >= 0)) out.push_back(s + (ds / (ds - dt)) * (t - s));
  }
  return out;
}

// Intersection with a convex polygon given in counterclockwise order.
Polygon clip_convex(Polygon p, const Polygon& convex) {
  for (std::size_t i = 0; i < convex.size() && !p.empty(); ++i)
    p = clip_halfplane(p, convex[i], convex[(i + 1) % convex.size()]);
  return p;
}

Polygon ccw_triangle(const Vec2& a, const Vec2& b, const Vec2& c) {
  if (cross2(b - a, c - a) < 0) return {a, c, b};
  return {a, b, c};
}

}  // namespace

FlatMeshIndex::FlatMeshIndex(IndexedMesh flat) : mesh_(std::move(flat)) {
  if (mesh_.triangles.empty()) throw Error(ErrorKind::DegenerateInput, "empty mesh");
  adjacency_ = mesh::build_adjacency(mesh_);
  size_ = mesh::size(mesh_);
  tri_edges_.resize(mesh_.triangles.size());
  for (std::size_t t = 0; t < mesh_.triangles.size(); ++t) {
    const auto& tri = mesh_.triangles[t];
    for (int i = 0; i < 3; ++i) tri_edges_[t][i] = *adjacency_.find(tri[i], tri[(i + 1) % 3]);
  }

  Vec2 lo = vertex(mesh_.triangles[0][0]), hi = lo;
  double diam_sum = 0.0;
  for (std::size_t t = 0; t < mesh_.triangles.size(); ++t) {
    for (int v : mesh_.triangles[t]) {
      lo = lo.cwiseMin(vertex(v));
      hi = hi.cwiseMax(vertex(v));
    }
    diam_sum += mesh_.triangle(t).diameter();
  }
  cell_ = std::max(diam_sum / static_cast<double>(mesh_.triangles.size()), 1e-300);
  lo_ = lo;
  nx_ = std::max(1, static_cast<int>(std::ceil((hi.x() - lo.x()) / cell_)) + 1);
  ny_ = std::max(1, static_cast<int>(std::ceil((hi.y() - lo.y()) / cell_)) + 1);
  cells_.assign(static_cast<std::size_t>(nx_) * ny_, {});
  for (std::size_t t = 0; t < mesh_.triangles.size(); ++t) {
    Vec2 a = vertex(mesh_.triangles[t][0]), b = a;
    for (int v : mesh_.triangles[t]) {
      a = a.cwiseMin(vertex(v));
      b = b.cwiseMax(vertex(v));
    }
    const int i0 = static_cast<int>((a.x() - lo_.x()) / cell_), i1 = static_cast<int>((b.x() - lo_.x()) / cell_);
    const int j0 = static_cast<int>((a.y() - lo_.y()) / cell_), j1 = static_cast<int>((b.y() - lo_.y()) / cell_);
    for (int i = i0; i <= std::min(i1, nx_ - 1); ++i)
      for (int j = j0; j <= std::min(j1, ny_ - 1); ++j) cells_[static_cast<std::size_t>(i) * ny_ + j].push_back(static_cast<int>(t));
  }
}

double FlatMeshIndex::min_barycentric(int t, const Vec2& p) const {
  const auto& tri = mesh_.triangles[t];
  const Vec2 a = vertex(tri[0]), b = vertex(tri[1]), c = vertex(tri[2]);
  const double det = cross2(b - a, c - a);
  const double l1 = cross2(p - a, c - a) / det;
  const double l2 = cross2(b - a, p - a) / det;
  return std::min({1.0 - l1 - l2, l1, l2});
}

int FlatMeshIndex::locate(const Vec2& p) const {
  const double fx = (p.x() - lo_.x()) / cell_, fy = (p.y() - lo_.y()) / cell_;
  if (fx < 0 || fy < 0 || fx >= nx_ || fy >= ny_) return -1;
  const auto& cell = cells_[static_cast<std::size_t>(fx) * ny_ + static_cast<std::size_t>(fy)];
  int best = -1;
  double best_bary = -1e-12;
  for (int t : cell) {
    const double b = min_barycentric(t, p);
    if (b >= best_bary) {
      best_bary = b;
      best = t;
    }
  }
  return best;
}

namespace traversal {
namespace {

// nullopt when the segment meets a vertex or starts or ends on an edge.
std::optional<CrossingSequence> walk(const FlatMeshIndex& index, const Vec2& x, const Vec2& v) {
  const double tol = 0.25e-12 * index.size();
  const double vv = v.squaredNorm();
  const Vec2 dir = v / std::sqrt(vv);
  const IndexedMesh& mesh = index.mesh();

  int k = index.locate(x);
  if (k < 0) {
    std::ostringstream s;
    s << "start point (" << x.x() << ", " << x.y() << ") is outside the mesh";
    throw Error(ErrorKind::SegmentExitsMesh, s.str());
  }
  if (index.min_barycentric(k, x) < 1e-13) return std::nullopt;

  CrossingSequence seq;
  seq.x = x;
  seq.v = v;
  seq.triangles.push_back(k);
  const std::size_t max_steps = 4 * mesh.triangles.size() + 8;
  for (std::size_t step = 0; step < max_steps; ++step) {
    const auto& tri = mesh.triangles[k];
    std::array<Vec2, 3> p;
    std::array<double, 3> side;
    for (int i = 0; i < 3; ++i) {
      p[i] = index.vertex(tri[i]);
      side[i] = cross2(dir, p[i] - x);
      if (std::abs(side[i]) < tol) {
        const double tv = (p[i] - x).dot(v) / vv;
        if (tv > -1e-9 && tv < 1.0 + 1e-9) return std::nullopt;
      }
    }
    int exit_side = -1;
    double exit_t = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < 3; ++i) {
      const int j = (i + 1) % 3;
      if ((side[i] >= 0) == (side[j] >= 0)) continue;
      const Vec2 hit = p[i] + (side[i] / (side[i] - side[j])) * (p[j] - p[i]);
      const double t = (hit - x).dot(v) / vv;
      if (t > exit_t) {
        exit_t = t;
        exit_side = i;
      }
    }
    if (exit_side < 0 || exit_t >= 1.0) {
      if (index.min_barycentric(k, x + v) < 1e-13) return std::nullopt;
      return seq;
    }
    const std::size_t e = index.edges_of(k)[exit_side];
    const Edge& edge = index.adjacency().edges[e];
    const int next = edge.tri_k == k ? edge.tri_l : edge.tri_k;
    if (next < 0) {
      std::ostringstream s;
      s << "segment leaves the mesh through boundary edge (" << edge.v0 << ", " << edge.v1 << ") at t=" << exit_t;
      throw Error(ErrorKind::SegmentExitsMesh, s.str());
    }
    Crossing c;
    c.edge = e;
    c.from = k;
    c.to = next;
    c.t = exit_t;
    const Vec2 ev = p[(exit_side + 1) % 3] - p[exit_side];
    c.l = ev.norm();
    c.nu = perp(ev) / c.l;
    if (c.nu.dot(v) < 0) c.nu = -c.nu;
    c.theta = std::abs(c.nu.dot(dir));
    seq.crossings.push_back(c);
    seq.triangles.push_back(next);
    k = next;
  }
  throw Error(ErrorKind::DegenerateInput, "segment walk did not terminate");
}

Vec2 flat_circumcenter(const IndexedMesh& mesh, int t) { return mesh::circumcenter(mesh.triangle(t)).q.head<2>(); }

}  // namespace

CrossingSequence cross(const FlatMeshIndex& index, const Vec2& x, const Vec2& v) {
  if (!(v.norm() > 0)) throw Error(ErrorKind::InvalidArgument, "direction must be nonzero");
  const Vec2 shift = perp(v.normalized()) * (1e-12 * index.size());
  for (int attempt = 0; attempt < 32; ++attempt) {
    // 0, +1, -1, +2, -2, ... shifts
    const double m = (attempt + 1) / 2 * (attempt % 2 == 1 ? 1.0 : -1.0);
    if (auto seq = walk(index, x + m * shift, v)) {
      seq->perturbed = attempt > 0;
      return *seq;
    }
  }
  throw Error(ErrorKind::DegenerateInput, "could not move the segment off the mesh vertices");
}

CrossingSequence cross(const IndexedMesh& flat, const Vec2& x, const Vec2& v) {
  return cross(FlatMeshIndex(flat), x, v);
}

double telescoping_residual(const FlatMeshIndex& index, const CrossingSequence& seq) {
  const Vec2 dir = seq.v.normalized();
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < seq.triangles.size(); ++i) {
    const Vec2 a = flat_circumcenter(index.mesh(), seq.triangles[i]);
    const Vec2 b = flat_circumcenter(index.mesh(), seq.triangles[i + 1]);
    sum += (b - a).dot(dir);
  }
  const Vec2 q0 = flat_circumcenter(index.mesh(), seq.triangles.front());
  const Vec2 qn = flat_circumcenter(index.mesh(), seq.triangles.back());
  return std::abs(sum - (qn - q0).dot(dir));
}

double telescoping_check(const IndexedMesh& flat, const Vec2& x, const Vec2& v) {
  const FlatMeshIndex index(flat);
  return telescoping_residual(index, cross(index, x, v));
}

bool indicator(const Vec2& a, const Vec2& b, const Vec2& x, const Vec2& v) {
  const Vec2 y = x + v;
  const double o1 = cross2(v, a - x), o2 = cross2(v, b - x);
  const double o3 = cross2(b - a, x - a), o4 = cross2(b - a, y - a);
  if (o1 == 0 && o2 == 0) {
    // Collinear: overlap of projections.
    const double ta = (a - x).dot(v), tb = (b - x).dot(v), vv = v.squaredNorm();
    return std::max(std::min(ta, tb), 0.0) <= std::min(std::max(ta, tb), vv);
  }
  return ((o1 <= 0 && o2 >= 0) || (o1 >= 0 && o2 <= 0)) && ((o3 <= 0 && o4 >= 0) || (o3 >= 0 && o4 <= 0));
}

double indicator_area(const Vec2& a, const Vec2& b, const Vec2& v) {
  const Vec2 e = b - a;
  const double l = e.norm();
  if (l == 0.0) return 0.0;
  const double theta = std::abs(perp(e / l).dot(v)) / v.norm();
  return v.norm() * l * theta;
}

double lifted_indicator_area(const Vec2& a, const Vec2& b, const Vec2& d, const Vec2& v, const Vec2& w) {
  auto lift = [&](const Vec2& p) { return Vec3(p.x(), p.y(), p.dot(w)); };
  const Vec3 A = lift(a), B = lift(b), D = lift(d), V = lift(v);
  const Vec3 e = B - A;
  const double l = e.norm();
  Vec3 nu = (D - A) - ((D - A).dot(e) / (l * l)) * e;
  nu.normalize();
  const double theta = std::abs(nu.dot(V)) / V.norm();
  return V.norm() / std::sqrt(1.0 + w.squaredNorm()) * theta * l;
}

CsBound cs_bound_check(const FlatMeshIndex& index, std::span<const double> heights, std::span<const double> g,
                       const Vec2& v, const Rect& W, int samples_per_side) {
  const IndexedMesh& flat = index.mesh();
  if (heights.size() != flat.vertices.size()) throw Error(ErrorKind::InvalidArgument, "one height per vertex");
  if (g.size() != flat.triangles.size()) throw Error(ErrorKind::InvalidArgument, "one value of g per triangle");
  if (!(W.area() > 0)) throw Error(ErrorKind::EmptyDomain, "empty window");
  if (!(v.norm() > 0)) throw Error(ErrorKind::InvalidArgument, "direction must be nonzero");
  if (samples_per_side < 1) throw Error(ErrorKind::InvalidArgument, "need at least one sample per side");

  IndexedMesh lifted = flat;
  for (std::size_t i = 0; i < lifted.vertices.size(); ++i) lifted.vertices[i].z() = heights[i];
  const double lifted_size = mesh::size(lifted);

  CsBound out;
  const auto& edges = index.adjacency().edges;
  std::vector<double> weight(edges.size(), 0.0);  // d* / l*
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const Edge& edge = edges[e];
    if (!edge.interior()) continue;
    const double ls = (lifted.vertices[edge.v0] - lifted.vertices[edge.v1]).norm();
    const double ds = (mesh::circumcenter(lifted.triangle(edge.tri_k)).q -
                       mesh::circumcenter(lifted.triangle(edge.tri_l)).q).norm();
    if (!(ds > 1e-14 * lifted_size)) {
      std::ostringstream s;
      s << "lifted triangles " << edge.tri_k << " and " << edge.tri_l << " share a circumcircle";
      throw Error(ErrorKind::ZeroDual, s.str());
    }
    weight[e] = ds / ls;
    const double dg = g[edge.tri_k] - g[edge.tri_l];
    out.dual_sum += dg * dg / weight[e];
  }

  const double hx = (W.x1 - W.x0) / samples_per_side, hy = (W.y1 - W.y0) / samples_per_side;
  for (int i = 0; i < samples_per_side; ++i)
    for (int j = 0; j < samples_per_side; ++j) {
      const Vec2 x(W.x0 + (i + 0.5) * hx, W.y0 + (j + 0.5) * hy);
      const CrossingSequence seq = cross(index, x, v);
      double s = 0.0;
      for (const Crossing& c : seq.crossings) s += c.theta * c.l * weight[c.edge];
      out.sampled_max = std::max(out.sampled_max, s);
      ++out.samples;
    }
  out.rhs = v.norm() * out.dual_sum * out.sampled_max;

  // Exact lhs: sum over pairs (K, L) of |g(K) - g(L)|^2 |W n K n (L - v)|.
  const Polygon window{{W.x0, W.y0}, {W.x1, W.y0}, {W.x1, W.y1}, {W.x0, W.y1}};
  std::vector<int> stamp(flat.triangles.size(), -1);
  double covered = 0.0;
  for (std::size_t k = 0; k < flat.triangles.size(); ++k) {
    const auto& tk = flat.triangles[k];
    const Polygon pk = clip_convex(ccw_triangle(index.vertex(tk[0]), index.vertex(tk[1]), index.vertex(tk[2])), window);
    if (pk.size() < 3 || polygon_area(pk) == 0.0) continue;
    std::vector<int> cand;
    Vec2 centre = Vec2::Zero();
    for (const auto& q : pk) centre += q;
    centre /= static_cast<double>(pk.size());
    for (const auto& q : pk) {
      for (const Vec2& probe : {Vec2(centre + v), Vec2(q + v + 1e-6 * (centre - q))}) {
        const int t = index.locate(probe);
        if (t >= 0 && stamp[t] != static_cast<int>(k)) {
          stamp[t] = static_cast<int>(k);
          cand.push_back(t);
        }
      }
    }
    // Close the candidate set under edge adjacency until no new triangle
    // overlaps the translated polygon.
    for (std::size_t c = 0; c < cand.size(); ++c) {
      const int t = cand[c];
      const auto& tl = flat.triangles[t];
      const Polygon pl = ccw_triangle(index.vertex(tl[0]) - v, index.vertex(tl[1]) - v, index.vertex(tl[2]) - v);
      const Polygon piece = clip_convex(pk, pl);
      const double area = piece.size() >= 3 ? polygon_area(piece) : 0.0;
      if (area <= 0.0) continue;
      covered += area;
      const double dg = g[k] - g[t];
      out.lhs += dg * dg * area;
      for (std::size_t e : index.edges_of(t)) {
        const Edge& edge = edges[e];
        const int nb = edge.tri_k == t ? edge.tri_l : edge.tri_k;
        if (nb >= 0 && stamp[nb] != static_cast<int>(k)) {
          stamp[nb] = static_cast<int>(k);
          cand.push_back(nb);
        }
      }
    }
  }
  if (std::abs(covered - W.area()) > 1e-9 * W.area()) {
    std::ostringstream s;
    s << "W + v is not covered by the mesh (covered area " << covered << " of " << W.area() << ")";
    throw Error(ErrorKind::SegmentExitsMesh, s.str());
  }
  return out;
}

}  // namespace traversal
}  // namespace dw
