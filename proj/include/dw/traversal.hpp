#pragma once

// Segment traversal through flat triangulations: ordered crossings, edge
// weights theta^v, the telescoping identity for circumcenters and the
// Cauchy-Schwarz difference-quotient bound.

#include <span>
#include <vector>

#include "dw/mesh.hpp"
#include "dw/surfaces.hpp"

namespace dw {

struct Crossing {
  std::size_t edge = 0;  // index into the adjacency
  int from = -1, to = -1;
  double t = 0.0;        // segment parameter of the crossing
  Vec2 nu;               // unit edge normal pointing from `from` to `to`
  double theta = 0.0;    // |nu . v| / |v|
  double l = 0.0;        // edge length
};

struct CrossingSequence {
  Vec2 x, v;
  std::vector<int> triangles;  // K_0, ..., K_N
  std::vector<Crossing> crossings;
  bool perturbed = false;  // x was shifted off a vertex or edge
};

/// Flat mesh (z = 0) with adjacency and a point-location grid.
class FlatMeshIndex {
 public:
  explicit FlatMeshIndex(IndexedMesh flat);

  const IndexedMesh& mesh() const { return mesh_; }
  const EdgeAdjacency& adjacency() const { return adjacency_; }
  double size() const { return size_; }
  /// Edge indices of triangle t, side i joins vertex i and i + 1.
  const std::array<std::size_t, 3>& edges_of(int t) const { return tri_edges_[t]; }
  Vec2 vertex(int i) const { return mesh_.vertices[i].head<2>(); }
  /// Triangle containing p (closed), -1 if none.
  int locate(const Vec2& p) const;
  /// Smallest barycentric coordinate of p in triangle t.
  double min_barycentric(int t, const Vec2& p) const;

 private:
  IndexedMesh mesh_;
  EdgeAdjacency adjacency_;
  std::vector<std::array<std::size_t, 3>> tri_edges_;
  double size_ = 0.0;
  double cell_ = 1.0;
  Vec2 lo_;
  int nx_ = 1, ny_ = 1;
  std::vector<std::vector<int>> cells_;
};

namespace traversal {

/// Ordered triangles and edges crossed by [x, x + v]. Segments through a
/// vertex (or starting on an edge) are shifted by 1e-12 size(T) orthogonally
/// to v. Throws SegmentExitsMesh.
CrossingSequence cross(const FlatMeshIndex& index, const Vec2& x, const Vec2& v);
CrossingSequence cross(const IndexedMesh& flat, const Vec2& x, const Vec2& v);

/// | sum_i (q(K_{i+1}) - q(K_i)) . v/|v| - (q(K_N) - q(K_0)) . v/|v| | with
/// a plain left-to-right sum.
double telescoping_residual(const FlatMeshIndex& index, const CrossingSequence& seq);
double telescoping_check(const IndexedMesh& flat, const Vec2& x, const Vec2& v);

/// Whether [x, x + v] meets the closed segment [a, b].
bool indicator(const Vec2& a, const Vec2& b, const Vec2& x, const Vec2& v);
/// Area of {x : [x, x + v] meets [a, b]} = |v| l theta.
double indicator_area(const Vec2& a, const Vec2& b, const Vec2& v);
/// Stratified jittered Monte Carlo estimate of the same area with n x n
/// strata over the box spanned by the edge and -v in a frame aligned with
/// v; `u01` draws uniforms in [0, 1).
template <class Uniform>
double indicator_area_mc(const Vec2& a, const Vec2& b, const Vec2& v, int n, Uniform&& u01) {
  const Vec2 d = v.normalized(), nrm(-d.y(), d.x());
  const double s0 = std::min(a.dot(d), b.dot(d)) - v.norm(), s1 = std::max(a.dot(d), b.dot(d));
  const double t0 = std::min(a.dot(nrm), b.dot(nrm)), t1 = std::max(a.dot(nrm), b.dot(nrm));
  const double hs = (s1 - s0) / n, ht = (t1 - t0) / n;
  long hits = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Vec2 x = (s0 + (i + u01()) * hs) * d + (t0 + (j + u01()) * ht) * nrm;
      if (indicator(a, b, x, v)) ++hits;
    }
  return static_cast<double>(hits) * hs * ht;
}

/// Same area computed from the lift x -> (x, x . w): edge [a, b] with apex d
/// on the L side and direction v lifted likewise. Returns
/// |v_bar| / sqrt(1 + |w|^2) * theta_bar * l_bar.
double lifted_indicator_area(const Vec2& a, const Vec2& b, const Vec2& d, const Vec2& v, const Vec2& w);

struct CsBound {
  double lhs = 0.0;
  double rhs = 0.0;
  double dual_sum = 0.0;    // sum l*/d* |g(K) - g(L)|^2
  double sampled_max = 0.0;  // max over samples of sum 1^v theta l d*/l*
  std::size_t samples = 0;
};

/// lhs = integral over W of |g(x + v) - g(x)|^2, exact by polygon clipping;
/// rhs = |v| * dual_sum * sampled_max with the max over a
/// samples_per_side^2 grid of cell centres of W. `heights` gives h at the
/// vertices of the flat mesh, `g` one value per triangle.
/// Throws ZeroDual when some lifted pair has d* = 0.
CsBound cs_bound_check(const FlatMeshIndex& index, std::span<const double> heights, std::span<const double> g,
                       const Vec2& v, const Rect& W, int samples_per_side = 64);

}  // namespace traversal
}  // namespace dw
