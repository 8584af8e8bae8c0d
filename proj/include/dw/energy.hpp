#pragma once

// Discrete bending energy of a triangulated surface and three comparison
// energies (Seung-Nelson, dihedral-angle form, circumcircle-angle form).

#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "dw/mesh.hpp"

namespace dw {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct EdgeContribution {
  std::size_t edge_id = 0;
  int v0 = -1, v1 = -1;
  int tri_k = -1, tri_l = -1;
  double l = 0.0;            // shared edge length
  double d = 0.0;            // |q(K) - q(L)|
  double alpha = 0.0;        // dihedral angle
  double normal_diff = 0.0;  // |n(K) - n(L)|
  double value = 0.0;        // may be +inf
};

struct EnergyBreakdown {
  std::vector<EdgeContribution> contributions;
  double total = 0.0;
  bool finite = true;
};

namespace energy {

/// d_KL below kCosphericalTolerance * size(T) counts as zero.
inline constexpr double kCosphericalTolerance = 1e-10;
/// |n(K) - n(L)| below this is treated as an exact zero (coplanar pair).
inline constexpr double kZeroNormalDiff = 1e-12;

/// Sum over interior edges of (l/d) |n(K) - n(L)|^2. A pair with zero normal
/// difference or zero shared length contributes 0 regardless of d; a pair
/// with positive normal difference and d below tolerance contributes +inf.
EnergyBreakdown bending_energy(const IndexedMesh& mesh, const EdgeAdjacency& adjacency);
EnergyBreakdown bending_energy(const IndexedMesh& mesh);

/// Sum of |n(K) - n(L)|^2.
double seung_nelson_energy(const IndexedMesh& mesh, const EdgeAdjacency& adjacency);

/// Same as bending_energy with alpha^2 in place of |n(K) - n(L)|^2.
double ghds_energy(const IndexedMesh& mesh, const EdgeAdjacency& adjacency);

/// External intersection angle of the circumcircles of the two triangles at
/// the shared vertex v0 of the edge. The tangent of each circle at v0 is
/// n x (v0 - q), i.e. the direction of travel of the counterclockwise
/// circle. Flat equilateral neighbours give pi/3; identical circles with
/// opposite orientation give pi.
double circle_angle(const IndexedMesh& mesh, const Edge& edge);

/// Sum of circle angles minus pi times the vertex count. Defined for closed
/// meshes only; nullopt when the mesh has a boundary.
std::optional<double> bobenko_energy(const IndexedMesh& mesh, const EdgeAdjacency& adjacency);

/// All four energies at once.
struct EnergySummary {
  double e = 0.0;
  double e_sn = 0.0;
  double e_ghds = 0.0;
  std::optional<double> e_b;
};
EnergySummary all_energies(const IndexedMesh& mesh);

/// CSV with header
/// edge_id,v0,v1,tri_K,tri_L,l_KL,d_KL,alpha,normal_diff,contribution.
/// Infinite values are written as "inf".
void write_energy_csv(std::ostream& out, const EnergyBreakdown& breakdown);
std::string energy_csv(const EnergyBreakdown& breakdown);
/// Inverse of write_energy_csv. Throws ParseError.
std::vector<EdgeContribution> parse_energy_csv(std::istream& in);

/// Kahan-compensated accumulator. Adding +inf makes the sum +inf.
class KahanSum {
 public:
  void add(double x);
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double c_ = 0.0;
};

}  // namespace energy
}  // namespace dw
