#include "dw/energy.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

namespace dw::energy {

void KahanSum::add(double x) {
  if (std::isinf(x) || std::isinf(sum_)) {
    sum_ += x;
    return;
  }
  const double y = x - c_;
  const double t = sum_ + y;
  c_ = (t - sum_) - y;
  sum_ = t;
}

namespace {

struct PairGeometry {
  double l = 0.0, d = 0.0;
  DihedralData dihedral;
};

void require_orientable(const EdgeAdjacency& adjacency) {
  if (!adjacency.orientation_consistent) throw Error(ErrorKind::NonOrientable, "normals are not like-oriented");
}

// Per-triangle normals and circumcenters, computed once.
struct TriangleCache {
  std::vector<Vec3> normals;
  std::vector<Point3> centers;

  explicit TriangleCache(const IndexedMesh& mesh) : normals(mesh.triangles.size()), centers(mesh.triangles.size()) {
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
      const Triangle tri = mesh.triangle(t);
      normals[t] = mesh::triangle_normal(tri);
      centers[t] = mesh::circumcenter(tri).q;
    }
  }

  PairGeometry pair(const IndexedMesh& mesh, const Edge& e) const {
    PairGeometry g;
    g.l = (mesh.vertices[e.v1] - mesh.vertices[e.v0]).norm();
    g.d = (centers[e.tri_k] - centers[e.tri_l]).norm();
    const Vec3& nk = normals[e.tri_k];
    const Vec3& nl = normals[e.tri_l];
    g.dihedral.normal_diff = (nk - nl).norm();
    g.dihedral.alpha = 2.0 * std::atan2(g.dihedral.normal_diff, (nk + nl).norm());
    return g;
  }
};

// (l/d) * w with the zero and infinite branches.
double weighted_term(double l, double d, double normal_diff, double w, double tol) {
  if (normal_diff < kZeroNormalDiff || l == 0.0) return 0.0;
  if (d < tol) return kInfinity;
  return l / d * w;
}

std::string format_value(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::ostringstream s;
  s << std::setprecision(17) << x;
  return s.str();
}

double parse_value(const std::string& field, std::size_t line) {
  if (field == "inf") return kInfinity;
  if (field == "-inf") return -kInfinity;
  try {
    std::size_t pos = 0;
    const double v = std::stod(field, &pos);
    if (pos != field.size()) throw std::invalid_argument(field);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorKind::ParseError, "line " + std::to_string(line) + ": bad number '" + field + "'");
  }
}

}  // namespace

EnergyBreakdown bending_energy(const IndexedMesh& mesh, const EdgeAdjacency& adjacency) {
  require_orientable(adjacency);
  const double tol = kCosphericalTolerance * mesh::size(mesh);
  const TriangleCache cache(mesh);
  EnergyBreakdown out;
  KahanSum sum;
  for (std::size_t i = 0; i < adjacency.edges.size(); ++i) {
    const Edge& e = adjacency.edges[i];
    if (!e.interior()) continue;
    const PairGeometry g = cache.pair(mesh, e);
    EdgeContribution c;
    c.edge_id = i;
    c.v0 = e.v0;
    c.v1 = e.v1;
    c.tri_k = e.tri_k;
    c.tri_l = e.tri_l;
    c.l = g.l;
    c.d = g.d;
    c.alpha = g.dihedral.alpha;
    c.normal_diff = g.dihedral.normal_diff;
    c.value = weighted_term(g.l, g.d, c.normal_diff, c.normal_diff * c.normal_diff, tol);
    sum.add(c.value);
    out.contributions.push_back(c);
  }
  out.total = sum.value();
  out.finite = std::isfinite(out.total);
  return out;
}

EnergyBreakdown bending_energy(const IndexedMesh& mesh) { return bending_energy(mesh, mesh::build_adjacency(mesh)); }

double seung_nelson_energy(const IndexedMesh& mesh, const EdgeAdjacency& adjacency) {
  require_orientable(adjacency);
  const TriangleCache cache(mesh);
  KahanSum sum;
  for (const Edge& e : adjacency.edges) {
    if (!e.interior()) continue;
    const double nd = cache.pair(mesh, e).dihedral.normal_diff;
    sum.add(nd * nd);
  }
  return sum.value();
}

double ghds_energy(const IndexedMesh& mesh, const EdgeAdjacency& adjacency) {
  require_orientable(adjacency);
  const double tol = kCosphericalTolerance * mesh::size(mesh);
  const TriangleCache cache(mesh);
  KahanSum sum;
  for (const Edge& e : adjacency.edges) {
    if (!e.interior()) continue;
    const PairGeometry g = cache.pair(mesh, e);
    const double a = g.dihedral.alpha;
    sum.add(weighted_term(g.l, g.d, g.dihedral.normal_diff, a * a, tol));
  }
  return sum.value();
}

double circle_angle(const IndexedMesh& mesh, const Edge& edge) {
  const Triangle k = mesh.triangle(edge.tri_k);
  const Triangle l = mesh.triangle(edge.tri_l);
  const Point3& x = mesh.vertices[edge.v0];
  const Vec3 tk = mesh::triangle_normal(k).cross(x - mesh::circumcenter(k).q);
  const Vec3 tl = mesh::triangle_normal(l).cross(x - mesh::circumcenter(l).q);
  const double nk = tk.norm(), nl = tl.norm();
  if (nk == 0.0 || nl == 0.0) throw Error(ErrorKind::CosphericalPair, "circle tangent undefined");
  return std::atan2(tk.cross(tl).norm(), tk.dot(tl));
}

std::optional<double> bobenko_energy(const IndexedMesh& mesh, const EdgeAdjacency& adjacency) {
  require_orientable(adjacency);
  if (adjacency.num_boundary() > 0) return std::nullopt;
  KahanSum sum;
  for (const Edge& e : adjacency.edges) sum.add(circle_angle(mesh, e));
  std::vector<char> used(mesh.vertices.size(), 0);
  for (const auto& t : mesh.triangles)
    for (int v : t) used[v] = 1;
  const auto nv = std::count(used.begin(), used.end(), 1);
  sum.add(-std::numbers::pi * static_cast<double>(nv));
  return sum.value();
}

EnergySummary all_energies(const IndexedMesh& mesh) {
  const EdgeAdjacency adjacency = mesh::build_adjacency(mesh);
  EnergySummary s;
  s.e = bending_energy(mesh, adjacency).total;
  s.e_sn = seung_nelson_energy(mesh, adjacency);
  s.e_ghds = ghds_energy(mesh, adjacency);
  s.e_b = bobenko_energy(mesh, adjacency);
  return s;
}

void write_energy_csv(std::ostream& out, const EnergyBreakdown& breakdown) {
  out << "edge_id,v0,v1,tri_K,tri_L,l_KL,d_KL,alpha,normal_diff,contribution\n";
  for (const auto& c : breakdown.contributions) {
    out << c.edge_id << ',' << c.v0 << ',' << c.v1 << ',' << c.tri_k << ',' << c.tri_l << ',' << format_value(c.l)
        << ',' << format_value(c.d) << ',' << format_value(c.alpha) << ',' << format_value(c.normal_diff) << ','
        << format_value(c.value) << '\n';
  }
}

std::string energy_csv(const EnergyBreakdown& breakdown) {
  std::ostringstream s;
  write_energy_csv(s, breakdown);
  return s.str();
}

std::vector<EdgeContribution> parse_energy_csv(std::istream& in) {
  std::vector<EdgeContribution> rows;
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw Error(ErrorKind::ParseError, "line 1: missing header");
  ++lineno;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) f.push_back(field);
    if (f.size() != 10) throw Error(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": expected 10 fields");
    EdgeContribution c;
    try {
      c.edge_id = std::stoul(f[0]);
      c.v0 = std::stoi(f[1]);
      c.v1 = std::stoi(f[2]);
      c.tri_k = std::stoi(f[3]);
      c.tri_l = std::stoi(f[4]);
    } catch (const std::exception&) {
      throw Error(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": bad integer field");
    }
    c.l = parse_value(f[5], lineno);
    c.d = parse_value(f[6], lineno);
    c.alpha = parse_value(f[7], lineno);
    c.normal_diff = parse_value(f[8], lineno);
    c.value = parse_value(f[9], lineno);
    rows.push_back(c);
  }
  return rows;
}

}  // namespace dw::energy
