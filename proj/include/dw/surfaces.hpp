#pragma once

// Analytic reference surfaces and their Willmore energy.

#include <Eigen/Core>

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "dw/mesh.hpp"

namespace dw {

struct Rect {
  double x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;

  double area() const { return (x1 - x0) * (y1 - y0); }
  bool contains(double x, double y, double tol = 0.0) const {
    return x >= x0 - tol && x <= x1 + tol && y >= y0 - tol && y <= y1 + tol;
  }
};

/// Height field with analytic gradient and Hessian on a rectangle.
struct ScalarField2D {
  std::function<double(double, double)> h;
  std::function<Vec2(double, double)> gradient;
  std::function<Eigen::Matrix2d(double, double)> hessian;
  Rect domain;
  std::string name;

  double operator()(double x, double y) const { return h(x, y); }

  /// h = a x^2 + b x y + c y^2
  static ScalarField2D quadratic(double a, double b, double c, Rect domain);
  /// h = a x + b y + c
  static ScalarField2D affine(double a, double b, double c, Rect domain);
  /// h = a sin(b x) cos(c y)
  static ScalarField2D trig(double a, double b, double c, Rect domain);

  /// max |grad h| over the domain, estimated on a grid of n x n nodes plus
  /// the corners. Exact for quadratics and affine fields (extremes on the
  /// boundary, which the grid contains).
  double max_gradient(int n = 65) const;
};

struct Curvatures {
  double k1 = 0.0, k2 = 0.0;  // k1 >= k2, sign w.r.t. the upward normal
  Vec2 dir1, dir2;            // principal directions in the parameter plane
  Vec3 tangent1, tangent2;    // the same directions on the surface, unit length
};

/// Principal curvatures of the graph of h at (x, y): eigenpairs of the shape
/// operator g^{-1} D^2h / sqrt(1 + |grad h|^2) with g = 1 + grad h (x) grad h.
Curvatures graph_curvatures(const ScalarField2D& field, double x, double y);

enum class SurfaceKind { Sphere, Cylinder, Torus, Graph };

struct SurfaceSample {
  std::vector<Point3> points;
  double covering_bound = 0.0;  // every surface point is this close to a sample
};

class AnalyticSurface {
 public:
  static AnalyticSurface sphere(double radius = 1.0);
  /// Radius r, axis z, t in [-half_height, half_height].
  static AnalyticSurface cylinder(double radius = 1.0, double half_height = 1.0);
  static AnalyticSurface torus(double major, double minor);
  static AnalyticSurface graph(ScalarField2D field);

  SurfaceKind kind() const { return kind_; }
  double radius() const { return a_; }
  double half_height() const { return b_; }
  double major_radius() const { return a_; }
  double minor_radius() const { return b_; }
  const ScalarField2D& field() const { return field_; }

  /// Parameter rectangle (u, v).
  Rect parameter_domain() const;
  Point3 position(double u, double v) const;
  Vec3 normal(double u, double v) const;
  /// Principal curvatures (k1, k2) at (u, v).
  std::pair<double, double> curvatures(double u, double v) const;
  double area_element(double u, double v) const;

  /// Signed function vanishing on the surface (extended beyond its
  /// boundary); its gradient points along the surface normal.
  double implicit(const Point3& p) const;
  Vec3 implicit_gradient(const Point3& p) const;
  /// Whether a point with implicit(p) = 0 belongs to the bounded surface
  /// (cylinder height, graph domain).
  bool in_domain(const Point3& p, double tol = 1e-12) const;
  /// Distance of p from the surface for points already close to it.
  double distance(const Point3& p) const;

  /// Quasi-uniform sample with spacing at most `spacing` along both
  /// parameter directions; covering_bound = spacing.
  SurfaceSample sample(double spacing) const;

  std::string describe() const;

 private:
  SurfaceKind kind_ = SurfaceKind::Sphere;
  double a_ = 1.0, b_ = 1.0;
  ScalarField2D field_;
};

namespace surfaces {

/// Integral of k1^2 + k2^2 over the surface. Closed forms for the sphere
/// (8 pi) and cylinder (area / r^2); nested Gauss-Legendre otherwise,
/// doubling from `quadrature_order` until two orders agree to 1e-6.
/// Graphs use tr((g^{-1} D^2h)^2) / sqrt(1 + |grad h|^2).
/// Throws QuadratureNotConverged.
double willmore_energy(const AnalyticSurface& surface, int quadrature_order = 8);

/// Same quantity always by quadrature of (k1^2 + k2^2) * area element,
/// with curvatures from the shape-operator eigenvalues.
double willmore_energy_from_curvatures(const AnalyticSurface& surface, int quadrature_order = 8);

/// Gauss-Legendre nodes and weights on [-1, 1].
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n);

/// Tensor-product Gauss-Legendre with doubling. Throws QuadratureNotConverged.
double integrate_2d(const std::function<double(double, double)>& f, const Rect& r, int start_order = 8,
                    double rel_tol = 1e-6, int max_order = 1024);

/// Parses `sphere:r=1`, `cylinder:r=1,h=1`, `torus:R=2,r=0.5`,
/// `graph:h=quadratic,a=..,b=..,c=..,U=[x0,x1]x[y0,y1]` (also h=affine,
/// h=trig). Throws InvalidArgument.
AnalyticSurface parse_surface(const std::string& text);

/// Parses a field description of the graph form above without the
/// `graph:` prefix, e.g. `h=quadratic,a=0.05,b=0,c=-0.05,U=[0,1]x[0,1]`.
ScalarField2D parse_field(const std::string& text);

}  // namespace surfaces
}  // namespace dw
