#include "dw/surfaces.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <sstream>

namespace dw {

namespace {
constexpr double kPi = std::numbers::pi;
}

ScalarField2D ScalarField2D::quadratic(double a, double b, double c, Rect domain) {
  ScalarField2D f;
  f.h = [=](double x, double y) { return a * x * x + b * x * y + c * y * y; };
  f.gradient = [=](double x, double y) { return Vec2(2 * a * x + b * y, b * x + 2 * c * y); };
  f.hessian = [=](double, double) {
    Eigen::Matrix2d m;
    m << 2 * a, b, b, 2 * c;
    return m;
  };
  f.domain = domain;
  std::ostringstream s;
  s << "quadratic(a=" << a << ",b=" << b << ",c=" << c << ")";
  f.name = s.str();
  return f;
}

ScalarField2D ScalarField2D::affine(double a, double b, double c, Rect domain) {
  ScalarField2D f;
  f.h = [=](double x, double y) { return a * x + b * y + c; };
  f.gradient = [=](double, double) { return Vec2(a, b); };
  f.hessian = [](double, double) { return Eigen::Matrix2d::Zero().eval(); };
  f.domain = domain;
  std::ostringstream s;
  s << "affine(a=" << a << ",b=" << b << ",c=" << c << ")";
  f.name = s.str();
  return f;
}

ScalarField2D ScalarField2D::trig(double a, double b, double c, Rect domain) {
  ScalarField2D f;
  f.h = [=](double x, double y) { return a * std::sin(b * x) * std::cos(c * y); };
  f.gradient = [=](double x, double y) {
    return Vec2(a * b * std::cos(b * x) * std::cos(c * y), -a * c * std::sin(b * x) * std::sin(c * y));
  };
  f.hessian = [=](double x, double y) {
    const double s = std::sin(b * x), co = std::cos(b * x), sy = std::sin(c * y), cy = std::cos(c * y);
    Eigen::Matrix2d m;
    m << -a * b * b * s * cy, -a * b * c * co * sy, -a * b * c * co * sy, -a * c * c * s * cy;
    return m;
  };
  f.domain = domain;
  std::ostringstream s;
  s << "trig(a=" << a << ",b=" << b << ",c=" << c << ")";
  f.name = s.str();
  return f;
}

double ScalarField2D::max_gradient(int n) const {
  double m = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = domain.x0 + (domain.x1 - domain.x0) * i / (n - 1);
    for (int j = 0; j < n; ++j) {
      const double y = domain.y0 + (domain.y1 - domain.y0) * j / (n - 1);
      m = std::max(m, gradient(x, y).norm());
    }
  }
  return m;
}

Curvatures graph_curvatures(const ScalarField2D& field, double x, double y) {
  const Vec2 g = field.gradient(x, y);
  const Eigen::Matrix2d hess = field.hessian(x, y);
  const Eigen::Matrix2d metric = Eigen::Matrix2d::Identity() + g * g.transpose();
  const double w = std::sqrt(1.0 + g.squaredNorm());
  // Shape operator g^{-1} II with II = D^2h / w; solve II v = k g v.
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::Matrix2d> solver(hess / w, metric);
  Curvatures c;
  c.k1 = solver.eigenvalues()(1);
  c.k2 = solver.eigenvalues()(0);
  c.dir1 = solver.eigenvectors().col(1).normalized();
  c.dir2 = solver.eigenvectors().col(0).normalized();
  auto lift = [&](const Vec2& d) { return Vec3(d.x(), d.y(), g.dot(d)).normalized(); };
  c.tangent1 = lift(c.dir1);
  c.tangent2 = lift(c.dir2);
  return c;
}

AnalyticSurface AnalyticSurface::sphere(double radius) {
  if (!(radius > 0)) throw Error(ErrorKind::InvalidArgument, "sphere radius must be positive");
  AnalyticSurface s;
  s.kind_ = SurfaceKind::Sphere;
  s.a_ = radius;
  return s;
}

AnalyticSurface AnalyticSurface::cylinder(double radius, double half_height) {
  if (!(radius > 0) || !(half_height > 0)) throw Error(ErrorKind::InvalidArgument, "cylinder dimensions must be positive");
  AnalyticSurface s;
  s.kind_ = SurfaceKind::Cylinder;
  s.a_ = radius;
  s.b_ = half_height;
  return s;
}

AnalyticSurface AnalyticSurface::torus(double major, double minor) {
  if (!(minor > 0) || !(major > minor)) throw Error(ErrorKind::InvalidArgument, "torus needs R > r > 0");
  AnalyticSurface s;
  s.kind_ = SurfaceKind::Torus;
  s.a_ = major;
  s.b_ = minor;
  return s;
}

AnalyticSurface AnalyticSurface::graph(ScalarField2D field) {
  if (field.domain.x1 <= field.domain.x0 || field.domain.y1 <= field.domain.y0)
    throw Error(ErrorKind::EmptyDomain, "graph domain is empty");
  AnalyticSurface s;
  s.kind_ = SurfaceKind::Graph;
  s.field_ = std::move(field);
  return s;
}

Rect AnalyticSurface::parameter_domain() const {
  switch (kind_) {
    case SurfaceKind::Sphere: return {0.0, 2 * kPi, 0.0, kPi};
    case SurfaceKind::Cylinder: return {0.0, 2 * kPi, -b_, b_};
    case SurfaceKind::Torus: return {0.0, 2 * kPi, 0.0, 2 * kPi};
    case SurfaceKind::Graph: return field_.domain;
  }
  return {};
}

Point3 AnalyticSurface::position(double u, double v) const {
  switch (kind_) {
    case SurfaceKind::Sphere: return a_ * Point3(std::sin(v) * std::cos(u), std::sin(v) * std::sin(u), std::cos(v));
    case SurfaceKind::Cylinder: return {a_ * std::cos(u), a_ * std::sin(u), v};
    case SurfaceKind::Torus: {
      const double rho = a_ + b_ * std::cos(v);
      return {rho * std::cos(u), rho * std::sin(u), b_ * std::sin(v)};
    }
    case SurfaceKind::Graph: return {u, v, field_.h(u, v)};
  }
  return Point3::Zero();
}

Vec3 AnalyticSurface::normal(double u, double v) const {
  switch (kind_) {
    case SurfaceKind::Sphere: return Vec3(std::sin(v) * std::cos(u), std::sin(v) * std::sin(u), std::cos(v));
    case SurfaceKind::Cylinder: return {std::cos(u), std::sin(u), 0.0};
    case SurfaceKind::Torus: return {std::cos(v) * std::cos(u), std::cos(v) * std::sin(u), std::sin(v)};
    case SurfaceKind::Graph: {
      const Vec2 g = field_.gradient(u, v);
      return Vec3(-g.x(), -g.y(), 1.0).normalized();
    }
  }
  return Vec3::UnitZ();
}

std::pair<double, double> AnalyticSurface::curvatures(double u, double v) const {
  switch (kind_) {
    case SurfaceKind::Sphere: return {1.0 / a_, 1.0 / a_};
    case SurfaceKind::Cylinder: return {1.0 / a_, 0.0};
    case SurfaceKind::Torus: return {1.0 / b_, std::cos(v) / (a_ + b_ * std::cos(v))};
    case SurfaceKind::Graph: {
      const Curvatures c = graph_curvatures(field_, u, v);
      return {c.k1, c.k2};
    }
  }
  return {0.0, 0.0};
}

double AnalyticSurface::area_element(double u, double v) const {
  switch (kind_) {
    case SurfaceKind::Sphere: return a_ * a_ * std::sin(v);
    case SurfaceKind::Cylinder: return a_;
    case SurfaceKind::Torus: return b_ * (a_ + b_ * std::cos(v));
    case SurfaceKind::Graph: return std::sqrt(1.0 + field_.gradient(u, v).squaredNorm());
  }
  return 0.0;
}

double AnalyticSurface::implicit(const Point3& p) const {
  switch (kind_) {
    case SurfaceKind::Sphere: return p.norm() - a_;
    case SurfaceKind::Cylinder: return std::hypot(p.x(), p.y()) - a_;
    case SurfaceKind::Torus: return std::hypot(std::hypot(p.x(), p.y()) - a_, p.z()) - b_;
    case SurfaceKind::Graph: return p.z() - field_.h(p.x(), p.y());
  }
  return 0.0;
}

Vec3 AnalyticSurface::implicit_gradient(const Point3& p) const {
  switch (kind_) {
    case SurfaceKind::Sphere: return p.normalized();
    case SurfaceKind::Cylinder: return Vec3(p.x(), p.y(), 0.0).normalized();
    case SurfaceKind::Torus: {
      const double rho = std::hypot(p.x(), p.y());
      const Vec3 radial(p.x() / rho, p.y() / rho, 0.0);
      const double tube = std::hypot(rho - a_, p.z());
      return ((rho - a_) * radial + Vec3(0, 0, p.z())) / tube;
    }
    case SurfaceKind::Graph: {
      const Vec2 g = field_.gradient(p.x(), p.y());
      return {-g.x(), -g.y(), 1.0};
    }
  }
  return Vec3::UnitZ();
}

bool AnalyticSurface::in_domain(const Point3& p, double tol) const {
  switch (kind_) {
    case SurfaceKind::Cylinder: return std::abs(p.z()) <= b_ + tol;
    case SurfaceKind::Graph: return field_.domain.contains(p.x(), p.y(), tol);
    default: return true;
  }
}

double AnalyticSurface::distance(const Point3& p) const {
  if (kind_ == SurfaceKind::Graph) {
    const Vec2 g = field_.gradient(p.x(), p.y());
    return std::abs(implicit(p)) / std::sqrt(1.0 + g.squaredNorm());
  }
  return std::abs(implicit(p));
}

SurfaceSample AnalyticSurface::sample(double spacing) const {
  if (!(spacing > 0)) throw Error(ErrorKind::InvalidArgument, "sample spacing must be positive");
  SurfaceSample out;
  out.covering_bound = spacing;
  auto ring = [&](double v, double circumference, auto&& emit) {
    const int m = std::max(1, static_cast<int>(std::ceil(circumference / spacing - 1e-12)));
    for (int j = 0; j < m; ++j) emit(2 * kPi * j / m, v);
  };
  auto emit = [&](double u, double v) { out.points.push_back(position(u, v)); };
  switch (kind_) {
    case SurfaceKind::Sphere: {
      const int rows = std::max(1, static_cast<int>(std::ceil(kPi * a_ / spacing - 1e-12)));
      for (int i = 0; i <= rows; ++i) {
        const double v = kPi * i / rows;
        if (i == 0 || i == rows) {
          emit(0.0, v);
        } else {
          ring(v, 2 * kPi * a_ * std::sin(v), emit);
        }
      }
      break;
    }
    case SurfaceKind::Cylinder: {
      const int rows = std::max(1, static_cast<int>(std::ceil(2 * b_ / spacing - 1e-12)));
      for (int i = 0; i <= rows; ++i) ring(-b_ + 2 * b_ * i / rows, 2 * kPi * a_, emit);
      break;
    }
    case SurfaceKind::Torus: {
      const int rows = std::max(3, static_cast<int>(std::ceil(2 * kPi * b_ / spacing - 1e-12)));
      for (int i = 0; i < rows; ++i) {
        const double v = 2 * kPi * i / rows;
        ring(v, 2 * kPi * (a_ + b_ * std::cos(v)), emit);
      }
      break;
    }
    case SurfaceKind::Graph: {
      const Rect& d = field_.domain;
      const double stretch = std::sqrt(1.0 + std::pow(field_.max_gradient(), 2));
      const int nx = std::max(1, static_cast<int>(std::ceil((d.x1 - d.x0) * stretch / spacing - 1e-12)));
      const int ny = std::max(1, static_cast<int>(std::ceil((d.y1 - d.y0) * stretch / spacing - 1e-12)));
      for (int j = 0; j <= ny; ++j)
        for (int i = 0; i <= nx; ++i) emit(d.x0 + (d.x1 - d.x0) * i / nx, d.y0 + (d.y1 - d.y0) * j / ny);
      break;
    }
  }
  return out;
}

std::string AnalyticSurface::describe() const {
  std::ostringstream s;
  switch (kind_) {
    case SurfaceKind::Sphere: s << "sphere:r=" << a_; break;
    case SurfaceKind::Cylinder: s << "cylinder:r=" << a_ << ",h=" << b_; break;
    case SurfaceKind::Torus: s << "torus:R=" << a_ << ",r=" << b_; break;
    case SurfaceKind::Graph: {
      const Rect& d = field_.domain;
      s << "graph:" << field_.name << ",U=[" << d.x0 << "," << d.x1 << "]x[" << d.y0 << "," << d.y1 << "]";
      break;
    }
  }
  return s.str();
}

namespace surfaces {

std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
  std::vector<double> x(n), w(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) {
        p1 = z;
        p0 = 1.0;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    // Recompute derivative at the converged node.
    double p0 = 1.0, p1 = z;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (z * p1 - p0) / (z * z - 1.0);
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  if (n == 1) {
    x[0] = 0.0;
    w[0] = 2.0;
  }
  return {x, w};
}

namespace {

double tensor_rule(const std::function<double(double, double)>& f, const Rect& r, int n) {
  const auto [x, w] = gauss_legendre(n);
  const double hx = 0.5 * (r.x1 - r.x0), hy = 0.5 * (r.y1 - r.y0);
  const double cx = 0.5 * (r.x1 + r.x0), cy = 0.5 * (r.y1 + r.y0);
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    double row = 0.0;
    for (int j = 0; j < n; ++j) row += w[j] * f(cx + hx * x[i], cy + hy * x[j]);
    total += w[i] * row;
  }
  return total * hx * hy;
}

}  // namespace

double integrate_2d(const std::function<double(double, double)>& f, const Rect& r, int start_order, double rel_tol,
                    int max_order) {
  int n = std::max(1, start_order);
  double previous = tensor_rule(f, r, n);
  while (2 * n <= max_order) {
    n *= 2;
    const double current = tensor_rule(f, r, n);
    if (std::abs(current - previous) <= rel_tol * std::max(std::abs(current), std::abs(previous))) return current;
    previous = current;
  }
  throw Error(ErrorKind::QuadratureNotConverged, "no agreement up to order " + std::to_string(n));
}

double willmore_energy_from_curvatures(const AnalyticSurface& surface, int quadrature_order) {
  return integrate_2d(
      [&](double u, double v) {
        const auto [k1, k2] = surface.curvatures(u, v);
        return (k1 * k1 + k2 * k2) * surface.area_element(u, v);
      },
      surface.parameter_domain(), quadrature_order);
}

double willmore_energy(const AnalyticSurface& surface, int quadrature_order) {
  switch (surface.kind()) {
    case SurfaceKind::Sphere: return 8.0 * kPi;
    case SurfaceKind::Cylinder: {
      const double r = surface.radius();
      const double area = 2.0 * kPi * r * 2.0 * surface.half_height();
      return area / (r * r);
    }
    case SurfaceKind::Torus: return willmore_energy_from_curvatures(surface, quadrature_order);
    case SurfaceKind::Graph: {
      const ScalarField2D& f = surface.field();
      return integrate_2d(
          [&](double x, double y) {
            const Vec2 g = f.gradient(x, y);
            const Eigen::Matrix2d metric = Eigen::Matrix2d::Identity() + g * g.transpose();
            const Eigen::Matrix2d a = metric.inverse() * f.hessian(x, y);
            return (a * a).trace() / std::sqrt(1.0 + g.squaredNorm());
          },
          f.domain, quadrature_order);
    }
  }
  return 0.0;
}

namespace {

std::map<std::string, std::string> parse_params(const std::string& text) {
  std::map<std::string, std::string> out;
  std::string item;
  int depth = 0;
  auto flush = [&]() {
    if (item.empty()) return;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::InvalidArgument, "expected key=value, got '" + item + "'");
    out[item.substr(0, eq)] = item.substr(eq + 1);
    item.clear();
  };
  for (char ch : text) {
    if (ch == '[') ++depth;
    if (ch == ']') --depth;
    if (ch == ',' && depth == 0) {
      flush();
    } else if (!std::isspace(static_cast<unsigned char>(ch))) {
      item += ch;
    }
  }
  flush();
  return out;
}

double number(const std::map<std::string, std::string>& p, const std::string& key, double fallback) {
  const auto it = p.find(key);
  if (it == p.end()) return fallback;
  try {
    std::size_t pos = 0;
    const double v = std::stod(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument(key);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorKind::InvalidArgument, "bad number for " + key + ": '" + it->second + "'");
  }
}

Rect parse_rect(const std::string& text) {
  Rect r;
  char tail = 0;
  if (std::sscanf(text.c_str(), "[%lf,%lf]x[%lf,%lf]%c", &r.x0, &r.x1, &r.y0, &r.y1, &tail) != 4)
    throw Error(ErrorKind::InvalidArgument, "bad rectangle '" + text + "', expected [x0,x1]x[y0,y1]");
  if (r.x1 <= r.x0 || r.y1 <= r.y0) throw Error(ErrorKind::EmptyDomain, "rectangle '" + text + "' is empty");
  return r;
}

ScalarField2D field_from(const std::map<std::string, std::string>& p) {
  const auto it = p.find("h");
  const std::string kind = it == p.end() ? "quadratic" : it->second;
  const auto u = p.find("U");
  const Rect domain = u == p.end() ? Rect{} : parse_rect(u->second);
  const double a = number(p, "a", 0.0), b = number(p, "b", 0.0), c = number(p, "c", 0.0);
  if (kind == "quadratic") return ScalarField2D::quadratic(a, b, c, domain);
  if (kind == "affine") return ScalarField2D::affine(a, b, c, domain);
  if (kind == "trig") return ScalarField2D::trig(a, b, c, domain);
  throw Error(ErrorKind::InvalidArgument, "unknown height field '" + kind + "'");
}

}  // namespace

ScalarField2D parse_field(const std::string& text) { return field_from(parse_params(text)); }

AnalyticSurface parse_surface(const std::string& text) {
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  const auto p = parse_params(colon == std::string::npos ? "" : text.substr(colon + 1));
  if (kind == "sphere") return AnalyticSurface::sphere(number(p, "r", 1.0));
  if (kind == "cylinder") return AnalyticSurface::cylinder(number(p, "r", 1.0), number(p, "h", 1.0));
  if (kind == "torus") return AnalyticSurface::torus(number(p, "R", 2.0), number(p, "r", 0.5));
  if (kind == "graph") return AnalyticSurface::graph(field_from(p));
  throw Error(ErrorKind::InvalidArgument, "unknown surface kind '" + kind + "'");
}

}  // namespace surfaces
}  // namespace dw
