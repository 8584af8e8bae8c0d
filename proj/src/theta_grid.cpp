#include <cmath>
#include <cstdint>
#include <sstream>
#include <unordered_map>

#include "dw/generators.hpp"

namespace dw::generators {

void check_admissible(const ThetaGridSpec& spec) {
  if (!(spec.eps > 0)) throw Error(ErrorKind::InvalidArgument, "grid scale must be positive");
  const double delta = spec.field.max_gradient();
  const double t = std::abs(spec.theta);
  if (!(t <= 0.5) || !(spec.admissibility_constant * delta * delta < t)) {
    std::ostringstream s;
    s << "theta=" << spec.theta << " outside (" << spec.admissibility_constant * delta * delta << ", 0.5]"
      << " for max|grad h|=" << delta;
    throw Error(ErrorKind::InadmissibleTheta, s.str());
  }
}

IndexedMesh theta_grid_flat(const ThetaGridSpec& spec) {
  check_admissible(spec);
  const Rect& u = spec.field.domain;
  const double eps = spec.eps, theta = spec.theta;
  const double slack = 1e-9;

  auto key = [](std::int64_t k, std::int64_t l) { return (k << 32) ^ (l & 0xffffffff); };
  std::unordered_map<std::int64_t, int> index;
  IndexedMesh mesh;
  const auto l0 = static_cast<std::int64_t>(std::ceil(u.y0 / eps - slack));
  const auto l1 = static_cast<std::int64_t>(std::floor(u.y1 / eps + slack));
  for (std::int64_t l = l0; l <= l1; ++l) {
    const auto k0 = static_cast<std::int64_t>(std::ceil(u.x0 / eps - theta * l - slack));
    const auto k1 = static_cast<std::int64_t>(std::floor(u.x1 / eps - theta * l + slack));
    for (std::int64_t k = k0; k <= k1; ++k) {
      index[key(k, l)] = static_cast<int>(mesh.vertices.size());
      mesh.vertices.emplace_back(eps * (k + theta * l), eps * l, 0.0);
    }
  }

  auto at = [&](std::int64_t k, std::int64_t l) {
    const auto it = index.find(key(k, l));
    return it == index.end() ? -1 : it->second;
  };
  auto add = [&](int a, int b, int c) {
    if (a >= 0 && b >= 0 && c >= 0) mesh.triangles.push_back({a, b, c});
  };
  for (std::int64_t l = l0; l < l1; ++l) {
    const auto k0 = static_cast<std::int64_t>(std::ceil(u.x0 / eps - theta * l - slack)) - 1;
    const auto k1 = static_cast<std::int64_t>(std::floor(u.x1 / eps - theta * l + slack)) + 1;
    for (std::int64_t k = k0; k <= k1; ++k) {
      const int p00 = at(k, l), p10 = at(k + 1, l), p01 = at(k, l + 1), p11 = at(k + 1, l + 1);
      if (theta > 0) {
        add(p00, p10, p01);
        add(p10, p11, p01);
      } else {
        add(p00, p10, p11);
        add(p00, p11, p01);
      }
    }
  }
  if (mesh.triangles.empty()) throw Error(ErrorKind::EmptyDomain, "no lattice cell fits in the domain");
  return mesh::compact(mesh);
}

IndexedMesh theta_grid(const ThetaGridSpec& spec) { return mesh::push_forward(theta_grid_flat(spec), spec.field.h); }

}  // namespace dw::generators
