#include <cmath>
#include <numbers>
#include <sstream>

#include "dw/generators.hpp"

namespace dw {

CounterexampleSpec CounterexampleSpec::from_indices(int m, int j, bool flat) {
  if (m <= 0 || j < 0) throw Error(ErrorKind::InvalidArgument, "need m > 0 and j >= 0");
  return {2.0 * std::numbers::pi / m, std::ldexp(1.0, -j), flat};
}

namespace generators {

IndexedMesh counterexample_cylinder(const CounterexampleSpec& spec) {
  if (!(spec.s > 0) || !(spec.eps > 0)) throw Error(ErrorKind::InvalidArgument, "s and eps must be positive");
  const double columns_real = 2.0 * std::numbers::pi / (spec.s * spec.eps);
  const long columns = std::lround(columns_real);
  if (std::abs(columns_real - static_cast<double>(columns)) > 1e-9 * columns_real || columns < 2 || columns % 2 != 0) {
    std::ostringstream s;
    s << "2 pi / (s eps) = " << columns_real << " is not an even integer";
    throw Error(ErrorKind::NonIntegerColumns, s.str());
  }
  const double rows_real = 2.0 / spec.eps;
  const long rows = std::lround(rows_real);
  if (std::abs(rows_real - static_cast<double>(rows)) > 1e-9 * rows_real || rows < 2)
    throw Error(ErrorKind::InvalidArgument, "2 / eps must be an integer");

  const double eps = spec.eps;
  const long lines = spec.flat ? columns + 1 : columns;

  IndexedMesh mesh;
  std::vector<int> first(lines);
  for (long c = 0; c < lines; ++c) {
    first[c] = static_cast<int>(mesh.vertices.size());
    const bool odd = c % 2 != 0;
    const long count = odd ? rows : rows + 1;
    // Exact angle of the wrap line so that phi(C) = 2 pi.
    const double phi = 2.0 * std::numbers::pi * static_cast<double>(c) / static_cast<double>(columns);
    for (long k = 0; k < count; ++k) {
      const double t = -1.0 + k * eps + (odd ? 0.5 * eps : 0.0);
      if (spec.flat) {
        mesh.vertices.emplace_back(phi, t, 0.0);
      } else {
        mesh.vertices.emplace_back(std::cos(phi), std::sin(phi), t);
      }
    }
  }

  for (long c = 0; c < columns; ++c) {
    const long next = (c + 1) % lines;
    const int a0 = first[c], b0 = first[next];
    auto a = [&](long k) { return a0 + static_cast<int>(k); };
    auto b = [&](long k) { return b0 + static_cast<int>(k); };
    if (c % 2 == 0) {
      for (long k = 0; k < rows; ++k) mesh.triangles.push_back({a(k), b(k), a(k + 1)});
      for (long k = 0; k + 1 < rows; ++k) mesh.triangles.push_back({b(k), b(k + 1), a(k + 1)});
    } else {
      for (long k = 0; k + 1 < rows; ++k) mesh.triangles.push_back({a(k), b(k + 1), a(k + 1)});
      for (long k = 0; k < rows; ++k) mesh.triangles.push_back({b(k), b(k + 1), a(k)});
    }
  }
  return mesh;
}

}  // namespace generators
}  // namespace dw
