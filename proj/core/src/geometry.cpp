#include "smallscat/geometry.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace smallscat {

namespace {

std::size_t sites_per_side(std::size_t count) {
  std::size_t n = static_cast<std::size_t>(
      std::llround(std::cbrt(static_cast<double>(count))));
  if (n == 0) n = 1;
  while (n * n * n < count) ++n;
  while (n > 1 && (n - 1) * (n - 1) * (n - 1) >= count) --n;
  return n;
}

}  // namespace

ParticleCloud place_uniform_lattice(std::size_t count, double spacing,
                                    CubeDomain domain, double radius) {
  if (count == 0) throw std::invalid_argument("particle count must be > 0");
  if (!(spacing > 0.0)) throw std::invalid_argument("spacing must be > 0");
  if (!(domain.side > 0.0))
    throw std::invalid_argument("domain side must be > 0");
  if (radius < 0.0 || (radius > 0.0 && radius >= spacing))
    throw std::invalid_argument("particle radius must be < spacing");

  const std::size_t n = sites_per_side(count);
  const double mid = 0.5 * static_cast<double>(n - 1);
  const double center = 0.5 * domain.side;
  const double lo = center - mid * spacing;
  const double hi = center + mid * spacing;

  auto points = std::make_shared<std::vector<Vec3>>();
  points->reserve(count);
  for (std::size_t iz = 0; iz < n && points->size() < count; ++iz) {
    const double z = center + (static_cast<double>(iz) - mid) * spacing;
    for (std::size_t iy = 0; iy < n && points->size() < count; ++iy) {
      const double y = center + (static_cast<double>(iy) - mid) * spacing;
      for (std::size_t ix = 0; ix < n && points->size() < count; ++ix) {
        const double x = center + (static_cast<double>(ix) - mid) * spacing;
        points->push_back({x, y, z});
      }
    }
  }

  ParticleCloud cloud;
  cloud.centers = std::move(points);
  cloud.radius_a = radius;
  cloud.spacing_d = spacing;
  cloud.domain = domain;
  cloud.overflow = !(lo > 0.0 && hi < domain.side);
  return cloud;
}

GridPartition partition_cube(CubeDomain domain, std::size_t cells_per_side) {
  if (cells_per_side == 0)
    throw std::invalid_argument("cells_per_side must be > 0");
  if (!(domain.side > 0.0))
    throw std::invalid_argument("domain side must be > 0");

  const double b = domain.side / static_cast<double>(cells_per_side);
  auto centers = std::make_shared<std::vector<Vec3>>();
  centers->reserve(cells_per_side * cells_per_side * cells_per_side);
  for (std::size_t iz = 0; iz < cells_per_side; ++iz) {
    const double z = (static_cast<double>(iz) + 0.5) * b;
    for (std::size_t iy = 0; iy < cells_per_side; ++iy) {
      const double y = (static_cast<double>(iy) + 0.5) * b;
      for (std::size_t ix = 0; ix < cells_per_side; ++ix) {
        const double x = (static_cast<double>(ix) + 0.5) * b;
        centers->push_back({x, y, z});
      }
    }
  }

  GridPartition grid;
  grid.domain = domain;
  grid.cells_per_side = cells_per_side;
  grid.centers = std::move(centers);
  return grid;
}

std::optional<std::size_t> try_locate_cell(const GridPartition& grid,
                                           const Vec3& p) {
  if (!grid.domain.contains(p)) return std::nullopt;
  const double b = grid.cell_side();
  const std::size_t n = grid.cells_per_side;
  const auto axis = [&](double v) -> std::size_t {
    auto i = static_cast<long long>(std::floor(v / b));
    if (i < 0) i = 0;
    if (i >= static_cast<long long>(n)) i = static_cast<long long>(n) - 1;
    return static_cast<std::size_t>(i);
  };
  return (axis(p.z) * n + axis(p.y)) * n + axis(p.x);
}

std::size_t locate_cell(const GridPartition& grid, const Vec3& p) {
  const auto cell = try_locate_cell(grid, p);
  if (!cell) throw std::out_of_range("point lies outside the domain cube");
  return *cell;
}

void write_points(std::ostream& out, const std::vector<Vec3>& points) {
  char line[96];
  for (const Vec3& p : points) {
    std::snprintf(line, sizeof line, "%.17g %.17g %.17g\n", p.x, p.y, p.z);
    out << line;
  }
}

std::vector<Vec3> read_points(std::istream& in) {
  std::vector<Vec3> points;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    Vec3 p;
    if (!(row >> p.x >> p.y >> p.z))
      throw std::runtime_error("malformed point line: " + line);
    points.push_back(p);
  }
  return points;
}

}  // namespace smallscat
