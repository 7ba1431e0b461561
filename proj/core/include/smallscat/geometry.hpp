#pragma once

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <optional>
#include <vector>

#include "smallscat/types.hpp"

namespace smallscat {

// Axis-aligned cube [0, side]^3.
struct CubeDomain {
  double side = 1.0;
  double volume() const { return side * side * side; }
  bool contains(const Vec3& p) const {
    return p.x >= 0.0 && p.x <= side && p.y >= 0.0 && p.y <= side &&
           p.z >= 0.0 && p.z <= side;
  }
};

// A deterministic cloud of particle centers. `overflow` is set when the
// generating lattice block does not fit strictly inside the domain; runs
// proceed, and consumers skip centers that fall outside.
struct ParticleCloud {
  std::shared_ptr<const std::vector<Vec3>> centers;
  double radius_a = 0.0;
  double spacing_d = 0.0;
  CubeDomain domain;
  bool overflow = false;

  std::size_t size() const { return centers ? centers->size() : 0; }
};

// First `count` points of a cubic lattice with pitch `spacing`,
// ceil(count^(1/3)) sites per side, the site block centered in the domain.
// Points are enumerated in lexicographic (z, y, x) order, x fastest.
// Throws on count = 0, spacing <= 0, or radius >= spacing (radius 0 means
// "not set yet").
ParticleCloud place_uniform_lattice(std::size_t count, double spacing,
                                    CubeDomain domain, double radius = 0.0);

// Uniform partition of the domain cube into cells_per_side^3 congruent
// cells. Cell centers follow the same (z, y, x) enumeration as clouds.
struct GridPartition {
  CubeDomain domain;
  std::size_t cells_per_side = 0;
  std::shared_ptr<const std::vector<Vec3>> centers;

  std::size_t total_cells() const {
    return cells_per_side * cells_per_side * cells_per_side;
  }
  double cell_side() const {
    return domain.side / static_cast<double>(cells_per_side);
  }
  double cell_volume() const {
    const double b = cell_side();
    return b * b * b;
  }
};

// Throws on cells_per_side = 0 or side <= 0.
GridPartition partition_cube(CubeDomain domain, std::size_t cells_per_side);

// Flat cell index of the cell containing `p`, in O(1) arithmetic. Cells are
// half-open [lo, hi) along every axis except the last cell per axis, which
// is closed. Returns nullopt when p lies outside the domain.
std::optional<std::size_t> try_locate_cell(const GridPartition& grid,
                                           const Vec3& p);

// As try_locate_cell, but throws std::out_of_range for points outside the
// domain (the cell mean then cannot include the point).
std::size_t locate_cell(const GridPartition& grid, const Vec3& p);

// Plain-text point serialization: one line per point, three space-separated
// decimals with 17 significant digits, which round-trips doubles exactly.
void write_points(std::ostream& out, const std::vector<Vec3>& points);
std::vector<Vec3> read_points(std::istream& in);

}  // namespace smallscat
