#pragma once

#include <cstddef>

#include "smallscat/types.hpp"

namespace smallscat {

// Physical setting: incident plane wave exp(i k alpha.x) in a cube domain
// [0, omega_side]^3, target refraction coefficient n_desired to be created
// from background n0 by embedding small impedance particles.
struct PhysicalConfig {
  double k = 0.0;           // wave number, 1/cm
  Vec3 alpha{1.0, 0.0, 0.0};  // unit propagation direction
  double kappa = 0.0;       // impedance growth exponent, in [0, 1)
  double omega_side = 1.0;  // cube side, cm
  Complex n0{1.0, 0.0};     // background refraction coefficient
  Complex n_desired{1.0, 0.0};

  double omega_volume() const {
    return omega_side * omega_side * omega_side;
  }

  // True when Im(n0^2) >= 0, the physical passivity requirement on the
  // background medium. Violations stay constructible; callers decide.
  bool background_passive() const;

  // Throws std::invalid_argument on k <= 0, non-unit alpha (1e-12),
  // kappa outside [0, 1), or omega_side <= 0.
  void validate() const;
};

// Output of the material design recipe: the potential p, the impedance
// factor h, the particle number density N, and the surface-area shape
// constant c (|S| = c a^2, c = 4*pi for spheres).
struct MaterialRecipe {
  Complex potential{};       // p = k^2 (n0^2 - n^2)
  Complex impedance{};       // h = p / (4 pi N)
  double density = 0.0;      // N, particles per unit volume scale
  double shape_constant = four_pi;
  // Set when Im(h) > 0, which breaks the solvability requirement
  // Im(h) <= 0. The recipe still evaluates; consumers must check.
  bool impedance_sign_warning = false;

  // Per-evaluation-point accessors. The uniform medium stores constants,
  // but consumers go through these so spatially varying media stay a
  // drop-in extension.
  Complex potential_at(const Vec3&) const { return potential; }
  Complex impedance_at(const Vec3&) const { return impedance; }
  double density_at(const Vec3&) const { return density; }
};

// p = k^2 (n0^2 - n_desired^2).
Complex compute_potential(const PhysicalConfig& config);

// h = p / (4 pi N), computed componentwise on Re/Im. Throws on N <= 0.
Complex impedance_function(Complex potential, double density);

// Uniform density N = M a^(2-kappa) / volume. Throws on M = 0, a <= 0,
// kappa outside [0, 1), or volume <= 0.
double uniform_density(std::size_t particle_count, double radius,
                       double kappa, double volume);

// Boundary impedance of one particle of radius a: zeta = h / a^kappa.
// Throws on a <= 0.
Complex particle_impedance(Complex impedance, double radius, double kappa);

// Full recipe for a uniform medium: p from the config, h = p / (4 pi N),
// with the Im(h) > 0 warning flag filled in.
MaterialRecipe design_material(const PhysicalConfig& config, double density);

}  // namespace smallscat
