#include "smallscat/model.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"

using namespace smallscat;

namespace {

// Reference setting used throughout: weak absorption target in a passive
// unit cube, kappa close to 1.
PhysicalConfig reference_config() {
  PhysicalConfig cfg;
  cfg.k = 0.182651;
  cfg.alpha = {1.0, 0.0, 0.0};
  cfg.kappa = 0.99;
  cfg.omega_side = 1.0;
  cfg.n0 = {1.0, 0.0};
  cfg.n_desired = {-1.0, 0.001};
  return cfg;
}

}  // namespace

TEST_CASE("potential for the reference constants") {
  const PhysicalConfig cfg = reference_config();
  const Complex p = compute_potential(cfg);

  // Independent route: n^2 = (re^2 - im^2, 2 re im) expanded by hand.
  // n0^2 - n^2 = (1 - (1 - 1e-6), 0 - (-0.002)) = (1e-6, 0.002).
  const double k2 = cfg.k * cfg.k;
  CHECK(p.real() == doctest::Approx(k2 * 1e-6).epsilon(1e-13));
  CHECK(p.imag() == doctest::Approx(k2 * 2e-3).epsilon(1e-13));

  // Frozen decimals: 0.182651^2 = 0.033361387801 exactly in decimal.
  CHECK(p.real() == doctest::Approx(3.3361387801e-8).epsilon(1e-12));
  CHECK(p.imag() == doctest::Approx(6.6722775602e-5).epsilon(1e-12));
}

TEST_CASE("potential vanishes when target equals background") {
  PhysicalConfig cfg = reference_config();
  cfg.n_desired = cfg.n0;
  CHECK(compute_potential(cfg) == Complex{0.0, 0.0});
}

TEST_CASE("potential scales quadratically with the wave number") {
  PhysicalConfig cfg = reference_config();
  const Complex p1 = compute_potential(cfg);
  cfg.k *= 2.0;
  const Complex p2 = compute_potential(cfg);
  CHECK(std::abs(p2 - 4.0 * p1) <= 1e-12 * std::abs(p1));
}

TEST_CASE("uniform density at the three reference scales") {
  // N = M a^(2-kappa) / |Omega|; with M = 10^m, a = 10^-m the closed form
  // is 10^(-0.01 m), an independent route to the same number.
  CHECK(uniform_density(10000, 1e-4, 0.99, 1.0) ==
        doctest::Approx(std::pow(10.0, -0.04)).epsilon(1e-12));
  CHECK(uniform_density(100000, 1e-5, 0.99, 1.0) ==
        doctest::Approx(std::pow(10.0, -0.05)).epsilon(1e-12));
  CHECK(uniform_density(1000000, 1e-6, 0.99, 1.0) ==
        doctest::Approx(std::pow(10.0, -0.06)).epsilon(1e-12));

  // Frozen decimals for the first two.
  CHECK(uniform_density(10000, 1e-4, 0.99, 1.0) ==
        doctest::Approx(0.91201083935591).epsilon(1e-12));
  CHECK(uniform_density(100000, 1e-5, 0.99, 1.0) ==
        doctest::Approx(0.89125093813375).epsilon(1e-12));
}

TEST_CASE("uniform density is linear in the particle count") {
  const double n1 = uniform_density(3000, 2e-4, 0.9, 1.0);
  const double n2 = uniform_density(6000, 2e-4, 0.9, 1.0);
  CHECK(n2 == doctest::Approx(2.0 * n1).epsilon(1e-13));
  // And N |Omega| = M a^(2-kappa).
  const double vol = 8.0;
  const double n3 = uniform_density(3000, 2e-4, 0.9, vol);
  CHECK(n3 * vol == doctest::Approx(3000.0 * std::pow(2e-4, 1.1)).epsilon(1e-13));
}

TEST_CASE("impedance recovers the potential: 4 pi N h = p") {
  std::mt19937 rng(20240317);
  std::uniform_real_distribution<double> mag(-1.0, 1.0);
  std::uniform_real_distribution<double> scale(-5.0, 5.0);
  for (int trial = 0; trial < 200; ++trial) {
    const Complex p{mag(rng) * std::pow(10.0, scale(rng)),
                    mag(rng) * std::pow(10.0, scale(rng))};
    const double density = std::pow(10.0, scale(rng) * 0.6);
    const Complex h = impedance_function(p, density);
    CHECK(std::abs(four_pi * density * h - p) <= 1e-12 * std::abs(p));
    // Componentwise definition preserves the sign of each part.
    CHECK(std::signbit(h.real()) == std::signbit(p.real()));
    CHECK(std::signbit(h.imag()) == std::signbit(p.imag()));
  }
}

TEST_CASE("particle impedance undoes the radius scaling") {
  const Complex h{-0.3, -0.001};
  const double a = 1e-4;
  const double kappa = 0.99;
  const Complex zeta = particle_impedance(h, a, kappa);
  CHECK(std::abs(zeta * std::pow(a, kappa) - h) <= 1e-13 * std::abs(h));
  // kappa = 0 means the impedance does not grow as a -> 0.
  CHECK(particle_impedance(h, a, 0.0) == h);
}

TEST_CASE("design recipe at the reference scale") {
  const PhysicalConfig cfg = reference_config();
  const double density = uniform_density(10000, 1e-4, cfg.kappa, 1.0);
  const MaterialRecipe recipe = design_material(cfg, density);

  CHECK(recipe.potential == compute_potential(cfg));
  CHECK(recipe.density == density);
  CHECK(std::abs(four_pi * density * recipe.impedance - recipe.potential) <=
        1e-12 * std::abs(recipe.potential));
  CHECK(recipe.shape_constant == four_pi);

  // This target needs Im(p) > 0, hence Im(h) > 0, which violates the
  // solvability requirement Im(h) <= 0; the recipe must flag it.
  CHECK(recipe.potential.imag() > 0.0);
  CHECK(recipe.impedance.imag() > 0.0);
  CHECK(recipe.impedance_sign_warning);

  // Accessors of the uniform recipe ignore position.
  const Vec3 anywhere{0.3, 0.9, 0.1};
  CHECK(recipe.potential_at(anywhere) == recipe.potential);
  CHECK(recipe.impedance_at(anywhere) == recipe.impedance);
  CHECK(recipe.density_at(anywhere) == recipe.density);
}

TEST_CASE("recipe with admissible sign carries no warning") {
  PhysicalConfig cfg = reference_config();
  // Im(n^2) = 2*1.2*0.001 > 0, so Im(p) = -k^2 Im(n^2) < 0: admissible.
  cfg.n_desired = {1.2, 0.001};
  const MaterialRecipe recipe = design_material(cfg, 0.5);
  CHECK(recipe.potential.imag() < 0.0);
  CHECK(recipe.impedance.imag() < 0.0);
  CHECK(!recipe.impedance_sign_warning);
}

TEST_CASE("background passivity predicate") {
  PhysicalConfig cfg = reference_config();
  CHECK(cfg.background_passive());  // Im(1^2) = 0 counts as passive
  cfg.n0 = {1.0, 0.01};
  CHECK(cfg.background_passive());
  cfg.n0 = {1.0, -0.01};
  CHECK(!cfg.background_passive());
}

TEST_CASE("config validation rejects bad fields") {
  PhysicalConfig good = reference_config();
  CHECK_NOTHROW(good.validate());

  PhysicalConfig cfg = good;
  cfg.k = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = good;
  cfg.k = -1.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = good;
  cfg.alpha = {1.0, 1.0, 0.0};
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = good;
  cfg.alpha = {0.0, 0.0, 0.0};
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = good;
  cfg.kappa = 1.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = good;
  cfg.kappa = -0.1;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = good;
  cfg.omega_side = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);

  // Normalized but rotated directions are fine.
  cfg = good;
  const double s = 1.0 / std::sqrt(3.0);
  cfg.alpha = {s, s, s};
  CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("recipe helpers reject degenerate inputs") {
  CHECK_THROWS_AS(impedance_function({1.0, 0.0}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(impedance_function({1.0, 0.0}, -2.0), std::invalid_argument);
  CHECK_THROWS_AS(uniform_density(0, 1e-4, 0.9, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(uniform_density(100, 0.0, 0.9, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(uniform_density(100, 1e-4, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(uniform_density(100, 1e-4, 0.9, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(particle_impedance({1.0, 0.0}, 0.0, 0.9),
                  std::invalid_argument);
}
