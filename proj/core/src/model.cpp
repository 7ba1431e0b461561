#include "smallscat/model.hpp"

#include <cmath>
#include <stdexcept>

namespace smallscat {

bool PhysicalConfig::background_passive() const {
  return std::imag(n0 * n0) >= 0.0;
}

void PhysicalConfig::validate() const {
  if (!(k > 0.0)) throw std::invalid_argument("wave number k must be > 0");
  if (std::abs(norm(alpha) - 1.0) > 1e-12)
    throw std::invalid_argument("direction alpha must be a unit vector");
  if (!(kappa >= 0.0 && kappa < 1.0))
    throw std::invalid_argument("kappa must lie in [0, 1)");
  if (!(omega_side > 0.0))
    throw std::invalid_argument("omega_side must be > 0");
}

Complex compute_potential(const PhysicalConfig& config) {
  return config.k * config.k *
         (config.n0 * config.n0 - config.n_desired * config.n_desired);
}

Complex impedance_function(Complex potential, double density) {
  if (!(density > 0.0))
    throw std::invalid_argument("density must be > 0");
  const double scale = four_pi * density;
  return {std::real(potential) / scale, std::imag(potential) / scale};
}

double uniform_density(std::size_t particle_count, double radius,
                       double kappa, double volume) {
  if (particle_count == 0)
    throw std::invalid_argument("particle count must be > 0");
  if (!(radius > 0.0)) throw std::invalid_argument("radius must be > 0");
  if (!(kappa >= 0.0 && kappa < 1.0))
    throw std::invalid_argument("kappa must lie in [0, 1)");
  if (!(volume > 0.0)) throw std::invalid_argument("volume must be > 0");
  return static_cast<double>(particle_count) *
         std::pow(radius, 2.0 - kappa) / volume;
}

Complex particle_impedance(Complex impedance, double radius, double kappa) {
  if (!(radius > 0.0)) throw std::invalid_argument("radius must be > 0");
  if (!(kappa >= 0.0 && kappa < 1.0))
    throw std::invalid_argument("kappa must lie in [0, 1)");
  const double scale = std::pow(radius, kappa);
  return {std::real(impedance) / scale, std::imag(impedance) / scale};
}

MaterialRecipe design_material(const PhysicalConfig& config, double density) {
  config.validate();
  MaterialRecipe recipe;
  recipe.potential = compute_potential(config);
  recipe.impedance = impedance_function(recipe.potential, density);
  recipe.density = density;
  recipe.shape_constant = four_pi;
  recipe.impedance_sign_warning = std::imag(recipe.impedance) > 0.0;
  return recipe;
}

}  // namespace smallscat
