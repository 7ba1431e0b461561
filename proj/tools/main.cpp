#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "smallscat/experiment.hpp"
#include "smallscat/parallel.hpp"

namespace {

using namespace smallscat;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int run_command(const std::string& config_path, bool quiet) {
  const ExperimentConfig config = load_config(config_path);
  const SweepResult result = run_sweep(config, quiet ? nullptr : &std::cerr);
  emit_outputs(result, config.output_dir);

  bool all_converged = true;
  for (const SweepRow& row : result.rows) all_converged &= row.converged;

  std::cout << sweep_csv_header << "\n";
  for (const SweepRow& row : result.rows)
    std::cout << format_sweep_row(row) << "\n";
  try {
    const SweepRow& best = best_row(result.rows);
    std::cout << "best: d=" << format_sci(best.d)
              << " a/d=" << format_sci(best.a_over_d)
              << " error_sum=" << format_sci(best.error_sum) << "\n";
  } catch (const std::runtime_error&) {
    std::cout << "best: none (no converged row)\n";
  }
  std::cout << "outputs written to " << config.output_dir << "\n";
  return all_converged ? 0 : 2;
}

int best_command(const std::vector<std::string>& sweep_paths,
                 const std::string& out_path) {
  std::ostringstream table;
  table << "M,a,d,a_over_d,e_ori_red,e_ie_ori,e_ie_red,error_sum\n";
  for (const std::string& path : sweep_paths) {
    const auto rows = load_sweep_csv(path);
    const SweepRow& best = best_row(rows);

    // The resolved config written next to a sweep knows M and a exactly;
    // without it, a is recovered from the row and M stays blank.
    std::string m_text;
    std::string a_text = format_sci(best.d * best.a_over_d);
    const auto sibling =
        std::filesystem::path(path).parent_path() / "config_resolved.txt";
    if (std::filesystem::exists(sibling)) {
      const ExperimentConfig config = load_config(sibling);
      m_text = std::to_string(config.particle_count);
      a_text = format_sci(config.radius);
    }
    table << m_text << ',' << a_text << ',' << format_sci(best.d) << ','
          << format_sci(best.a_over_d) << ',' << format_sci(best.e_ori_red)
          << ',' << format_sci(best.e_ie_ori) << ','
          << format_sci(best.e_ie_red) << ',' << format_sci(best.error_sum)
          << "\n";
  }
  if (out_path.empty()) {
    std::cout << table.str();
  } else {
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    out << table.str();
  }
  return 0;
}

int check_command(const std::string& config_path) {
  const ExperimentConfig config = load_config(config_path);
  std::cout << format_config(config);

  const PhysicalConfig& phys = config.physical;
  const double density = uniform_density(config.particle_count, config.radius,
                                         phys.kappa, phys.omega_volume());
  const MaterialRecipe recipe = design_material(phys, density);
  std::cout << "derived: p = " << format_complex(recipe.potential) << "\n";
  std::cout << "derived: h = " << format_complex(recipe.impedance) << "\n";
  std::cout << "derived: N = " << format_double(recipe.density) << "\n";
  std::cout << "derived: zeta = "
            << format_complex(particle_impedance(recipe.impedance,
                                                 config.radius, phys.kappa))
            << "\n";
  if (recipe.impedance_sign_warning)
    std::cout << "warning: Im(h) > 0 violates the solvability requirement\n";
  if (!phys.background_passive())
    std::cout << "warning: Im(n0^2) < 0, background medium is not passive\n";

  // The small-particle regime wants a ~ d^(3/(2-kappa)) up to an O(1)
  // factor, i.e. d / a^((2-kappa)/3) of order one.
  const double exponent = (2.0 - phys.kappa) / 3.0;
  const double scale = std::pow(config.radius, exponent);
  for (const double d : config.d_values) {
    std::cout << "d=" << format_sci(d) << ": a/d=" << format_sci(
        config.radius / d)
              << " regime_ratio=" << format_sci(d / scale);
    const ParticleCloud cloud = place_uniform_lattice(
        config.particle_count, d, CubeDomain{phys.omega_side}, config.radius);
    if (cloud.overflow) std::cout << " (lattice block overflows the domain)";
    std::cout << "\n";
  }
  std::cout << "workers = " << worker_count() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Solves plane-wave scattering by many small impedance particles: the "
      "per-particle system, its cell-lumped reduction, and the limiting "
      "integral equation, then compares their solutions across lattice "
      "spacings."};
  app.require_subcommand(1);

  std::size_t threads = 0;
  app.add_option("--threads", threads,
                 "Worker threads (default: SMALLSCAT_THREADS or hardware)");

  std::string config_path;
  bool quiet = false;
  CLI::App* run = app.add_subcommand("run", "Run the spacing sweep from a "
                                            "config file and write CSVs");
  run->add_option("config", config_path, "Path to a key = value config")
      ->required();
  run->add_flag("--quiet", quiet, "Suppress progress logging");

  std::vector<std::string> sweep_paths;
  std::string best_out;
  CLI::App* best = app.add_subcommand(
      "best", "Extract the smallest-error row from sweep tables");
  best->add_option("sweeps", sweep_paths, "sweep.csv files")->required();
  best->add_option("-o,--output", best_out, "Write the table here instead of "
                                            "stdout");

  std::string check_path;
  CLI::App* check = app.add_subcommand(
      "check", "Validate a config and print derived quantities");
  check->add_option("config", check_path, "Path to a key = value config")
      ->required();

  CLI11_PARSE(app, argc, argv);
  if (threads > 0) smallscat::set_worker_count(threads);

  try {
    if (run->parsed()) return run_command(config_path, quiet);
    if (best->parsed()) return best_command(sweep_paths, best_out);
    if (check->parsed()) return check_command(check_path);
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return 1;
}
