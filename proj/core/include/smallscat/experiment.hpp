#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "smallscat/compare.hpp"
#include "smallscat/model.hpp"
#include "smallscat/solver.hpp"

namespace smallscat {

// One experiment: a particle count and radius, a sweep over lattice
// spacings, and the two comparison grids.
struct ExperimentConfig {
  PhysicalConfig physical;
  std::size_t particle_count = 0;   // M
  double radius = 0.0;              // a, cm
  std::vector<double> d_values;     // lattice spacings to sweep, cm
  std::size_t p_per_side = 5;       // coarse comparison grid
  std::size_t c_per_side = 20;      // collocation grid
  SolveSettings solver;
  std::string output_dir = "out";
  bool write_geometry = false;      // dump point files next to the CSVs
  bool write_detail = false;        // dump per-cell difference files

  // Enforces a > 0, a < min(d), nonempty d list with positive entries,
  // and the grid ordering P^3 <= C^3 <= M. Also validates the physical
  // block and solver settings.
  void validate() const;
};

// "re+imi" complex literals, e.g. "-1+0.001i"; plain reals also accepted.
Complex parse_complex(const std::string& text);
std::string format_complex(Complex value);

// Scientific notation with six digits after the point and a minimal
// exponent, e.g. 0.02 -> "2.000000e-2".
std::string format_sci(double value);

// Flat "key = value" config file; '#' starts a comment. Unknown keys are
// errors. Defaults are materialized so the result round-trips.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);
std::string format_config(const ExperimentConfig& config);

struct SweepRow {
  double d = 0.0;
  double a_over_d = 0.0;
  double e_ori_red = 0.0;
  double e_ie_ori = 0.0;
  double e_ie_red = 0.0;
  double error_sum = 0.0;
  std::size_t ori_iters = 0;
  std::size_t red_iters = 0;
  std::size_t ie_iters = 0;
  bool overflow = false;
  bool converged = false;
};

struct SweepResult {
  ExperimentConfig config;
  MaterialRecipe recipe;
  std::vector<SweepRow> rows;
  std::vector<ComparisonReport> reports;  // one per row, aligned
};

// Runs the sweep: the cell and collocation systems are solved once (they
// do not depend on d) and reused; the particle system is rebuilt and
// solved per spacing. Non-converged solves mark their row instead of
// aborting. Progress and solver diagnostics go to `log` when non-null.
SweepResult run_sweep(const ExperimentConfig& config,
                      std::ostream* log = nullptr);

// Row with the smallest error sum among converged rows; ties resolve to
// the larger spacing. Throws when no row converged.
const SweepRow& best_row(const std::vector<SweepRow>& rows);

// Writes sweep.csv, sweep.dat (plot blocks), best.csv, and the resolved
// config echo into the directory, creating it if needed.
void emit_outputs(const SweepResult& result,
                  const std::filesystem::path& dir);

// Header and row codecs for sweep.csv; parsing accepts exactly what
// emit_outputs writes.
extern const char* const sweep_csv_header;
std::string format_sweep_row(const SweepRow& row);
std::vector<SweepRow> parse_sweep_csv(std::istream& in);
std::vector<SweepRow> load_sweep_csv(const std::filesystem::path& path);

}  // namespace smallscat
