#include "smallscat/experiment.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace smallscat {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double parse_double(const std::string& text) {
  const std::string t = trim(text);
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size() || t.empty())
    throw std::invalid_argument("malformed number: '" + text + "'");
  return v;
}

std::size_t parse_size(const std::string& text) {
  const double v = parse_double(text);
  if (v < 0.0 || v != std::floor(v))
    throw std::invalid_argument("expected a non-negative integer: '" + text +
                                "'");
  return static_cast<std::size_t>(v);
}

std::vector<double> parse_double_list(const std::string& text) {
  std::string t = text;
  std::replace(t.begin(), t.end(), ',', ' ');
  std::istringstream in(t);
  std::vector<double> values;
  std::string tok;
  while (in >> tok) values.push_back(parse_double(tok));
  return values;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

Complex parse_complex(const std::string& text) {
  const std::string t = trim(text);
  if (t.empty()) throw std::invalid_argument("empty complex literal");
  if (t.back() != 'i' && t.back() != 'I') return {parse_double(t), 0.0};

  const std::string body = t.substr(0, t.size() - 1);
  // Split before the sign of the imaginary part, skipping exponent signs
  // and the leading sign of the real part.
  std::size_t split = std::string::npos;
  for (std::size_t i = 1; i < body.size(); ++i) {
    const char c = body[i];
    if ((c == '+' || c == '-') &&
        body[i - 1] != 'e' && body[i - 1] != 'E')
      split = i;
  }
  if (split == std::string::npos) {
    if (body.empty() || body == "+" || body == "-")
      return {0.0, body == "-" ? -1.0 : 1.0};
    return {0.0, parse_double(body)};
  }
  const double re = parse_double(body.substr(0, split));
  const std::string im_text = body.substr(split);
  if (im_text == "+" || im_text == "-")
    return {re, im_text == "-" ? -1.0 : 1.0};
  return {re, parse_double(im_text)};
}

std::string format_complex(Complex value) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.17g%+.17gi", value.real(), value.imag());
  return buf;
}

std::string format_sci(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6e", value);
  std::string s = buf;
  const std::size_t e = s.find('e');
  std::size_t digits = e + 2;  // first exponent digit (after the sign)
  std::size_t nonzero = digits;
  while (nonzero + 1 < s.size() && s[nonzero] == '0') ++nonzero;
  return s.substr(0, digits) + s.substr(nonzero);
}

void ExperimentConfig::validate() const {
  physical.validate();
  solver.validate();
  if (particle_count == 0)
    throw std::invalid_argument("particle count M must be > 0");
  if (!(radius > 0.0)) throw std::invalid_argument("radius a must be > 0");
  if (d_values.empty())
    throw std::invalid_argument("at least one spacing d is required");
  for (const double d : d_values) {
    if (!(d > 0.0)) throw std::invalid_argument("spacings must be > 0");
    if (!(radius < d))
      throw std::invalid_argument("radius a must be < every spacing d");
  }
  if (p_per_side == 0 || c_per_side == 0)
    throw std::invalid_argument("grid sizes must be > 0");
  if (p_per_side > c_per_side)
    throw std::invalid_argument(
        "coarse grid must not be finer than the collocation grid");
  const std::size_t c3 = c_per_side * c_per_side * c_per_side;
  if (c3 > particle_count)
    throw std::invalid_argument(
        "collocation grid has more cells than particles (need C^3 <= M)");
  if (output_dir.empty())
    throw std::invalid_argument("output_dir must not be empty");
}

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig config;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("expected 'key = value', got: " + line);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!seen.insert(key).second)
      throw std::invalid_argument("duplicate config key: " + key);

    if (key == "k") {
      config.physical.k = parse_double(value);
    } else if (key == "alpha") {
      const auto v = parse_double_list(value);
      if (v.size() != 3)
        throw std::invalid_argument("alpha needs three components");
      config.physical.alpha = {v[0], v[1], v[2]};
    } else if (key == "kappa") {
      config.physical.kappa = parse_double(value);
    } else if (key == "omega_side") {
      config.physical.omega_side = parse_double(value);
    } else if (key == "n0") {
      config.physical.n0 = parse_complex(value);
    } else if (key == "n_desired") {
      config.physical.n_desired = parse_complex(value);
    } else if (key == "M") {
      config.particle_count = parse_size(value);
    } else if (key == "a") {
      config.radius = parse_double(value);
    } else if (key == "d_values") {
      config.d_values = parse_double_list(value);
    } else if (key == "P_per_side") {
      config.p_per_side = parse_size(value);
    } else if (key == "C_per_side") {
      config.c_per_side = parse_size(value);
    } else if (key == "relative_tolerance") {
      config.solver.relative_tolerance = parse_double(value);
    } else if (key == "restart_length") {
      config.solver.restart_length = parse_size(value);
    } else if (key == "max_iterations") {
      config.solver.max_iterations = parse_size(value);
    } else if (key == "output_dir") {
      config.output_dir = value;
    } else if (key == "write_geometry") {
      config.write_geometry = parse_size(value) != 0;
    } else if (key == "write_detail") {
      config.write_detail = parse_size(value) != 0;
    } else {
      throw std::invalid_argument("unknown config key: " + key);
    }
  }

  for (const char* required :
       {"k", "kappa", "n0", "n_desired", "M", "a", "d_values"}) {
    if (!seen.count(required))
      throw std::invalid_argument(std::string("missing config key: ") +
                                  required);
  }
  config.validate();
  return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config_text(text.str());
}

std::string format_config(const ExperimentConfig& config) {
  std::ostringstream out;
  out << "k = " << format_double(config.physical.k) << "\n";
  out << "alpha = " << format_double(config.physical.alpha.x) << " "
      << format_double(config.physical.alpha.y) << " "
      << format_double(config.physical.alpha.z) << "\n";
  out << "kappa = " << format_double(config.physical.kappa) << "\n";
  out << "omega_side = " << format_double(config.physical.omega_side) << "\n";
  out << "n0 = " << format_complex(config.physical.n0) << "\n";
  out << "n_desired = " << format_complex(config.physical.n_desired) << "\n";
  out << "M = " << config.particle_count << "\n";
  out << "a = " << format_double(config.radius) << "\n";
  out << "d_values =";
  for (const double d : config.d_values) out << " " << format_double(d);
  out << "\n";
  out << "P_per_side = " << config.p_per_side << "\n";
  out << "C_per_side = " << config.c_per_side << "\n";
  out << "relative_tolerance = "
      << format_double(config.solver.relative_tolerance) << "\n";
  out << "restart_length = " << config.solver.restart_length << "\n";
  out << "max_iterations = " << config.solver.max_iterations << "\n";
  out << "output_dir = " << config.output_dir << "\n";
  out << "write_geometry = " << (config.write_geometry ? 1 : 0) << "\n";
  out << "write_detail = " << (config.write_detail ? 1 : 0) << "\n";
  return out.str();
}

SweepResult run_sweep(const ExperimentConfig& config, std::ostream* log) {
  config.validate();
  const PhysicalConfig& phys = config.physical;
  const CubeDomain domain{phys.omega_side};

  SweepResult result;
  result.config = config;

  const double density = uniform_density(config.particle_count, config.radius,
                                         phys.kappa, phys.omega_volume());
  result.recipe = design_material(phys, density);
  const MaterialRecipe& recipe = result.recipe;
  if (log) {
    *log << "recipe: p=" << format_complex(recipe.potential)
         << " h=" << format_complex(recipe.impedance)
         << " N=" << format_double(recipe.density) << "\n";
    if (recipe.impedance_sign_warning)
      *log << "warning: Im(h) > 0 violates the solvability requirement; "
              "results are formal\n";
    if (!phys.background_passive())
      *log << "warning: Im(n0^2) < 0, background medium is not passive\n";
  }

  const auto impedance_at = [&recipe](const Vec3& p) {
    return recipe.impedance_at(p);
  };
  const auto density_at = [&recipe](const Vec3& p) {
    return recipe.density_at(p);
  };
  const auto potential_at = [&recipe](const Vec3& p) {
    return recipe.potential_at(p);
  };

  const GridPartition red_grid = partition_cube(domain, config.p_per_side);
  const GridPartition ie_grid = partition_cube(domain, config.c_per_side);

  const SystemOperator red_op =
      make_red_operator(red_grid, phys, impedance_at, density_at);
  const SystemOperator ie_op = make_ie_operator(ie_grid, phys, potential_at);

  const SolveReport red_report =
      gmres_solve(red_op, incident_rhs(red_op, phys), config.solver);
  const SolveReport ie_report =
      gmres_solve(ie_op, incident_rhs(ie_op, phys), config.solver);
  if (log) {
    *log << "cell system: nodes=" << red_op.size()
         << " iters=" << red_report.iterations
         << " resid=" << format_sci(red_report.final_relative_residual)
         << " converged=" << red_report.converged << "\n";
    *log << "collocation system: nodes=" << ie_op.size()
         << " iters=" << ie_report.iterations
         << " resid=" << format_sci(ie_report.final_relative_residual)
         << " converged=" << ie_report.converged << "\n";
  }

  for (const double d : config.d_values) {
    const ParticleCloud cloud = place_uniform_lattice(
        config.particle_count, d, domain, config.radius);
    const SystemOperator ori_op = make_ori_operator(cloud, phys, impedance_at);
    const SolveReport ori_report =
        gmres_solve(ori_op, incident_rhs(ori_op, phys), config.solver);

    const ComparisonReport cmp = compare_all(
        ori_report.solution, red_report.solution, ie_report.solution, cloud,
        red_grid, ie_grid, config.write_detail);

    SweepRow row;
    row.d = d;
    row.a_over_d = config.radius / d;
    row.e_ori_red = cmp.e_ori_red;
    row.e_ie_ori = cmp.e_ie_ori;
    row.e_ie_red = cmp.e_ie_red;
    row.error_sum = cmp.error_sum;
    row.ori_iters = ori_report.iterations;
    row.red_iters = red_report.iterations;
    row.ie_iters = ie_report.iterations;
    row.overflow = cloud.overflow;
    row.converged = ori_report.converged && red_report.converged &&
                    ie_report.converged;
    result.rows.push_back(row);
    result.reports.push_back(cmp);

    if (log) {
      *log << "d=" << format_sci(d) << ": particle system iters="
           << ori_report.iterations
           << " resid=" << format_sci(ori_report.final_relative_residual)
           << (row.overflow ? " overflow" : "") << " error_sum="
           << format_sci(row.error_sum) << "\n";
    }
  }
  return result;
}

const SweepRow& best_row(const std::vector<SweepRow>& rows) {
  const SweepRow* best = nullptr;
  for (const SweepRow& row : rows) {
    if (!row.converged) continue;
    if (!best || row.error_sum < best->error_sum ||
        (row.error_sum == best->error_sum && row.d > best->d))
      best = &row;
  }
  if (!best) throw std::runtime_error("no converged sweep row");
  return *best;
}

const char* const sweep_csv_header =
    "d,a_over_d,e_ori_red,e_ie_ori,e_ie_red,error_sum,ori_iters,red_iters,"
    "ie_iters,overflow,converged";

std::string format_sweep_row(const SweepRow& row) {
  std::ostringstream out;
  out << format_sci(row.d) << ',' << format_sci(row.a_over_d) << ','
      << format_sci(row.e_ori_red) << ',' << format_sci(row.e_ie_ori) << ','
      << format_sci(row.e_ie_red) << ',' << format_sci(row.error_sum) << ','
      << row.ori_iters << ',' << row.red_iters << ',' << row.ie_iters << ','
      << (row.overflow ? 1 : 0) << ',' << (row.converged ? 1 : 0);
  return out.str();
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  return fields;
}

}  // namespace

std::vector<SweepRow> parse_sweep_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("empty sweep table");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != sweep_csv_header)
    throw std::runtime_error("unexpected sweep table header: " + line);

  std::vector<SweepRow> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const auto fields = split_csv(line);
    if (fields.size() != 11)
      throw std::runtime_error("malformed sweep row: " + line);
    SweepRow row;
    row.d = parse_double(fields[0]);
    row.a_over_d = parse_double(fields[1]);
    row.e_ori_red = parse_double(fields[2]);
    row.e_ie_ori = parse_double(fields[3]);
    row.e_ie_red = parse_double(fields[4]);
    row.error_sum = parse_double(fields[5]);
    row.ori_iters = parse_size(fields[6]);
    row.red_iters = parse_size(fields[7]);
    row.ie_iters = parse_size(fields[8]);
    row.overflow = parse_size(fields[9]) != 0;
    row.converged = parse_size(fields[10]) != 0;
    rows.push_back(row);
  }
  return rows;
}

std::vector<SweepRow> load_sweep_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open sweep table: " + path.string());
  return parse_sweep_csv(in);
}

void emit_outputs(const SweepResult& result,
                  const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  const auto open = [&dir](const std::string& name) {
    std::ofstream out(dir / name);
    if (!out)
      throw std::runtime_error("cannot write output file: " +
                               (dir / name).string());
    return out;
  };

  {
    auto out = open("sweep.csv");
    out << sweep_csv_header << "\n";
    for (const SweepRow& row : result.rows)
      out << format_sweep_row(row) << "\n";
  }

  {
    auto out = open("sweep.dat");
    const struct {
      const char* name;
      double SweepRow::*field;
    } series[] = {{"ori_vs_red", &SweepRow::e_ori_red},
                  {"ie_vs_ori", &SweepRow::e_ie_ori},
                  {"ie_vs_red", &SweepRow::e_ie_red}};
    for (std::size_t s = 0; s < 3; ++s) {
      if (s) out << "\n\n";
      out << "# " << series[s].name << "\n";
      for (const SweepRow& row : result.rows)
        out << format_sci(row.d) << " " << format_sci(row.*series[s].field)
            << "\n";
    }
  }

  const SweepRow* best = nullptr;
  try {
    best = &best_row(result.rows);
  } catch (const std::runtime_error&) {
    // Without a converged row there is no best table to write.
  }
  if (best) {
    auto out = open("best.csv");
    out << "M,a,d,a_over_d,e_ori_red,e_ie_ori,e_ie_red,error_sum\n";
    out << result.config.particle_count << ','
        << format_sci(result.config.radius) << ',' << format_sci(best->d)
        << ',' << format_sci(best->a_over_d) << ','
        << format_sci(best->e_ori_red) << ',' << format_sci(best->e_ie_ori)
        << ',' << format_sci(best->e_ie_red) << ','
        << format_sci(best->error_sum) << "\n";
  }

  {
    auto out = open("config_resolved.txt");
    out << format_config(result.config);
  }

  if (result.config.write_geometry) {
    const CubeDomain domain{result.config.physical.omega_side};
    {
      auto out = open("grid_p_centers.txt");
      write_points(out,
                   *partition_cube(domain, result.config.p_per_side).centers);
    }
    {
      auto out = open("grid_c_centers.txt");
      write_points(out,
                   *partition_cube(domain, result.config.c_per_side).centers);
    }
    for (std::size_t i = 0; i < result.config.d_values.size(); ++i) {
      const ParticleCloud cloud = place_uniform_lattice(
          result.config.particle_count, result.config.d_values[i], domain,
          result.config.radius);
      auto out = open("particles_" + std::to_string(i) + ".txt");
      write_points(out, *cloud.centers);
    }
  }

  if (result.config.write_detail) {
    for (std::size_t i = 0; i < result.reports.size(); ++i) {
      const auto& detail = result.reports[i].ori_red_detail;
      if (!detail) continue;
      const double scale = result.reports[i].red_max_magnitude;
      auto out = open("detail_" + std::to_string(i) + ".csv");
      out << "cell,count,mean_abs_diff,mean_abs_diff_normalized\n";
      for (const CellDetail& cell : *detail)
        out << cell.cell << ',' << cell.count << ','
            << format_sci(cell.mean_abs_diff) << ','
            << format_sci(scale > 0.0 ? cell.mean_abs_diff / scale : 0.0)
            << "\n";
    }
  }
}

}  // namespace smallscat
