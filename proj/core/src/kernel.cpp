#include "smallscat/kernel.hpp"

#include <cmath>
#include <stdexcept>

#include "smallscat/parallel.hpp"

namespace smallscat {

Complex green_free(double k, const Vec3& x, const Vec3& t) {
  const double dx = x.x - t.x;
  const double dy = x.y - t.y;
  const double dz = x.z - t.z;
  const double r = std::sqrt(dx * dx + dy * dy + dz * dz);
  if (r == 0.0)
    throw std::invalid_argument("kernel is singular at coincident points");
  const double kr = k * r;
  const double scale = 1.0 / (four_pi * r);
  return {std::cos(kr) * scale, std::sin(kr) * scale};
}

Complex incident_field(const PhysicalConfig& config, const Vec3& x) {
  const double phase = config.k * dot(config.alpha, x);
  return {std::cos(phase), std::sin(phase)};
}

namespace {

SystemOperator make_operator(SystemKind kind, double k,
                             std::shared_ptr<const std::vector<Vec3>> nodes,
                             const PointComplexFn& coupling_at) {
  SystemOperator op;
  op.kind = kind;
  op.k = k;
  op.nodes = std::move(nodes);
  op.couplings.reserve(op.nodes->size());
  for (const Vec3& p : *op.nodes) op.couplings.push_back(coupling_at(p));
  return op;
}

}  // namespace

SystemOperator make_ori_operator(const ParticleCloud& cloud,
                                 const PhysicalConfig& config,
                                 const PointComplexFn& impedance) {
  if (cloud.size() == 0) throw std::invalid_argument("empty particle cloud");
  if (!(cloud.radius_a > 0.0))
    throw std::invalid_argument("cloud has no particle radius set");
  const double geom = four_pi * std::pow(cloud.radius_a, 2.0 - config.kappa);
  return make_operator(SystemKind::ori, config.k, cloud.centers,
                       [&](const Vec3& p) { return geom * impedance(p); });
}

SystemOperator make_red_operator(const GridPartition& grid,
                                 const PhysicalConfig& config,
                                 const PointComplexFn& impedance,
                                 const PointRealFn& density) {
  if (grid.total_cells() == 0) throw std::invalid_argument("empty partition");
  const double vol = grid.cell_volume();
  return make_operator(SystemKind::red, config.k, grid.centers,
                       [&](const Vec3& p) {
                         return four_pi * impedance(p) * density(p) * vol;
                       });
}

SystemOperator make_ie_operator(const GridPartition& grid,
                                const PhysicalConfig& config,
                                const PointComplexFn& potential) {
  if (grid.total_cells() == 0) throw std::invalid_argument("empty partition");
  const double vol = grid.cell_volume();
  return make_operator(SystemKind::ie, config.k, grid.centers,
                       [&](const Vec3& p) { return potential(p) * vol; });
}

FieldVector incident_rhs(const SystemOperator& op,
                         const PhysicalConfig& config) {
  FieldVector rhs;
  rhs.kind = op.kind;
  rhs.nodes = op.nodes;
  rhs.values.reserve(op.size());
  for (const Vec3& p : *op.nodes)
    rhs.values.push_back(incident_field(config, p));
  return rhs;
}

void apply_operator_rows(const SystemOperator& op,
                         const std::vector<Complex>& in,
                         std::vector<Complex>& out, std::size_t row_begin,
                         std::size_t row_end) {
  const std::vector<Vec3>& nodes = *op.nodes;
  const std::size_t n = nodes.size();
  // Weighted sources coupling_m * v_m; shared across rows.
  static thread_local std::vector<Complex> weighted;
  weighted.resize(n);
  for (std::size_t m = 0; m < n; ++m) weighted[m] = op.couplings[m] * in[m];

  const double k = op.k;
  for (std::size_t j = row_begin; j < row_end; ++j) {
    const Vec3 xj = nodes[j];
    double acc_re = 0.0;
    double acc_im = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
      if (m == j) continue;
      const double dx = xj.x - nodes[m].x;
      const double dy = xj.y - nodes[m].y;
      const double dz = xj.z - nodes[m].z;
      const double r = std::sqrt(dx * dx + dy * dy + dz * dz);
      const double kr = k * r;
      const double cs = std::cos(kr);
      const double sn = std::sin(kr);
      const double inv = 1.0 / (four_pi * r);
      const double w_re = weighted[m].real();
      const double w_im = weighted[m].imag();
      acc_re += inv * (cs * w_re - sn * w_im);
      acc_im += inv * (cs * w_im + sn * w_re);
    }
    out[j] = Complex{in[j].real() + acc_re, in[j].imag() + acc_im};
  }
}

FieldVector apply_operator(const SystemOperator& op, const FieldVector& v) {
  const std::size_t n = op.size();
  if (v.values.size() != n)
    throw std::invalid_argument("vector length does not match operator size");

  FieldVector w;
  w.kind = op.kind;
  w.nodes = op.nodes;
  w.values.resize(n);
  parallel_for_blocks(0, n, [&](std::size_t lo, std::size_t hi) {
    apply_operator_rows(op, v.values, w.values, lo, hi);
  });
  return w;
}

Complex single_particle_solution(const PhysicalConfig& config, Complex zeta,
                                 double radius, const Vec3& x1, const Vec3& x,
                                 double shape_constant) {
  if (!(radius > 0.0)) throw std::invalid_argument("radius must be > 0");
  if (!(shape_constant > 0.0))
    throw std::invalid_argument("shape constant must be > 0");
  if (distance(x, x1) < 10.0 * radius)
    throw std::invalid_argument(
        "evaluation point too close to the particle for the asymptotic");
  const Complex charge =
      -zeta * shape_constant * radius * radius * incident_field(config, x1);
  return incident_field(config, x) + green_free(config.k, x, x1) * charge;
}

}  // namespace smallscat
