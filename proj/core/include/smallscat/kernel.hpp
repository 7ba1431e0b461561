#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

#include "smallscat/geometry.hpp"
#include "smallscat/model.hpp"
#include "smallscat/types.hpp"

namespace smallscat {

// Free-space outgoing kernel exp(ik|x-t|) / (4 pi |x-t|).
// Throws std::invalid_argument on coincident points.
Complex green_free(double k, const Vec3& x, const Vec3& t);

// Incident plane wave exp(i k alpha.x).
Complex incident_field(const PhysicalConfig& config, const Vec3& x);

enum class SystemKind { ori, red, ie };

// Which linear system a vector of nodal values belongs to, plus a shared
// reference to the node positions that generated it.
struct FieldVector {
  SystemKind kind = SystemKind::ori;
  std::shared_ptr<const std::vector<Vec3>> nodes;
  std::vector<Complex> values;

  std::size_t size() const { return values.size(); }
};

// Matrix-free representation of (I + K): node positions plus one coupling
// value per source node. Application computes
//   w_j = v_j + sum_{m != j} G(x_j, x_m) coupling_m v_m,
// i.e. the self term is always excluded and the sign of the physical
// "minus coupling" convention is folded into the coupling values.
struct SystemOperator {
  SystemKind kind = SystemKind::ori;
  double k = 0.0;
  std::shared_ptr<const std::vector<Vec3>> nodes;
  std::vector<Complex> couplings;

  std::size_t size() const { return nodes ? nodes->size() : 0; }
};

using PointComplexFn = std::function<Complex(const Vec3&)>;
using PointRealFn = std::function<double(const Vec3&)>;

// Particle system: coupling_m = 4 pi h(x_m) a^(2-kappa).
SystemOperator make_ori_operator(const ParticleCloud& cloud,
                                 const PhysicalConfig& config,
                                 const PointComplexFn& impedance);

// Cell-lumped system: coupling_p = 4 pi h(y_p) N(y_p) |cell|.
SystemOperator make_red_operator(const GridPartition& grid,
                                 const PhysicalConfig& config,
                                 const PointComplexFn& impedance,
                                 const PointRealFn& density);

// Collocated integral equation: coupling_c = p(y_c) |cell|. The self cell
// is excluded by the operator convention, so on equal grids this system
// coincides with make_red_operator when p = 4 pi h N.
SystemOperator make_ie_operator(const GridPartition& grid,
                                const PhysicalConfig& config,
                                const PointComplexFn& potential);

// Incident wave sampled at the operator's nodes; the right-hand side of
// every system here.
FieldVector incident_rhs(const SystemOperator& op,
                         const PhysicalConfig& config);

// w = (I + K) v. Parallel over output rows; each row accumulates source
// terms in ascending node order, so results are bitwise reproducible for
// any worker count. Throws on length mismatch.
FieldVector apply_operator(const SystemOperator& op, const FieldVector& v);

// Row-range kernel behind apply_operator; out and in must not alias.
void apply_operator_rows(const SystemOperator& op,
                         const std::vector<Complex>& in,
                         std::vector<Complex>& out, std::size_t row_begin,
                         std::size_t row_end);

// Asymptotic field of one small impedance particle at x1:
//   u(x) = u0(x) + g(x, x1) Q,  Q = -zeta c a^2 u0(x1),
// valid away from the particle. Throws when |x - x1| < 10 a.
Complex single_particle_solution(const PhysicalConfig& config, Complex zeta,
                                 double radius, const Vec3& x1, const Vec3& x,
                                 double shape_constant = four_pi);

}  // namespace smallscat
