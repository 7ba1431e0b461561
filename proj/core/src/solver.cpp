#include "smallscat/solver.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <vector>

namespace smallscat {

namespace {

double norm2(const std::vector<Complex>& v) {
  double acc = 0.0;
  for (const Complex& c : v) acc += std::norm(c);
  return std::sqrt(acc);
}

Complex dot_conj(const std::vector<Complex>& a,
                 const std::vector<Complex>& b) {
  Complex acc{0.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

bool all_finite(const std::vector<Complex>& v) {
  for (const Complex& c : v)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
  return true;
}

}  // namespace

void SolveSettings::validate() const {
  if (!(relative_tolerance > 0.0))
    throw std::invalid_argument("relative_tolerance must be > 0");
  if (restart_length == 0)
    throw std::invalid_argument("restart_length must be > 0");
  if (max_iterations == 0)
    throw std::invalid_argument("max_iterations must be > 0");
}

SolveReport gmres_solve(const SystemOperator& op, const FieldVector& rhs,
                        const SolveSettings& settings) {
  settings.validate();
  const std::size_t n = op.size();
  if (rhs.values.size() != n)
    throw std::invalid_argument("rhs length does not match operator size");
  const double beta0 = norm2(rhs.values);
  if (beta0 == 0.0)
    throw std::invalid_argument("zero right-hand side");

  const std::size_t m = settings.restart_length;
  const double tol = settings.relative_tolerance;

  SolveReport report;
  report.solution.kind = op.kind;
  report.solution.nodes = op.nodes;
  std::vector<Complex>& x = report.solution.values;
  x.assign(n, Complex{0.0, 0.0});

  std::vector<std::vector<Complex>> basis;       // Arnoldi vectors
  std::vector<std::vector<Complex>> hess;        // Hessenberg columns
  std::vector<Complex> rot_c(m), rot_s_g(m), g(m + 1);
  std::vector<Complex> w(n);
  double resid = 1.0;

  while (report.iterations < settings.max_iterations && !report.converged) {
    // Residual of the current iterate; with the zero initial guess the
    // first cycle starts from the right-hand side itself.
    std::vector<Complex> r(n);
    if (report.iterations == 0) {
      r = rhs.values;
    } else {
      FieldVector xv;
      xv.kind = op.kind;
      xv.nodes = op.nodes;
      xv.values = x;
      const FieldVector ax = apply_operator(op, xv);
      for (std::size_t i = 0; i < n; ++i) r[i] = rhs.values[i] - ax.values[i];
    }
    const double beta = norm2(r);
    resid = beta / beta0;
    if (resid <= tol) {
      report.converged = true;
      break;
    }

    basis.clear();
    hess.clear();
    basis.emplace_back(n);
    for (std::size_t i = 0; i < n; ++i) basis[0][i] = r[i] / beta;
    std::fill(g.begin(), g.end(), Complex{0.0, 0.0});
    g[0] = Complex{beta, 0.0};

    std::size_t steps = 0;  // Arnoldi steps completed this cycle
    bool breakdown = false;
    for (std::size_t j = 0; j < m; ++j) {
      FieldVector qj;
      qj.kind = op.kind;
      qj.nodes = op.nodes;
      qj.values = basis[j];
      const FieldVector aq = apply_operator(op, qj);
      w = aq.values;
      ++report.iterations;

      hess.emplace_back(j + 2);
      std::vector<Complex>& h = hess[j];
      for (std::size_t i = 0; i <= j; ++i) {
        h[i] = dot_conj(basis[i], w);
        for (std::size_t t = 0; t < n; ++t) w[t] -= h[i] * basis[i][t];
      }
      const double wnorm = norm2(w);
      h[j + 1] = Complex{wnorm, 0.0};

      // Previous rotations, then a new one that zeroes the subdiagonal.
      for (std::size_t i = 0; i < j; ++i) {
        const Complex top = h[i];
        const Complex bot = h[i + 1];
        h[i] = std::conj(rot_c[i]) * top + rot_s_g[i] * bot;
        h[i + 1] = -rot_s_g[i] * top + rot_c[i] * bot;
      }
      const double denom =
          std::sqrt(std::norm(h[j]) + std::norm(h[j + 1]));
      if (denom == 0.0) {
        breakdown = true;  // column annihilated; cannot continue
        steps = j;
        break;
      }
      rot_c[j] = h[j] / denom;
      rot_s_g[j] = h[j + 1] / denom;  // real-valued by construction
      h[j] = Complex{denom, 0.0};
      h[j + 1] = Complex{0.0, 0.0};
      g[j + 1] = -rot_s_g[j] * g[j];
      g[j] = std::conj(rot_c[j]) * g[j];

      steps = j + 1;
      resid = std::abs(g[j + 1]) / beta0;
      const bool happy = wnorm == 0.0;
      if (resid <= tol || happy ||
          report.iterations >= settings.max_iterations)
        break;
      basis.emplace_back(n);
      for (std::size_t i = 0; i < n; ++i) basis[j + 1][i] = w[i] / wnorm;
    }

    if (steps > 0) {
      // Back substitution on the rotated triangular system.
      std::vector<Complex> y(steps);
      for (std::size_t ii = steps; ii-- > 0;) {
        Complex acc = g[ii];
        for (std::size_t jj = ii + 1; jj < steps; ++jj)
          acc -= hess[jj][ii] * y[jj];
        y[ii] = acc / hess[ii][ii];
      }
      for (std::size_t jj = 0; jj < steps; ++jj)
        for (std::size_t i = 0; i < n; ++i) x[i] += basis[jj][i] * y[jj];
    }
    if (resid <= tol) report.converged = true;
    if (breakdown) break;
  }

  report.final_relative_residual = resid;
  if (!all_finite(x)) report.converged = false;
  return report;
}

FieldVector dense_solve(const SystemOperator& op, const FieldVector& rhs) {
  const std::size_t n = op.size();
  if (rhs.values.size() != n)
    throw std::invalid_argument("rhs length does not match operator size");
  if (n > 2000)
    throw std::invalid_argument(
        "dense_solve is an oracle for systems of at most 2000 nodes");

  const std::vector<Vec3>& nodes = *op.nodes;
  Eigen::MatrixXcd a(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      if (i == j) {
        a(i, j) = Complex{1.0, 0.0};
      } else {
        a(i, j) = green_free(op.k, nodes[i], nodes[j]) * op.couplings[j];
      }
    }
  }
  Eigen::VectorXcd b(n);
  for (std::size_t i = 0; i < n; ++i) b(i) = rhs.values[i];

  const Eigen::VectorXcd sol = a.partialPivLu().solve(b);
  const double rel_residual = (a * sol - b).norm() / b.norm();
  if (!(rel_residual < 1e-6))
    throw std::runtime_error("dense system is singular to working precision");

  FieldVector out;
  out.kind = op.kind;
  out.nodes = op.nodes;
  out.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.values[i] = sol(i);
  return out;
}

}  // namespace smallscat
