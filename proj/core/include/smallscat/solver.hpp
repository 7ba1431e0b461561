#pragma once

#include <cstddef>

#include "smallscat/kernel.hpp"

namespace smallscat {

struct SolveSettings {
  double relative_tolerance = 1e-3;
  std::size_t restart_length = 50;
  std::size_t max_iterations = 10000;

  // Throws std::invalid_argument when any field is out of range.
  void validate() const;
};

struct SolveReport {
  FieldVector solution;
  std::size_t iterations = 0;          // Arnoldi steps performed
  double final_relative_residual = 0.0;  // |r| / |rhs| from the recurrence
  bool converged = false;
};

// Restarted GMRES with modified Gram-Schmidt orthogonalization and Givens
// rotations, zero initial guess, Euclidean norms. The driver is
// single-threaded; all parallelism lives inside apply_operator. Fixed
// inputs give bitwise-identical iterates at a fixed worker count.
// Throws on length mismatch or zero right-hand side.
SolveReport gmres_solve(const SystemOperator& op, const FieldVector& rhs,
                        const SolveSettings& settings = {});

// Direct oracle: materializes the dense (I + K) matrix and solves it by
// row-pivoted elimination. Guarded to systems of at most 2000 nodes.
// Throws on matrices singular to working precision.
FieldVector dense_solve(const SystemOperator& op, const FieldVector& rhs);

}  // namespace smallscat
