#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "smallscat/geometry.hpp"
#include "smallscat/kernel.hpp"

namespace smallscat {

struct CellDetail {
  std::size_t cell = 0;
  std::size_t count = 0;
  double mean_abs_diff = 0.0;
};

// Sup over occupied coarse cells of the mean |fine_i - coarse_cell| taken
// over the fine points inside each cell. Fine points outside the coarse
// domain lie in no cell and are skipped; empty cells are skipped, not
// counted as zero. Throws when sizes mismatch or when no fine point lands
// in any cell. `detail`, when non-null, receives one entry per occupied
// cell in ascending cell order.
double sup_mean_difference(const std::vector<Vec3>& fine_positions,
                           const std::vector<Complex>& fine_values,
                           const GridPartition& coarse,
                           const std::vector<Complex>& coarse_values,
                           std::vector<CellDetail>* detail = nullptr);

struct ComparisonReport {
  double e_ori_red = 0.0;
  double e_ie_ori = 0.0;
  double e_ie_red = 0.0;
  double error_sum = 0.0;
  // max |u_red| over cells, for normalizing the raw metric values.
  double red_max_magnitude = 0.0;
  std::optional<std::vector<CellDetail>> ori_red_detail;
};

// All three pairwise differences between the system solutions:
//   e_ori_red: particle values against the coarse-grid cell values,
//   e_ie_ori:  particle values against the fine-grid cell values,
//   e_ie_red:  coarse-grid center values against the fine-grid cells.
// error_sum is their exact sum.
ComparisonReport compare_all(const FieldVector& u_ori,
                             const FieldVector& u_red,
                             const FieldVector& u_ie,
                             const ParticleCloud& cloud,
                             const GridPartition& red_grid,
                             const GridPartition& ie_grid,
                             bool with_detail = false);

}  // namespace smallscat
