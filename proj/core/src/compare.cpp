#include "smallscat/compare.hpp"

#include <cmath>
#include <stdexcept>

namespace smallscat {

double sup_mean_difference(const std::vector<Vec3>& fine_positions,
                           const std::vector<Complex>& fine_values,
                           const GridPartition& coarse,
                           const std::vector<Complex>& coarse_values,
                           std::vector<CellDetail>* detail) {
  if (fine_positions.size() != fine_values.size())
    throw std::invalid_argument("fine positions/values length mismatch");
  if (coarse_values.size() != coarse.total_cells())
    throw std::invalid_argument("coarse values do not match the partition");
  if (fine_positions.empty())
    throw std::invalid_argument("no fine points given");

  std::vector<double> sums(coarse.total_cells(), 0.0);
  std::vector<std::size_t> counts(coarse.total_cells(), 0);
  for (std::size_t i = 0; i < fine_positions.size(); ++i) {
    const auto cell = try_locate_cell(coarse, fine_positions[i]);
    if (!cell) continue;  // outside the domain: belongs to no cell
    sums[*cell] += std::abs(fine_values[i] - coarse_values[*cell]);
    counts[*cell] += 1;
  }

  if (detail) detail->clear();
  double sup = -1.0;
  for (std::size_t q = 0; q < counts.size(); ++q) {
    if (counts[q] == 0) continue;
    const double mean = sums[q] / static_cast<double>(counts[q]);
    if (detail) detail->push_back({q, counts[q], mean});
    if (mean > sup) sup = mean;
  }
  if (sup < 0.0)
    throw std::runtime_error(
        "difference metric undefined: no fine point falls in any cell");
  return sup;
}

ComparisonReport compare_all(const FieldVector& u_ori,
                             const FieldVector& u_red,
                             const FieldVector& u_ie,
                             const ParticleCloud& cloud,
                             const GridPartition& red_grid,
                             const GridPartition& ie_grid,
                             bool with_detail) {
  if (u_ori.size() != cloud.size())
    throw std::invalid_argument("particle solution does not match the cloud");
  if (u_red.size() != red_grid.total_cells())
    throw std::invalid_argument("cell solution does not match the coarse grid");
  if (u_ie.size() != ie_grid.total_cells())
    throw std::invalid_argument(
        "collocation solution does not match the fine grid");

  ComparisonReport report;
  std::vector<CellDetail> detail;
  report.e_ori_red =
      sup_mean_difference(*cloud.centers, u_ori.values, red_grid,
                          u_red.values, with_detail ? &detail : nullptr);
  if (with_detail) report.ori_red_detail = std::move(detail);
  report.e_ie_ori = sup_mean_difference(*cloud.centers, u_ori.values,
                                        ie_grid, u_ie.values);
  report.e_ie_red = sup_mean_difference(*red_grid.centers, u_red.values,
                                        ie_grid, u_ie.values);
  report.error_sum = report.e_ori_red + report.e_ie_ori + report.e_ie_red;

  double red_max = 0.0;
  for (const Complex& c : u_red.values)
    red_max = std::max(red_max, std::abs(c));
  report.red_max_magnitude = red_max;
  return report;
}

}  // namespace smallscat
