#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace ppcf {

struct QuadratureConfig {
  double abs_tol = 1e-9;
  double rel_tol = 1e-10;
  int max_depth = 60;
  /// Unbounded supports are cut to this window.
  double truncation_lo = -1e6;
  double truncation_hi = 1e6;
  /// Cells of the initial uniform subdivision.
  std::size_t min_cells = 8;
  /// Hard cap on live cells.
  std::size_t max_cells = 400000;

  /// Tolerances for an integrand that is itself computed by quadrature: half
  /// of these, so errors over all nesting levels stay below 2 * abs_tol.
  QuadratureConfig nested() const;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  // estimated absolute error
  std::size_t evaluations = 0;
};

/// Globally adaptive Simpson rule on [a, b]: the cell with the largest error
/// estimate is bisected until the summed estimate is within tolerance.
/// `breakpoints` inside (a, b) become cell boundaries, which is where jumps
/// and kinks of the integrand should go. Throws QuadratureFailure when a cell
/// reaches `max_depth` or the cell cap is exceeded.
QuadratureResult adaptive_simpson(const std::function<double(double)>& g, double a, double b,
                                  const QuadratureConfig& cfg, std::span<const double> breakpoints = {});

}  // namespace ppcf
