#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ppcf/denotational.hpp"
#include "ppcf/operational.hpp"
#include "ppcf/parser.hpp"

namespace ppcf {

struct AdequacyConfig {
  std::vector<IntervalSet> intervals;
  std::size_t runs = 100000;
  std::size_t budget = 10000;
  double delta = 0.01;
  /// Split delta across the intervals for a simultaneous guarantee.
  bool bonferroni = false;
  QuadratureConfig quadrature;
  FixConfig fix;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  /// Applies to the operational side only.
  StepOptions operational;
};

struct IntervalResult {
  IntervalSet U;
  std::optional<double> denotational_mass;  // empty if the interpreter failed
  double empirical_mass = 0.0;
  double dkw_bound = 0.0;
  double quad_tol = 0.0;
  bool pass = false;
};

struct RuntimeStats {
  std::size_t total_steps = 0;
  std::size_t max_steps = 0;
  double mean_steps = 0.0;
  std::size_t fixpoint_iterations = 0;
};

struct AdequacyReport {
  std::vector<IntervalResult> intervals;
  bool pass = false;
  RuntimeStats runtime_stats;
  double exhausted_fraction = 0.0;
  double stuck_fraction = 0.0;
  std::size_t runs = 0;
  std::size_t budget = 0;
  std::uint64_t seed = 0;
  double delta = 0.0;
  /// Set when the denotational side raised (NonConvergent, QuadratureFailure, ...).
  std::optional<std::string> error_kind;
  std::optional<std::string> error_message;
};

/// Compares mass(interpret(main), U) with the Monte-Carlo estimate for each U:
/// pass iff |denotational - empirical| <= dkw_bound + quad_tol.
AdequacyReport adequacy_check(const SourceProgram& program, const AdequacyConfig& cfg);

std::string report_json(const AdequacyReport& r);
std::string report_csv(const AdequacyReport& r);

/// Sets separated by ';', each in interval syntax: "[0,1); {2} + (3,inf)".
std::vector<IntervalSet> parse_interval_list(std::string_view spec);

/// `(-inf, x_i]` for x_i = lo + i (hi - lo) / steps, i = 0..steps.
std::vector<IntervalSet> cdf_grid(double lo, double hi, std::size_t steps);
/// Parses "lo:hi:steps".
std::vector<IntervalSet> parse_cdf_spec(std::string_view spec);

/// Fault injection for negative controls: `+` evaluates as `-`.
StepOptions plus_as_minus();

/// Reads a program from a path, from stdin for "-", or else treats the
/// argument itself as source text.
std::string read_source(const std::string& arg);

}  // namespace ppcf
