#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace ppcf {

using Point = std::vector<double>;

/// A function [0,1]^k -> R+.
struct PointFn {
  std::size_t k = 1;
  std::function<double(std::span<const double>)> eval;
  std::string label;

  double operator()(std::span<const double> x) const { return eval(x); }
};

/// s + t - st
PointFn wpor();
PointFn identity_fn();
/// Σ coeffs[i] x^i on [0,1].
PointFn polynomial(std::vector<double> coeffs);
/// `alpha f + beta g`
PointFn combine(double alpha, const PointFn& f, double beta, const PointFn& g);

enum class Sign { Plus, Minus };

/// Σ f(x + Σ_{i in I} u_i) over index sets I with n - |I| even (Plus) or odd
/// (Minus), n = us.size(). Throws DomainError if a negative increment is
/// given or x + Σ u_i leaves the unit cube.
double delta_signed(const PointFn& f, std::span<const double> x, std::span<const Point> us, Sign sign);

/// f_0 = f, f_{i+1}(x) = f_i(x + u_{i+1}) - f_i(x); returns f_n(x).
double iterated_delta(const PointFn& f, std::span<const double> x, std::span<const Point> us);

struct Violation {
  Point x;
  std::vector<Point> us;
  double minus;
  double plus;
};

struct StabilityReport {
  std::size_t n = 0;
  std::size_t grid = 0;
  double slack = 0.0;
  bool exhaustive = true;
  std::size_t checked = 0;
  std::size_t violation_count = 0;
  std::vector<Violation> violations;  // the first `max_recorded`, in enumeration order

  bool pass() const noexcept { return violation_count == 0; }
};

struct StabilityOptions {
  double slack = 1e-9;
  std::size_t max_recorded = 1000;
  /// Queries drawn when enumeration is not exhaustive.
  std::size_t samples = 200000;
  std::uint64_t seed = 0x5eed;
};

/// Tests Δ⁻ <= Δ⁺ + slack for every grid point x and every multiset of 1..n+1
/// nonzero grid-step increments that stays in the cube. Exhaustive for k = 1
/// and for k = 2 with n <= 3; random subsampling otherwise.
StabilityReport check_pre_stable(const PointFn& f, std::size_t n, std::size_t grid = 8,
                                 const StabilityOptions& options = {});

}  // namespace ppcf
