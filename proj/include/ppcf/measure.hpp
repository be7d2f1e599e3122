#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "ppcf/interval_set.hpp"
#include "ppcf/primitives.hpp"
#include "ppcf/quadrature.hpp"

namespace ppcf {

using RealFn = std::function<double(double)>;

struct Atom {
  double at;
  double weight;
  bool operator==(const Atom&) const = default;
};

/// A non-atomic piece of a measure, queried rather than stored. Components may
/// still carry point masses internally (a pushforward onto {0, 1}, say); only
/// `Measure::atoms` are guaranteed to be explicit.
class Component {
 public:
  virtual ~Component() = default;
  virtual double mass(const IntervalSet& U, const QuadratureConfig& cfg) const = 0;
  /// `∫ g dμ`. `breakpoints` are likely discontinuities of g.
  virtual double integrate(const RealFn& g, const QuadratureConfig& cfg,
                           std::span<const double> breakpoints = {}) const = 0;
  /// Number of Lebesgue dimensions integrated over per query.
  virtual int dims() const = 0;
  virtual std::string describe() const = 0;
};

using ComponentPtr = std::shared_ptr<const Component>;

struct Weighted {
  double weight;
  ComponentPtr component;
};

/// Finite sub-probability measure on the reals: exact Dirac atoms plus
/// weighted queryable components.
class Measure {
 public:
  Measure() = default;  // zero measure
  Measure(std::vector<Atom> atoms, std::vector<Weighted> parts);

  static Measure zero() { return {}; }
  static Measure dirac(double r, double weight = 1.0);
  /// Lebesgue measure restricted to [lo, hi].
  static Measure lebesgue(double lo = 0.0, double hi = 1.0);
  /// `weight * density(s) ds` on [lo, hi]; infinite ends are truncated.
  static Measure with_density(double lo, double hi, RealFn density, std::string label, double weight = 1.0);
  static Measure of(ComponentPtr c, double weight = 1.0);

  std::span<const Atom> atoms() const noexcept { return atoms_; }
  std::span<const Weighted> parts() const noexcept { return parts_; }
  bool is_zero() const noexcept { return atoms_.empty() && parts_.empty(); }
  bool is_discrete() const noexcept { return parts_.empty(); }
  int dims() const;

  double mass(const IntervalSet& U, const QuadratureConfig& cfg = {}) const;
  double total_mass(const QuadratureConfig& cfg = {}) const;
  double integrate(const RealFn& g, const QuadratureConfig& cfg = {},
                   std::span<const double> breakpoints = {}) const;

  Measure scaled(double c) const;
  std::string describe() const;

 private:
  std::vector<Atom> atoms_;
  std::vector<Weighted> parts_;
};

/// `Σ coeffs[i] * measures[i]`; atoms at equal locations merge.
Measure mix(std::span<const double> coeffs, std::span<const Measure> measures);

/// Most continuous arguments a pushforward accepts.
inline constexpr int kMaxPushforwardDims = 3;

/// Image of the product measure under `f`. Purely atomic arguments give exact
/// atoms; otherwise the result is a memoizing component evaluated by nested
/// quadrature, using closed-form preimages where `f` has them. Throws
/// DimensionLimit for more than three continuous arguments.
Measure pushforward(PrimRef f, std::vector<Measure> args);

/// `U -> ∫ body(r)(U) bound(dr)`. Atoms of `bound` are expanded exactly; the
/// continuous remainder becomes a memoizing kernel component. `breakpoints`
/// seed the subdivision of the integral over r.
Measure let_bind(const Measure& bound, std::function<Measure(double)> body,
                 std::vector<double> breakpoints = {});

/// Endpoints of every piece of U (finite ones only).
std::vector<double> endpoints(const IntervalSet& U);

}  // namespace ppcf
