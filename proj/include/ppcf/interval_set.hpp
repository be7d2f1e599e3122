#pragma once

#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ppcf {

/// One connected piece of a subset of the real line. A point is a closed
/// degenerate interval `[c,c]`. Infinite endpoints are always open.
struct Interval {
  double lo;
  double hi;
  bool lo_closed;
  bool hi_closed;

  bool is_point() const noexcept { return lo == hi; }
  bool contains(double r) const noexcept;
  bool operator==(const Interval&) const = default;
};

/// Finite union of intervals and isolated points, kept normalized: pieces are
/// non-empty, disjoint, sorted, and touching pieces are merged.
class IntervalSet {
 public:
  static constexpr double kInf = std::numeric_limits<double>::infinity();

  IntervalSet() = default;
  explicit IntervalSet(std::vector<Interval> pieces);

  static IntervalSet real_line();
  static IntervalSet point(double c);
  static IntervalSet points(std::span<const double> cs);
  static IntervalSet closed(double lo, double hi);
  static IntervalSet open(double lo, double hi);
  static IntervalSet closed_open(double lo, double hi);
  static IntervalSet open_closed(double lo, double hi);
  /// `(-inf, b]`
  static IntervalSet at_most(double b);

  /// Parses `"[a,b) + {c, d} + (e,inf)"`; `∪` and `U` are accepted as
  /// separators too. Throws ParseError.
  static IntervalSet parse(std::string_view text);

  bool empty() const noexcept { return pieces_.empty(); }
  bool contains(double r) const noexcept;
  std::span<const Interval> pieces() const noexcept { return pieces_; }

  IntervalSet unite(const IntervalSet& other) const;
  IntervalSet intersect(const IntervalSet& other) const;
  IntervalSet complement() const;
  bool subset_of(const IntervalSet& other) const;

  /// The set without its isolated points (what an atomless measure sees).
  IntervalSet without_points() const;

  /// Image under `r -> scale * r + shift`.
  IntervalSet affine(double scale, double shift) const;

  /// Total Lebesgue length; infinite if unbounded.
  double length() const noexcept;

  std::string to_string() const;

  bool operator==(const IntervalSet&) const = default;
  auto operator<=>(const IntervalSet& other) const { return to_string() <=> other.to_string(); }

 private:
  std::vector<Interval> pieces_;
};

/// Shortest decimal text that reads back to the same double.
std::string format_real(double r);

}  // namespace ppcf
