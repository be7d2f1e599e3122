#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "ppcf/interval_set.hpp"

namespace ppcf {

/// Stands in for the "log 0 = -inf" limit so that every primitive stays total
/// and finite.
inline constexpr double kMaxReal = std::numeric_limits<double>::max();

/// How a primitive is written in concrete syntax.
enum class Notation {
  Infix,     // a + b
  Function,  // log(a), min(a, b)
  Chi,       // chi[U](a)
};

/// A total measurable map R^n -> R with an optional closed-form preimage.
struct Primitive {
  using Eval = std::function<double(std::span<const double>)>;
  /// `{s | f(args[0..k-1], s, args[k+1..]) in U}`; `args[k]` is ignored.
  /// Returns nullopt when no closed form is known for that argument.
  using Preimage = std::function<std::optional<IntervalSet>(
      std::size_t k, std::span<const double> args, const IntervalSet& U)>;

  std::string name;
  std::size_t arity = 1;
  Eval fn;
  Preimage preimage;
  Notation notation = Notation::Function;
  int precedence = 0;  // for infix: 1 comparison, 2 additive, 3 multiplicative
  std::optional<IntervalSet> chi_set;

  /// Applies `fn` and clamps to the finite range.
  double operator()(std::span<const double> args) const;
  /// Identity used for alpha-equivalence and printing (`chi[U]` includes U).
  std::string key() const;
};

using PrimRef = std::shared_ptr<const Primitive>;

/// Name -> primitive map. `standard()` holds + - * / = < <= > >= neg log exp
/// sqrt abs cos sin min max. Characteristic functions are built by `chi`.
class PrimitiveTable {
 public:
  static const PrimitiveTable& standard();

  PrimRef find(std::string_view name) const;  // nullptr if absent
  PrimRef at(std::string_view name) const;    // throws UnknownPrimitive
  bool contains(std::string_view name) const { return find(name) != nullptr; }
  void add(PrimRef p);
  const std::map<std::string, PrimRef, std::less<>>& entries() const { return entries_; }

 private:
  std::map<std::string, PrimRef, std::less<>> entries_;
};

/// Characteristic function of U as a unary primitive.
PrimRef chi(IntervalSet U);

/// Shorthand for `PrimitiveTable::standard().at(name)`.
PrimRef prim(std::string_view name);

}  // namespace ppcf
