#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ppcf/interval_set.hpp"
#include "ppcf/primitives.hpp"

namespace ppcf {

/// `real` or `A -> B`. Cheap to copy; arrow nodes are shared.
class Type {
 public:
  Type() = default;  // real
  static Type real() { return {}; }
  static Type arrow(Type domain, Type codomain);

  bool is_real() const noexcept { return arrow_ == nullptr; }
  bool is_arrow() const noexcept { return arrow_ != nullptr; }
  const Type& domain() const;
  const Type& codomain() const;

  bool operator==(const Type& other) const;
  std::string to_string() const;

 private:
  struct Arrow;
  std::shared_ptr<const Arrow> arrow_;
};

struct Type::Arrow {
  Type domain;
  Type codomain;
};

enum class TermKind { Var, Abs, App, Fix, Numeral, Prim, Ifz, Sample, Let, Macro };

class Term;
using TermPtr = std::shared_ptr<const Term>;

/// Immutable PPCF term. Children are shared between terms; every node caches
/// its sorted set of free variables.
///
/// Macro nodes only exist between parsing and `expand_sugar`.
class Term {
 public:
  static TermPtr var(std::string name);
  static TermPtr abs(std::string name, Type annot, TermPtr body);
  static TermPtr app(TermPtr fun, TermPtr arg);
  static TermPtr app(TermPtr fun, std::span<const TermPtr> args);
  static TermPtr fix(TermPtr body);
  static TermPtr numeral(double value);  // throws InvariantViolation if not finite
  static TermPtr prim(PrimRef f, std::vector<TermPtr> args);  // throws ArityError
  static TermPtr prim(std::string_view name, std::vector<TermPtr> args);
  static TermPtr ifz(TermPtr scrutinee, TermPtr then_branch, TermPtr else_branch);
  static TermPtr sample();
  static TermPtr let(std::string name, TermPtr bound, TermPtr body);

  /// Surface-only node. `binder` is non-empty for `#let x = M in N`.
  struct MacroInfo {
    std::optional<IntervalSet> set;
    std::string binder;
  };
  static TermPtr macro(std::string name, MacroInfo info, std::vector<TermPtr> args);

  TermKind kind() const noexcept { return kind_; }
  bool is(TermKind k) const noexcept { return kind_ == k; }

  /// Variable name, binder of Abs/Let, or macro name.
  const std::string& name() const noexcept { return name_; }
  const Type& annotation() const noexcept { return annot_; }
  double value() const noexcept { return value_; }
  const PrimRef& primitive() const noexcept { return prim_; }
  const MacroInfo& macro_info() const noexcept { return macro_; }

  std::span<const TermPtr> children() const noexcept { return children_; }
  const TermPtr& child(std::size_t i) const { return children_.at(i); }

  // Named accessors.
  const TermPtr& body() const { return children_.back(); }      // Abs, Let, Fix
  const TermPtr& bound() const { return children_.at(0); }      // Let
  const TermPtr& fun() const { return children_.at(0); }        // App
  const TermPtr& arg() const { return children_.at(1); }        // App
  const TermPtr& scrutinee() const { return children_.at(0); }  // Ifz
  const TermPtr& then_branch() const { return children_.at(1); }
  const TermPtr& else_branch() const { return children_.at(2); }

  const std::vector<std::string>& free_vars() const noexcept { return free_; }
  bool has_free(std::string_view x) const;
  bool closed() const noexcept { return free_.empty(); }

  /// Index of the child bound by `name()`: Abs body and Let body.
  bool binds_child(std::size_t i) const;

  /// Same node with different children (same kind, name, payload).
  TermPtr with_children(std::vector<TermPtr> children) const;
  TermPtr with_binder(std::string name, std::vector<TermPtr> children) const;

 private:
  Term() = default;
  static TermPtr finish(Term t);

  TermKind kind_ = TermKind::Sample;
  std::string name_;
  Type annot_;
  double value_ = 0.0;
  PrimRef prim_;
  MacroInfo macro_;
  std::vector<TermPtr> children_;
  std::vector<std::string> free_;
};

/// Ordered variable -> type bindings; `extend` shadows earlier entries.
class TypingContext {
 public:
  TypingContext() = default;
  TypingContext extend(std::string name, Type t) const;
  const Type* lookup(std::string_view name) const;
  std::span<const std::pair<std::string, Type>> entries() const { return entries_; }

 private:
  std::vector<std::pair<std::string, Type>> entries_;
};

/// Types of every subterm visited by `typecheck`, keyed by node address.
using TypeTable = std::unordered_map<const Term*, Type>;

/// Throws TypeError naming the offending subterm.
Type typecheck(const TypingContext& ctx, const Term& t, TypeTable* table = nullptr);
inline Type typecheck(const Term& t) { return typecheck(TypingContext{}, t); }

/// Capture-avoiding `t{s/x}`. Bound variables that would capture a free
/// variable of `s` are renamed `base#k` with a global counter.
TermPtr substitute(const TermPtr& t, std::string_view x, const TermPtr& s);

/// A variable name not used before in this process: `base#k`.
std::string fresh_name(std::string_view base);

bool alpha_equal(const Term& a, const Term& b);

std::size_t term_size(const Term& t);

}  // namespace ppcf
