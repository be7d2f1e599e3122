#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <variant>
#include <vector>

#include "ppcf/measure.hpp"
#include "ppcf/syntax.hpp"

namespace ppcf {

class SemValue;

struct SemFunc {
  Type domain;
  Type codomain;
  std::function<SemValue(const SemValue&)> apply;
};

/// A measure at type real, a host closure at arrow types.
class SemValue {
 public:
  SemValue(Measure m) : v_(std::move(m)) {}  // NOLINT: implicit on purpose
  SemValue(SemFunc f) : v_(std::move(f)) {}  // NOLINT

  bool is_measure() const noexcept { return std::holds_alternative<Measure>(v_); }
  const Measure& measure() const;
  const SemFunc& func() const;
  SemValue operator()(const SemValue& arg) const { return func().apply(arg); }
  Type type() const;

 private:
  std::variant<Measure, SemFunc> v_;
};

/// The bottom element: zero measure, or the function constantly bottom.
SemValue zero_value(const Type& t);

/// Persistent variable -> value map; `bind` shares the tail.
class Env {
 public:
  Env() = default;
  Env bind(std::string name, SemValue v) const;
  const SemValue* lookup(std::string_view name) const;
  /// Innermost binding per name, oldest first.
  TypingContext context() const;

 private:
  struct Node {
    std::string name;
    SemValue value;
    std::shared_ptr<const Node> next;
  };
  std::shared_ptr<const Node> head_;
};

struct FixConfig {
  double mass_tol = 1e-6;
  std::size_t max_iters = 10000;
  /// Sets watched for convergence in addition to the whole line.
  std::vector<IntervalSet> probe_sets;
  /// Consecutive small changes required at arrow types, where an iterate can
  /// stall for a few rounds before the recursion reaches the query.
  std::size_t arrow_patience = 16;
};

/// Masses of the Kleene iterates on the probes (the real line first).
struct FixTrace {
  std::vector<IntervalSet> probes;
  std::vector<std::vector<double>> history;
  std::size_t iterations = 0;
};

struct DenotationConfig {
  QuadratureConfig quadrature;
  FixConfig fix;
  /// Interpret `let x = M in N` with x used once in a multilinear position as
  /// N under x := [[M]] instead of integrating over [[M]]. Same measure.
  bool linear_let = true;
};

/// Kleene iteration from the bottom of F's type. At real: iterate until the
/// largest mass change over the probes, and the geometric estimate of the
/// remaining tail, drop below mass_tol. At arrow types:
/// a curried function that iterates per fully-applied query.
/// Throws NonConvergent after max_iters.
SemValue fixpoint(const SemValue& F, const FixConfig& cfg, const QuadratureConfig& quad = {},
                  std::function<void(const FixTrace&)> on_trace = {});

class Interpreter {
 public:
  explicit Interpreter(DenotationConfig cfg = {});

  /// Typechecks `t` against the types of `env` and interprets it.
  SemValue interpret(const TermPtr& t, const Env& env = {});
  /// Denotation of a closed term of type real.
  Measure denote(const TermPtr& t);

  const DenotationConfig& config() const noexcept;
  std::size_t fix_iterations() const noexcept;
  std::vector<FixTrace> traces() const;

  struct State;  // opaque

 private:
  std::shared_ptr<State> state_;
};

/// One-shot interpretation.
SemValue interpret(const TermPtr& t, const Env& env = {}, const DenotationConfig& cfg = {});

}  // namespace ppcf
