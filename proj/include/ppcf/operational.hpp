#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "ppcf/rng.hpp"
#include "ppcf/syntax.hpp"

namespace ppcf {

/// One layer of an evaluation context, recorded as the node that surrounds
/// the hole and the index of the child the hole replaces.
struct Frame {
  enum class Kind { AppFun, IfzCond, LetBound, PrimArg };
  Kind kind;
  TermPtr node;
  std::size_t index;  // child index of the hole inside `node`
};

/// A term with one hole. Frames run from the outermost to the innermost.
struct EvalContext {
  std::vector<Frame> frames;

  TermPtr plug(TermPtr filler) const;
  bool empty() const noexcept { return frames.empty(); }
};

enum class RedexKind { Beta, Prim, Ifz, Let, Fix, Sample };

struct Decomposition {
  bool normal_form = true;
  EvalContext context;  // empty for normal forms
  TermPtr redex;        // null for normal forms
  RedexKind kind = RedexKind::Beta;
};

/// Unique split of a closed term into context and redex, if any.
Decomposition decompose(const TermPtr& t);

/// How the reduction engine evaluates primitives. Empty means the primitive's
/// own function; overriding it is how fault-injection controls are built.
using PrimEval = std::function<double(const Primitive&, std::span<const double>)>;

struct StepOptions {
  PrimEval prim_eval;
};

/// Contracts a redex in isolation. Only `sample` draws from `rng`.
TermPtr contract(const Term& redex, RedexKind kind, const TermPtr& self, RngStream& rng,
                 const StepOptions& options = {});

/// One reduction step E[R] -> E[R']. Throws InvariantViolation on a normal form.
TermPtr step(const TermPtr& t, RngStream& rng, const StepOptions& options = {});

struct Outcome {
  enum class Kind { Value, StuckNormal, Exhausted };
  Kind kind = Kind::Exhausted;
  double value = 0.0;  // Value only
  TermPtr term;        // StuckNormal only
  std::size_t steps = 0;
};

/// Reduces until a normal form or `budget` steps.
Outcome run(const TermPtr& t, std::size_t budget, RngStream& rng, const StepOptions& options = {});

struct SimulationConfig {
  std::size_t runs = 100000;
  std::size_t budget = 10000;
  std::uint64_t seed = 0;
  unsigned threads = 1;  // results do not depend on this
  StepOptions step;
};

/// Run i uses RngStream::for_run(seed, i). Outcomes are indexed by run.
std::vector<Outcome> simulate(const TermPtr& t, const SimulationConfig& cfg);

/// `sqrt(ln(2/delta) / (2 runs))`
double dkw_bound(std::size_t runs, double delta);

struct Estimate {
  double p_hat = 0.0;
  double dkw = 0.0;
  std::size_t runs = 0;
  std::size_t hits = 0;
  std::size_t exhausted = 0;
  std::size_t stuck = 0;
};

Estimate summarize(std::span<const Outcome> outcomes, const IntervalSet& U, double delta);

/// Fraction of runs ending in a numeral inside U, with its DKW half-width.
Estimate estimate_mass(const TermPtr& t, const IntervalSet& U, const SimulationConfig& cfg,
                       double delta = 0.01);

}  // namespace ppcf
