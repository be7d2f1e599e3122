#include "ppcf/denotational.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "ppcf/error.hpp"

namespace ppcf {

const Measure& SemValue::measure() const {
  if (auto* m = std::get_if<Measure>(&v_)) return *m;
  throw InvariantViolation("semantic value is a function, expected a measure");
}

const SemFunc& SemValue::func() const {
  if (auto* f = std::get_if<SemFunc>(&v_)) return *f;
  throw InvariantViolation("semantic value is a measure, expected a function");
}

Type SemValue::type() const {
  if (is_measure()) return Type::real();
  const auto& f = func();
  return Type::arrow(f.domain, f.codomain);
}

SemValue zero_value(const Type& t) {
  if (t.is_real()) return Measure::zero();
  Type cod = t.codomain();
  return SemFunc{t.domain(), cod, [cod](const SemValue&) { return zero_value(cod); }};
}

Env Env::bind(std::string name, SemValue v) const {
  Env e;
  e.head_ = std::make_shared<const Node>(Node{std::move(name), std::move(v), head_});
  return e;
}

const SemValue* Env::lookup(std::string_view name) const {
  for (const Node* n = head_.get(); n; n = n->next.get()) {
    if (n->name == name) return &n->value;
  }
  return nullptr;
}

TypingContext Env::context() const {
  std::vector<const Node*> nodes;
  for (const Node* n = head_.get(); n; n = n->next.get()) nodes.push_back(n);
  TypingContext ctx;
  for (auto it = nodes.rbegin(); it != nodes.rend(); ++it) {
    const Node* n = *it;
    if (lookup(n->name) == &n->value) ctx = ctx.extend(n->name, n->value.type());
  }
  return ctx;
}

// ---------------------------------------------------------------------------
// Fixpoints

namespace {

std::vector<IntervalSet> probe_list(const FixConfig& cfg) {
  std::vector<IntervalSet> probes{IntervalSet::real_line()};
  for (const auto& U : cfg.probe_sets) {
    if (std::find(probes.begin(), probes.end(), U) == probes.end()) probes.push_back(U);
  }
  return probes;
}

std::vector<double> masses_on(const Measure& m, const std::vector<IntervalSet>& probes,
                              const QuadratureConfig& quad) {
  std::vector<double> out;
  out.reserve(probes.size());
  for (const auto& U : probes) out.push_back(m.mass(U, quad));
  return out;
}

double max_change(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

// Iterates `next(k)` (the k-th Kleene iterate observed at ground type) until
// `patience` consecutive steps are calm. Iterates only grow, so a step with
// change d after a change d' leaves a tail of about d*r/(1-r), r = d/d', when
// the changes decay geometrically; a step is calm when that tail is within
// mass_tol, or when d is at the quadrature noise floor.
Measure iterate_ground(const std::function<Measure(std::size_t)>& next, const FixConfig& cfg,
                       const QuadratureConfig& quad, std::size_t patience,
                       const std::function<void(const FixTrace&)>& on_trace) {
  FixTrace trace;
  trace.probes = probe_list(cfg);
  std::vector<double> prev(trace.probes.size(), 0.0);
  trace.history.push_back(prev);
  std::size_t calm = 0;
  double last = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k <= cfg.max_iters; ++k) {
    Measure m = next(k);
    std::vector<double> cur = masses_on(m, trace.probes, quad);
    trace.history.push_back(cur);
    trace.iterations = k;
    double d = max_change(cur, prev);
    double r = d / last;
    bool settled = d <= 2.0 * quad.abs_tol || (r < 1.0 && d * r / (1.0 - r) <= cfg.mass_tol);
    calm = d < cfg.mass_tol && settled ? calm + 1 : 0;
    last = d;
    if (calm >= patience) {
      if (on_trace) on_trace(trace);
      return m;
    }
    prev = std::move(cur);
  }
  if (on_trace) on_trace(trace);
  throw NonConvergent(cfg.max_iters, prev);
}

// Kleene iterates F^k(0) at an arrow type, built on demand and shared.
class IterateCache {
 public:
  IterateCache(SemValue F, Type type) : F_(std::move(F)) { items_.push_back(zero_value(type)); }

  SemValue get(std::size_t k) {
    std::lock_guard lock(mu_);
    while (items_.size() <= k) items_.push_back(F_(items_.back()));
    return items_[k];
  }

 private:
  SemValue F_;
  std::mutex mu_;
  std::vector<SemValue> items_;
};

SemValue unrolled(std::shared_ptr<IterateCache> cache, Type type, std::vector<SemValue> args,
                  const FixConfig& cfg, const QuadratureConfig& quad,
                  std::function<void(const FixTrace&)> on_trace) {
  Type cod = type.codomain();
  return SemFunc{type.domain(), cod, [=](const SemValue& a) -> SemValue {
                   std::vector<SemValue> all = args;
                   all.push_back(a);
                   if (!cod.is_real()) return unrolled(cache, cod, std::move(all), cfg, quad, on_trace);
                   auto next = [&](std::size_t k) {
                     SemValue v = cache->get(k);
                     for (const auto& x : all) v = v(x);
                     return v.measure();
                   };
                   return iterate_ground(next, cfg, quad, std::max<std::size_t>(1, cfg.arrow_patience),
                                         on_trace);
                 }};
}

}  // namespace

SemValue fixpoint(const SemValue& F, const FixConfig& cfg, const QuadratureConfig& quad,
                  std::function<void(const FixTrace&)> on_trace) {
  if (!(cfg.mass_tol > 0.0)) throw InvariantViolation("FixConfig.mass_tol must be positive");
  const SemFunc& f = F.func();
  if (!(f.domain == f.codomain)) throw InvariantViolation("fixpoint of a function of type A -> B with A != B");
  if (f.domain.is_real()) {
    Measure cur;
    auto next = [&](std::size_t) {
      cur = F(cur).measure();
      return cur;
    };
    return iterate_ground(next, cfg, quad, 1, on_trace);
  }
  auto cache = std::make_shared<IterateCache>(F, f.domain);
  return unrolled(cache, f.domain, {}, cfg, quad, std::move(on_trace));
}

// ---------------------------------------------------------------------------
// Interpretation

struct Interpreter::State {
  DenotationConfig cfg;
  mutable std::mutex mu;
  TypeTable types;
  std::vector<TermPtr> roots;  // keeps typed nodes alive

  struct LetInfo {
    std::size_t occurrences = 0;
    bool linear = true;
    std::vector<double> breakpoints;
  };
  std::unordered_map<const Term*, LetInfo> lets;

  std::atomic<std::size_t> fix_iterations{0};
  std::vector<FixTrace> traces;
  // Closed fix nodes do not depend on the environment: solved once. Keyed by
  // the body, which the entry keeps alive so the address cannot be reused.
  std::unordered_map<const Term*, std::pair<TermPtr, SemValue>> closed_fix;
  Measure uniform = Measure::lebesgue(0.0, 1.0);

  Type type_of(const Term& t) const {
    std::lock_guard lock(mu);
    auto it = types.find(&t);
    if (it == types.end()) throw InvariantViolation("interpreting an untyped subterm");
    return it->second;
  }

  const LetInfo& let_info(const Term& t) {
    std::lock_guard lock(mu);
    auto it = lets.find(&t);
    if (it != lets.end()) return it->second;
    LetInfo info;
    scan_uses(*t.body(), t.name(), true, info);
    collect_breakpoints(*t.body(), info.breakpoints);
    std::sort(info.breakpoints.begin(), info.breakpoints.end());
    info.breakpoints.erase(std::unique(info.breakpoints.begin(), info.breakpoints.end()),
                           info.breakpoints.end());
    return lets.emplace(&t, std::move(info)).first->second;
  }

  // Occurrences of x, and whether each sits where the denotation is linear in
  // the measure bound to x: under primitives, ifz and let only.
  static void scan_uses(const Term& t, const std::string& x, bool linear_path, LetInfo& info) {
    switch (t.kind()) {
      case TermKind::Var:
        if (t.name() == x) {
          ++info.occurrences;
          info.linear = info.linear && linear_path;
        }
        return;
      case TermKind::Abs:
        if (t.name() != x) scan_uses(*t.body(), x, false, info);
        return;
      case TermKind::Let:
        scan_uses(*t.bound(), x, linear_path, info);
        if (t.name() != x) scan_uses(*t.body(), x, linear_path, info);
        return;
      case TermKind::Prim:
      case TermKind::Ifz:
        for (const auto& c : t.children()) scan_uses(*c, x, linear_path, info);
        return;
      default:
        for (const auto& c : t.children()) scan_uses(*c, x, false, info);
        return;
    }
  }

  static void collect_breakpoints(const Term& t, std::vector<double>& out) {
    if (out.size() > 64) return;
    if (t.is(TermKind::Numeral)) out.push_back(t.value());
    if (t.is(TermKind::Prim) && t.primitive()->chi_set) {
      auto e = endpoints(*t.primitive()->chi_set);
      out.insert(out.end(), e.begin(), e.end());
    }
    for (const auto& c : t.children()) collect_breakpoints(*c, out);
  }
};

namespace {

using StatePtr = std::shared_ptr<Interpreter::State>;

}  // namespace

static SemValue eval(const StatePtr& st, const Term& t, const Env& env);

static Measure eval_measure(const StatePtr& st, const Term& t, const Env& env) {
  return eval(st, t, env).measure();
}

static SemValue eval(const StatePtr& st, const Term& t, const Env& env) {
  const QuadratureConfig& quad = st->cfg.quadrature;
  switch (t.kind()) {
    case TermKind::Var: {
      const SemValue* v = env.lookup(t.name());
      if (!v) throw InvariantViolation("unbound variable `" + t.name() + "` during interpretation");
      return *v;
    }
    case TermKind::Numeral:
      return Measure::dirac(t.value());
    case TermKind::Sample:
      return st->uniform;
    case TermKind::Abs: {
      Type cod = st->type_of(*t.body());
      const Term* node = &t;
      return SemFunc{t.annotation(), cod,
                     [st, node, env](const SemValue& a) { return eval(st, *node->body(), env.bind(node->name(), a)); }};
    }
    case TermKind::App:
      return eval(st, *t.fun(), env)(eval(st, *t.arg(), env));
    case TermKind::Fix: {
      if (t.closed()) {
        std::lock_guard lock(st->mu);
        auto it = st->closed_fix.find(t.body().get());
        if (it != st->closed_fix.end()) return it->second.second;
      }
      SemValue F = eval(st, *t.body(), env);
      auto record = [st](const FixTrace& tr) {
        st->fix_iterations += tr.iterations;
        std::lock_guard lock(st->mu);
        st->traces.push_back(tr);
      };
      SemValue v = fixpoint(F, st->cfg.fix, quad, record);
      if (t.closed()) {
        std::lock_guard lock(st->mu);
        st->closed_fix.emplace(t.body().get(), std::pair{t.body(), v});
      }
      return v;
    }
    case TermKind::Prim: {
      std::vector<Measure> args;
      for (const auto& c : t.children()) args.push_back(eval_measure(st, *c, env));
      return pushforward(t.primitive(), std::move(args));
    }
    case TermKind::Ifz: {
      Measure L = eval_measure(st, *t.scrutinee(), env);
      double c0 = L.mass(IntervalSet::point(0.0), quad);
      double c1 = L.mass(IntervalSet::point(0.0).complement(), quad);
      std::vector<double> coeffs;
      std::vector<Measure> branches;
      if (c0 > 0.0) {
        coeffs.push_back(c0);
        branches.push_back(eval_measure(st, *t.then_branch(), env));
      }
      if (c1 > 0.0) {
        coeffs.push_back(c1);
        branches.push_back(eval_measure(st, *t.else_branch(), env));
      }
      return mix(coeffs, branches);
    }
    case TermKind::Let: {
      Measure bound = eval_measure(st, *t.bound(), env);
      if (bound.is_zero()) return Measure::zero();
      const auto& info = st->let_info(t);
      if (info.occurrences == 0) {
        double c = bound.total_mass(quad);
        return eval_measure(st, *t.body(), env.bind(t.name(), bound)).scaled(c);
      }
      if (info.occurrences == 1 && info.linear && st->cfg.linear_let) {
        return eval(st, *t.body(), env.bind(t.name(), bound));
      }
      const Term* node = &t;
      return let_bind(
          bound,
          [st, node, env](double r) {
            return eval_measure(st, *node->body(), env.bind(node->name(), Measure::dirac(r)));
          },
          info.breakpoints);
    }
    case TermKind::Macro:
      throw InvariantViolation("unexpanded macro #" + t.name() + " reached the interpreter");
  }
  throw InvariantViolation("unknown term kind");
}

Interpreter::Interpreter(DenotationConfig cfg) : state_(std::make_shared<State>()) {
  state_->cfg = std::move(cfg);
}

SemValue Interpreter::interpret(const TermPtr& t, const Env& env) {
  TypeTable table;
  typecheck(env.context(), *t, &table);
  {
    std::lock_guard lock(state_->mu);
    state_->roots.push_back(t);
    for (auto& [k, v] : table) state_->types.insert_or_assign(k, std::move(v));
  }
  return eval(state_, *t, env);
}

Measure Interpreter::denote(const TermPtr& t) {
  if (!t->closed()) throw TypeError("denote expects a closed term", t->free_vars().front());
  SemValue v = interpret(t, {});
  if (!v.is_measure()) throw TypeError("denote expects a term of type real, got " + v.type().to_string(), "");
  return v.measure();
}

const DenotationConfig& Interpreter::config() const noexcept { return state_->cfg; }

std::size_t Interpreter::fix_iterations() const noexcept { return state_->fix_iterations.load(); }

std::vector<FixTrace> Interpreter::traces() const {
  std::lock_guard lock(state_->mu);
  return state_->traces;
}

SemValue interpret(const TermPtr& t, const Env& env, const DenotationConfig& cfg) {
  return Interpreter(cfg).interpret(t, env);
}

}  // namespace ppcf
