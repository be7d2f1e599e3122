#include "ppcf/sugar.hpp"

#include <numbers>

#include "ppcf/error.hpp"
#include "ppcf/pretty.hpp"

namespace ppcf {

namespace {

const Type kReal = Type::real();
const Type kRealToReal = Type::arrow(kReal, kReal);

TermPtr var(const char* n) { return Term::var(n); }
TermPtr num(double r) { return Term::numeral(r); }
TermPtr p1(const char* f, TermPtr a) { return Term::prim(f, {std::move(a)}); }
TermPtr p2(const char* f, TermPtr a, TermPtr b) { return Term::prim(f, {std::move(a), std::move(b)}); }

TermPtr if_in(TermPtr l, const IntervalSet& U, TermPtr m, TermPtr n) {
  // ifz tests for zero, so membership (chi = 1) selects the else branch.
  return Term::ifz(Term::prim(chi(U), {std::move(l)}), std::move(n), std::move(m));
}

TermPtr normal_term() {
  auto radius = p1("sqrt", p2("*", num(-2), p1("log", var("x"))));
  auto angle = p1("cos", p2("*", num(2 * std::numbers::pi), var("y")));
  return Term::let("x", Term::sample(), Term::let("y", Term::sample(), p2("*", radius, angle)));
}

std::optional<int> expectation_order(const std::string& name) {
  const std::string prefix = "expectation_";
  if (name.rfind(prefix, 0) != 0 || name.size() == prefix.size()) return std::nullopt;
  int n = 0;
  for (char c : name.substr(prefix.size())) {
    if (c < '0' || c > '9' || n > 100000) return std::nullopt;
    n = n * 10 + (c - '0');
  }
  if (n < 1) return std::nullopt;
  return n;
}

std::size_t arrow_arity(Type t) {
  std::size_t k = 0;
  while (t.is_arrow()) {
    ++k;
    t = t.codomain();
  }
  return k;
}

// Eta-expands `build(applied...)` over the argument types of `type`:
// λa1..ak. build(a1..ak).
template <class Build>
TermPtr wrap_arrows(const Type& type, Build build) {
  std::vector<std::pair<std::string, Type>> params;
  Type t = type;
  while (t.is_arrow()) {
    params.emplace_back(fresh_name("a"), t.domain());
    t = t.codomain();
  }
  std::vector<TermPtr> args;
  for (const auto& p : params) args.push_back(Term::var(p.first));
  TermPtr body = build(std::span<const TermPtr>(args));
  for (auto it = params.rbegin(); it != params.rend(); ++it) body = Term::abs(it->first, it->second, body);
  return body;
}

class Expander {
 public:
  TermPtr expand(const TermPtr& t, const TypingContext& ctx) {
    if (t->is(TermKind::Macro)) return expand_macro(*t, ctx);
    auto kids = t->children();
    if (kids.empty()) return t;
    std::vector<TermPtr> out;
    out.reserve(kids.size());
    bool changed = false;
    for (std::size_t i = 0; i < kids.size(); ++i) {
      TypingContext inner = ctx;
      if (t->binds_child(i)) {
        inner = ctx.extend(t->name(), t->is(TermKind::Abs) ? t->annotation() : kReal);
      }
      out.push_back(expand(kids[i], inner));
      changed = changed || out.back() != kids[i];
    }
    return changed ? t->with_children(std::move(out)) : t;
  }

 private:
  TermPtr expand_macro(const Term& m, const TypingContext& ctx) {
    const std::string& name = m.name();
    auto kids = m.children();

    if (name == "let") {
      if (m.macro_info().binder.empty() || kids.size() != 2)
        throw ArityError("#let expects `#let x = M in N`");
      const std::string& x = m.macro_info().binder;
      TermPtr bound = expand(kids[0], ctx);
      TypingContext inner = ctx.extend(x, kReal);
      TermPtr body = expand(kids[1], inner);
      Type bt = typecheck(inner, *body);
      return wrap_arrows(bt, [&](std::span<const TermPtr> as) {
        return Term::let(x, bound, Term::app(body, as));
      });
    }

    std::vector<TermPtr> args;
    for (const auto& k : kids) args.push_back(expand(k, ctx));

    if (name == "if") {
      if (!m.macro_info().set) throw ArityError("#if needs a set: #if[U](l, m, n)");
      if (args.size() != 3) throw ArityError("#if expects 3 arguments, got " + std::to_string(args.size()));
      Type bt = typecheck(ctx, *args[1]);
      return wrap_arrows(bt, [&](std::span<const TermPtr> as) {
        return if_in(args[0], *m.macro_info().set, Term::app(args[1], as), Term::app(args[2], as));
      });
    }

    TermPtr comb = macro_combinator(name, m.macro_info().set);
    std::size_t max_args = arrow_arity(typecheck(*comb));
    if (args.size() > max_args) {
      throw ArityError("#" + name + " takes at most " + std::to_string(max_args) + " argument(s), got " +
                       std::to_string(args.size()));
    }
    return Term::app(comb, std::span<const TermPtr>(args));
  }
};

}  // namespace

TermPtr macro_combinator(const std::string& name, const std::optional<IntervalSet>& set) {
  auto needs_no_set = [&] {
    if (set) throw ArityError("#" + name + " does not take a set parameter");
  };
  if (name == "bernoulli") {
    needs_no_set();
    return Term::abs("p", kReal, Term::let("x", Term::sample(), p2("<=", var("x"), var("p"))));
  }
  if (name == "exponential") {
    needs_no_set();
    return Term::let("x", Term::sample(), p1("neg", p1("log", var("x"))));
  }
  if (name == "normal") {
    needs_no_set();
    return normal_term();
  }
  if (name == "gaussian") {
    needs_no_set();
    auto body = Term::let("y", normal_term(), p2("+", p2("*", var("s"), var("y")), var("mu")));
    return Term::abs("mu", kReal, Term::abs("s", kReal, body));
  }
  if (name == "observe") {
    if (!set) throw ArityError("#observe needs a set: #observe[U](m)");
    auto step = Term::let("x", var("m"), if_in(var("x"), *set, var("x"), var("y")));
    return Term::abs("m", kReal, Term::fix(Term::abs("y", kReal, step)));
  }
  if (auto n = expectation_order(name)) {
    needs_no_set();
    TermPtr fm = Term::app(var("f"), var("m"));
    TermPtr sum = fm;
    for (int i = 1; i < *n; ++i) sum = p2("+", sum, fm);
    return Term::abs("f", kRealToReal, Term::abs("m", kReal, p2("/", sum, num(*n))));
  }
  if (name == "if" || name == "let") throw ArityError("#" + name + " is not a combinator");
  throw UnknownMacro("unknown macro #" + name);
}

std::vector<std::string> macro_names() {
  return {"bernoulli", "exponential", "normal", "gaussian", "observe", "expectation_n", "if", "let"};
}

TermPtr expand_sugar(const TermPtr& surface, const TypingContext& ctx) {
  return Expander{}.expand(surface, ctx);
}

}  // namespace ppcf
