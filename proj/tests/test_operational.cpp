#include <doctest.h>

#include <cmath>

#include "corpus.hpp"
#include "gen.hpp"
#include "ppcf/error.hpp"
#include "ppcf/operational.hpp"
#include "ppcf/parser.hpp"

using namespace ppcf;

namespace {

TermPtr P(std::string_view src) { return parse(src).main; }

bool is_redex(const Term& t) {
  auto num = [](const TermPtr& c) { return c->is(TermKind::Numeral); };
  switch (t.kind()) {
    case TermKind::App:
      return t.fun()->is(TermKind::Abs);
    case TermKind::Prim:
      return std::all_of(t.children().begin(), t.children().end(), num);
    case TermKind::Ifz:
      return num(t.scrutinee());
    case TermKind::Let:
      return num(t.bound());
    case TermKind::Fix:
    case TermKind::Sample:
      return true;
    default:
      return false;
  }
}

// Every redex reachable through hole positions the context grammar allows.
void redex_positions(const TermPtr& t, std::vector<const Term*>& out) {
  if (is_redex(*t)) out.push_back(t.get());
  switch (t->kind()) {
    case TermKind::App:
    case TermKind::Ifz:
    case TermKind::Let:
      redex_positions(t->child(0), out);
      break;
    case TermKind::Prim:
      for (const auto& c : t->children()) {
        redex_positions(c, out);
        if (!c->is(TermKind::Numeral)) break;
      }
      break;
    default:
      break;
  }
}

std::vector<TermPtr> corpus_terms() {
  std::vector<TermPtr> out;
  for (auto src : testing::kCorpus) out.push_back(P(src));
  return out;
}

// Terms met along a seeded reduction, up to `n` steps.
std::vector<TermPtr> trajectory(TermPtr t, std::size_t n, std::uint64_t seed) {
  std::vector<TermPtr> out{t};
  RngStream rng(seed, 0);
  for (std::size_t i = 0; i < n && !decompose(t).normal_form; ++i) {
    t = step(t, rng);
    out.push_back(t);
  }
  return out;
}

}  // namespace

TEST_CASE("rng stream") {
  RngStream a(42, 7), b(42, 7);
  for (int i = 0; i < 1000; ++i) {
    double u = a.uniform();
    CHECK(u == b.uniform());
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  CHECK(a.counter() == 1007);
  CHECK(RngStream::for_run(3, 2).counter() == 2 * (std::uint64_t{1} << 40));
  CHECK(RngStream(1, 0).uniform() != RngStream(2, 0).uniform());

  // Moments of 10^5 draws: mean 1/2, variance 1/12.
  RngStream r(5, 0);
  double s = 0, s2 = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    double u = r.uniform();
    s += u;
    s2 += u * u;
  }
  CHECK(std::fabs(s / n - 0.5) < 5 * std::sqrt(1.0 / 12 / n));
  CHECK(std::fabs(s2 / n - s * s / n / n - 1.0 / 12) < 2e-3);
}

TEST_CASE("decompose examples") {
  auto d = decompose(P("3 + 2"));
  CHECK_FALSE(d.normal_form);
  CHECK(d.kind == RedexKind::Prim);
  CHECK(d.context.empty());

  d = decompose(P("(fun x : real -> x) sample"));
  CHECK(d.kind == RedexKind::Beta);

  d = decompose(P("1 + (sample * 2)"));
  CHECK(d.kind == RedexKind::Sample);
  REQUIRE(d.context.frames.size() == 2);
  CHECK(d.context.frames[0].index == 1);

  CHECK(decompose(P("5")).normal_form);
  CHECK(decompose(P("fun x : real -> sample")).normal_form);
}

TEST_CASE("unique decomposition") {
  std::vector<TermPtr> terms;
  for (const auto& t : corpus_terms())
    for (const auto& s : trajectory(t, 40, 1)) terms.push_back(s);
  testing::TermGen gen(17);
  for (int i = 0; i < 500; ++i)
    for (const auto& s : trajectory(gen.real(2 + i % 5), 20, i)) terms.push_back(s);

  for (const auto& t : terms) {
    std::vector<const Term*> found;
    redex_positions(t, found);
    auto d = decompose(t);
    CHECK(found.size() <= 1);
    if (d.normal_form) {
      CHECK(found.empty());
      continue;
    }
    REQUIRE(found.size() == 1);
    CHECK(found[0] == d.redex.get());
    CHECK(alpha_equal(*d.context.plug(d.redex), *t));
  }
}

TEST_CASE("step examples") {
  RngStream rng(0, 0);
  CHECK(step(P("ifz 0 then 1 else 2"), rng)->value() == 1);
  CHECK(step(P("ifz 0.5 then 1 else 2"), rng)->value() == 2);
  CHECK(step(P("let x = 4 in x * x"), rng)->is(TermKind::Prim));
  auto fx = step(P("fix (fun x : real -> 7)"), rng);
  CHECK(fx->is(TermKind::App));
  CHECK(step(P("7 / 0"), rng)->value() == 0.0);
  CHECK_THROWS_AS(step(P("3"), rng), InvariantViolation);

  StepOptions faulty = {[](const Primitive& p, std::span<const double> x) {
    return p.name == "+" ? x[0] - x[1] : p(x);
  }};
  CHECK(step(P("3 + 2"), rng, faulty)->value() == 1.0);
}

TEST_CASE("non-sample steps draw nothing, sample steps draw once") {
  for (const auto& t0 : corpus_terms()) {
    TermPtr t = t0;
    RngStream rng(9, 0);
    for (int i = 0; i < 200; ++i) {
      auto d = decompose(t);
      if (d.normal_form) break;
      auto before = rng.counter();
      t = step(t, rng);
      CHECK(rng.counter() - before == (d.kind == RedexKind::Sample ? 1u : 0u));
    }
  }
}

TEST_CASE("subject reduction") {
  std::vector<TermPtr> starts = corpus_terms();
  testing::TermGen gen(3);
  for (int i = 0; i < 500; ++i) starts.push_back(gen.real(2 + i % 5));
  for (const auto& t : starts) {
    Type ty = typecheck(*t);
    for (const auto& s : trajectory(t, 60, 4)) CHECK(typecheck(*s) == ty);
  }
}

TEST_CASE("run outcomes") {
  RngStream rng(0, 0);
  auto o = run(P("3 + 2"), 100, rng);
  CHECK(o.kind == Outcome::Kind::Value);
  CHECK(o.value == 5);
  CHECK(o.steps == 1);

  o = run(P("fun x : real -> x"), 100, rng);
  CHECK(o.kind == Outcome::Kind::StuckNormal);
  CHECK(o.steps == 0);

  o = run(P("fix (fun x : real -> x)"), 100, rng);
  CHECK(o.kind == Outcome::Kind::Exhausted);
  CHECK(o.steps == 100);

  o = run(P("(fix (fun f : (real -> real) -> fun n : real -> ifz n then 1 else n * f (n - 1))) 5"), 1000, rng);
  CHECK(o.value == 120);
}

TEST_CASE("determinism and thread independence") {
  for (auto src : {"#normal", "#observe[[0,0.5]](sample)", "#bernoulli(sample)"}) {
    auto t = P(src);
    SimulationConfig cfg;
    cfg.runs = 2000;
    cfg.budget = 500;
    cfg.seed = 77;
    auto a = simulate(t, cfg);
    auto b = simulate(t, cfg);
    cfg.threads = 4;
    auto c = simulate(t, cfg);
    REQUIRE(a.size() == 2000);
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].kind == b[i].kind);
      CHECK(a[i].value == b[i].value);
      CHECK(a[i].steps == b[i].steps);
      CHECK(a[i].value == c[i].value);
      CHECK(a[i].steps == c[i].steps);
    }
  }
}

TEST_CASE("estimator examples") {
  CHECK(dkw_bound(100000, 0.01) == doctest::Approx(std::sqrt(std::log(200.0) / 200000.0)));
  CHECK(dkw_bound(100000, 0.01) == doctest::Approx(0.0051).epsilon(0.02));

  SimulationConfig cfg;
  cfg.runs = 10000;
  cfg.budget = 1000;
  auto e = estimate_mass(P("#bernoulli(0.3)"), IntervalSet::point(1), cfg);
  CHECK(std::fabs(e.p_hat - 0.3) <= e.dkw);

  e = estimate_mass(P("(fun x : real -> x = x) sample"), IntervalSet::point(0), cfg);
  CHECK(e.p_hat == 1.0);

  cfg.runs = 500;
  e = estimate_mass(P("#observe[{}](sample)"), IntervalSet::real_line(), cfg);
  CHECK(e.p_hat == 0.0);
  CHECK(e.exhausted == 500);
}
