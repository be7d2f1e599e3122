#include "ppcf/operational.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "ppcf/error.hpp"

namespace ppcf {

TermPtr EvalContext::plug(TermPtr filler) const {
  for (auto it = frames.rbegin(); it != frames.rend(); ++it) {
    auto kids = it->node->children();
    std::vector<TermPtr> out(kids.begin(), kids.end());
    out[it->index] = std::move(filler);
    filler = it->node->with_children(std::move(out));
  }
  return filler;
}

Decomposition decompose(const TermPtr& t) {
  Decomposition d;
  TermPtr cur = t;
  for (;;) {
    std::optional<Frame> frame;
    switch (cur->kind()) {
      case TermKind::Var:
      case TermKind::Numeral:
      case TermKind::Abs:
      case TermKind::Macro:
        return Decomposition{};
      case TermKind::Fix:
        d.kind = RedexKind::Fix;
        break;
      case TermKind::Sample:
        d.kind = RedexKind::Sample;
        break;
      case TermKind::App:
        if (cur->fun()->is(TermKind::Abs)) d.kind = RedexKind::Beta;
        else frame = Frame{Frame::Kind::AppFun, cur, 0};
        break;
      case TermKind::Ifz:
        if (cur->scrutinee()->is(TermKind::Numeral)) d.kind = RedexKind::Ifz;
        else frame = Frame{Frame::Kind::IfzCond, cur, 0};
        break;
      case TermKind::Let:
        if (cur->bound()->is(TermKind::Numeral)) d.kind = RedexKind::Let;
        else frame = Frame{Frame::Kind::LetBound, cur, 0};
        break;
      case TermKind::Prim: {
        auto kids = cur->children();
        auto it = std::find_if(kids.begin(), kids.end(),
                               [](const TermPtr& k) { return !k->is(TermKind::Numeral); });
        if (it == kids.end()) d.kind = RedexKind::Prim;
        else frame = Frame{Frame::Kind::PrimArg, cur, static_cast<std::size_t>(it - kids.begin())};
        break;
      }
    }
    if (!frame) {
      d.normal_form = false;
      d.redex = cur;
      return d;
    }
    d.context.frames.push_back(*frame);
    cur = cur->child(frame->index);
  }
}

TermPtr contract(const Term& r, RedexKind kind, const TermPtr& self, RngStream& rng,
                 const StepOptions& options) {
  switch (kind) {
    case RedexKind::Beta: {
      const Term& lam = *r.fun();
      return substitute(lam.body(), lam.name(), r.arg());
    }
    case RedexKind::Prim: {
      std::vector<double> xs;
      xs.reserve(r.children().size());
      for (const auto& k : r.children()) xs.push_back(k->value());
      const Primitive& f = *r.primitive();
      double v = options.prim_eval ? options.prim_eval(f, xs) : f(xs);
      if (!std::isfinite(v)) v = std::isnan(v) ? 0.0 : std::copysign(kMaxReal, v);
      return Term::numeral(v);
    }
    case RedexKind::Ifz:
      return r.scrutinee()->value() == 0.0 ? r.then_branch() : r.else_branch();
    case RedexKind::Let:
      return substitute(r.body(), r.name(), r.bound());
    case RedexKind::Fix:
      return Term::app(r.body(), self);
    case RedexKind::Sample:
      return Term::numeral(rng.uniform());
  }
  throw InvariantViolation("unknown redex kind");
}

TermPtr step(const TermPtr& t, RngStream& rng, const StepOptions& options) {
  Decomposition d = decompose(t);
  if (d.normal_form) throw InvariantViolation("step called on a normal form");
  return d.context.plug(contract(*d.redex, d.kind, d.redex, rng, options));
}

Outcome run(const TermPtr& t, std::size_t budget, RngStream& rng, const StepOptions& options) {
  Outcome out;
  TermPtr cur = t;
  for (std::size_t n = 0;; ++n) {
    Decomposition d = decompose(cur);
    if (d.normal_form) {
      out.steps = n;
      if (cur->is(TermKind::Numeral)) {
        out.kind = Outcome::Kind::Value;
        out.value = cur->value();
      } else {
        out.kind = Outcome::Kind::StuckNormal;
        out.term = cur;
      }
      return out;
    }
    if (n == budget) {
      out.kind = Outcome::Kind::Exhausted;
      out.steps = n;
      return out;
    }
    cur = d.context.plug(contract(*d.redex, d.kind, d.redex, rng, options));
  }
}

std::vector<Outcome> simulate(const TermPtr& t, const SimulationConfig& cfg) {
  std::vector<Outcome> out(cfg.runs);
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      RngStream rng = RngStream::for_run(cfg.seed, i);
      out[i] = run(t, cfg.budget, rng, cfg.step);
    }
  };
  unsigned threads = std::max(1u, std::min<unsigned>(cfg.threads, static_cast<unsigned>(cfg.runs)));
  if (threads == 1) {
    work(0, cfg.runs);
    return out;
  }
  std::vector<std::thread> pool;
  std::size_t chunk = (cfg.runs + threads - 1) / threads;
  for (unsigned k = 0; k < threads; ++k) {
    std::size_t b = k * chunk, e = std::min(cfg.runs, b + chunk);
    if (b < e) pool.emplace_back(work, b, e);
  }
  for (auto& th : pool) th.join();
  return out;
}

double dkw_bound(std::size_t runs, double delta) {
  return std::sqrt(std::log(2.0 / delta) / (2.0 * static_cast<double>(runs)));
}

Estimate summarize(std::span<const Outcome> outcomes, const IntervalSet& U, double delta) {
  Estimate e;
  e.runs = outcomes.size();
  for (const auto& o : outcomes) {
    switch (o.kind) {
      case Outcome::Kind::Value:
        if (U.contains(o.value)) ++e.hits;
        break;
      case Outcome::Kind::Exhausted:
        ++e.exhausted;
        break;
      case Outcome::Kind::StuckNormal:
        ++e.stuck;
        break;
    }
  }
  if (e.runs > 0) {
    e.p_hat = static_cast<double>(e.hits) / static_cast<double>(e.runs);
    e.dkw = dkw_bound(e.runs, delta);
  }
  return e;
}

Estimate estimate_mass(const TermPtr& t, const IntervalSet& U, const SimulationConfig& cfg, double delta) {
  auto outcomes = simulate(t, cfg);
  return summarize(outcomes, U, delta);
}

}  // namespace ppcf
