// Command-line front end: parse, typecheck, run, denote, check, stability.

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "ppcf/error.hpp"
#include "ppcf/harness.hpp"
#include "ppcf/pretty.hpp"
#include "ppcf/stability.hpp"
#include "ppcf/sugar.hpp"

using namespace ppcf;
using nlohmann::ordered_json;

namespace {

struct Common {
  std::string file;
  std::string intervals;
  std::string cdf;
  std::size_t runs = 100000;
  std::size_t run_runs = 1;
  std::size_t budget = 10000;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  double delta = 0.01;
  bool bonferroni = false;
  std::string format = "json";
  std::string fault;
  double abs_tol = 1e-9;
  double mass_tol = 1e-6;
  std::size_t max_iters = 10000;
};

std::uint64_t effective_seed(std::uint64_t seed) {
  if (const char* env = std::getenv("PPCF_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw Error(std::string("PPCF_SEED is not an unsigned integer: ") + env);
    }
  }
  return seed;
}

std::vector<IntervalSet> query_sets(const Common& c) {
  if (!c.intervals.empty() && !c.cdf.empty()) throw Error("give either --intervals or --cdf, not both");
  if (!c.cdf.empty()) return parse_cdf_spec(c.cdf);
  if (!c.intervals.empty()) return parse_interval_list(c.intervals);
  return {};
}

SourceProgram load(const Common& c) { return parse(read_source(c.file)); }

int cmd_parse(const Common& c) {
  SourceProgram p = load(c);
  for (const auto& [name, body] : p.definitions) std::cout << "def " << name << " = " << pretty(*body) << ";\n";
  std::cout << pretty(*p.main) << "\n";
  return 0;
}

int cmd_typecheck(const Common& c) {
  SourceProgram p = load(c);
  std::cout << typecheck(*p.main).to_string() << "\n";
  return 0;
}

int cmd_run(const Common& c) {
  SourceProgram p = load(c);
  Type t = typecheck(*p.main);
  if (!t.is_real()) throw TypeError("run expects a program of type real, got " + t.to_string(), pretty(*p.main));
  SimulationConfig cfg;
  cfg.runs = c.run_runs;
  cfg.budget = c.budget;
  cfg.seed = effective_seed(c.seed);
  cfg.threads = c.threads;
  if (c.fault == "plus-to-minus") cfg.step = plus_as_minus();
  auto outcomes = simulate(p.main, cfg);

  std::size_t values = 0, stuck = 0, exhausted = 0, steps = 0;
  double sum = 0.0;
  ordered_json shown = ordered_json::array();
  for (const auto& o : outcomes) {
    steps += o.steps;
    switch (o.kind) {
      case Outcome::Kind::Value:
        ++values;
        sum += o.value;
        if (shown.size() < 20) shown.push_back(o.value);
        break;
      case Outcome::Kind::StuckNormal:
        ++stuck;
        if (shown.size() < 20) shown.push_back(pretty(*o.term));
        break;
      case Outcome::Kind::Exhausted:
        ++exhausted;
        if (shown.size() < 20) shown.push_back(nullptr);
        break;
    }
  }
  ordered_json j;
  j["runs"] = cfg.runs;
  j["budget"] = c.budget;
  j["seed"] = cfg.seed;
  j["values"] = values;
  j["stuck"] = stuck;
  j["exhausted"] = exhausted;
  j["mean_value"] = values ? ordered_json(sum / static_cast<double>(values)) : ordered_json(nullptr);
  j["mean_steps"] = static_cast<double>(steps) / static_cast<double>(cfg.runs);
  j["first_outcomes"] = std::move(shown);
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_denote(const Common& c) {
  SourceProgram p = load(c);
  DenotationConfig dcfg;
  dcfg.quadrature.abs_tol = c.abs_tol;
  dcfg.fix.mass_tol = c.mass_tol;
  dcfg.fix.max_iters = c.max_iters;
  auto sets = query_sets(c);
  dcfg.fix.probe_sets = sets;
  Interpreter interp(dcfg);
  Measure m = interp.denote(p.main);
  ordered_json j;
  j["term"] = pretty(*p.main);
  j["measure"] = m.describe();
  j["total_mass"] = m.total_mass(dcfg.quadrature);
  ordered_json rows = ordered_json::array();
  for (const auto& U : sets) rows.push_back({{"U", U.to_string()}, {"mass", m.mass(U, dcfg.quadrature)}});
  j["intervals"] = std::move(rows);
  j["fixpoint_iterations"] = interp.fix_iterations();
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_check(const Common& c) {
  SourceProgram p = load(c);
  AdequacyConfig cfg;
  cfg.intervals = query_sets(c);
  if (cfg.intervals.empty()) throw Error("check needs --intervals or --cdf");
  cfg.runs = c.runs;
  cfg.budget = c.budget;
  cfg.seed = effective_seed(c.seed);
  cfg.threads = c.threads;
  cfg.delta = c.delta;
  cfg.bonferroni = c.bonferroni;
  cfg.quadrature.abs_tol = c.abs_tol;
  cfg.fix.mass_tol = c.mass_tol;
  cfg.fix.max_iters = c.max_iters;
  if (c.fault == "plus-to-minus") cfg.operational = plus_as_minus();
  AdequacyReport r = adequacy_check(p, cfg);
  std::cout << (c.format == "csv" ? report_csv(r) : report_json(r));
  return r.pass ? 0 : 1;
}

// A term with free real variables as a function on the cube; variables are
// the dimensions in sorted order.
PointFn term_function(const std::string& text) {
  TermPtr surface = parse_term(text);
  TypingContext ctx;
  for (const auto& v : surface->free_vars()) ctx = ctx.extend(v, Type::real());
  TermPtr t = expand_sugar(surface, ctx);
  Type ty = typecheck(ctx, *t);
  if (!ty.is_real()) throw TypeError("--fn expects a term of type real, got " + ty.to_string(), text);
  std::vector<std::string> vars = t->free_vars();
  if (vars.empty()) throw Error("--fn term has no free variables");
  return {vars.size(),
          [t, vars](std::span<const double> x) {
            TermPtr s = t;
            for (std::size_t i = 0; i < vars.size(); ++i) s = substitute(s, vars[i], Term::numeral(x[i]));
            RngStream rng(0, 0);
            Outcome o = run(s, 100000, rng);
            if (o.kind != Outcome::Kind::Value) throw DomainError("--fn term did not evaluate to a number");
            return o.value;
          },
          text};
}

int cmd_stability(const std::string& which, const std::string& fn, const std::vector<double>& coeffs,
                  std::size_t n, std::size_t grid, double slack, std::size_t samples) {
  PointFn f;
  if (!fn.empty()) f = term_function(fn);
  else if (which == "wpor") f = wpor();
  else if (which == "identity") f = identity_fn();
  else if (which == "poly") f = polynomial(coeffs);
  else throw Error("unknown function `" + which + "` (expected wpor, poly, identity or --fn)");
  StabilityOptions opt;
  opt.slack = slack;
  opt.samples = samples;
  StabilityReport r = check_pre_stable(f, n, grid, opt);

  ordered_json j;
  j["function"] = f.label;
  j["k"] = f.k;
  j["n"] = r.n;
  j["grid"] = r.grid;
  j["slack"] = r.slack;
  j["exhaustive"] = r.exhaustive;
  j["checked"] = r.checked;
  j["violation_count"] = r.violation_count;
  j["pass"] = r.pass();
  ordered_json vs = ordered_json::array();
  for (std::size_t i = 0; i < r.violations.size() && i < 10; ++i) {
    const auto& v = r.violations[i];
    vs.push_back({{"x", v.x}, {"u", v.us}, {"delta_minus", v.minus}, {"delta_plus", v.plus}});
  }
  j["violations"] = std::move(vs);
  std::cout << j.dump(2) << "\n";
  return r.pass() ? 0 : 1;
}

void add_denotation_flags(CLI::App* sub, Common& c) {
  sub->add_option("--abs-tol", c.abs_tol, "quadrature absolute tolerance");
  sub->add_option("--mass-tol", c.mass_tol, "fixpoint convergence tolerance");
  sub->add_option("--max-iters", c.max_iters, "fixpoint iteration cap");
}

void add_query_flags(CLI::App* sub, Common& c) {
  sub->add_option("--intervals", c.intervals, "sets separated by ';', e.g. \"[0,1); {2}\"");
  sub->add_option("--cdf", c.cdf, "CDF grid lo:hi:steps");
}

void add_sim_flags(CLI::App* sub, Common& c, std::size_t& runs) {
  sub->add_option("--runs", runs, "number of runs")->check(CLI::PositiveNumber);
  sub->add_option("--budget", c.budget, "reduction steps per run");
  sub->add_option("--seed", c.seed, "seed (PPCF_SEED overrides)");
  sub->add_option("--threads", c.threads, "worker threads");
  sub->add_option("--inject-fault", c.fault, "negative control: plus-to-minus")
      ->check(CLI::IsMember({"plus-to-minus"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PPCF: operational and denotational semantics of probabilistic PCF"};
  app.require_subcommand(1);
  Common c;
  const char* file_help = "program path, '-' for stdin, or inline source";

  auto* p = app.add_subcommand("parse", "parse and pretty-print a program");
  p->add_option("FILE", c.file, file_help)->required();
  auto* tc = app.add_subcommand("typecheck", "print the type of a program");
  tc->add_option("FILE", c.file, file_help)->required();

  auto* r = app.add_subcommand("run", "sample the operational semantics");
  r->add_option("FILE", c.file, file_help)->required();
  add_sim_flags(r, c, c.run_runs);

  auto* d = app.add_subcommand("denote", "masses of the denotation");
  d->add_option("FILE", c.file, file_help)->required();
  add_query_flags(d, c);
  add_denotation_flags(d, c);

  auto* ch = app.add_subcommand("check", "adequacy check: denotation against sampling");
  ch->add_option("FILE", c.file, file_help)->required();
  add_query_flags(ch, c);
  add_sim_flags(ch, c, c.runs);
  add_denotation_flags(ch, c);
  ch->add_option("--delta", c.delta, "confidence parameter")->check(CLI::Range(1e-12, 1.0 - 1e-12));
  ch->add_flag("--bonferroni", c.bonferroni, "simultaneous DKW bound over all intervals");
  ch->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  std::string which, fn;
  std::vector<double> coeffs{0.0, 0.0, 0.5, 0.3};
  std::size_t n = 1, grid = 8, samples = 200000;
  double slack = 1e-9;
  auto* st = app.add_subcommand("stability", "grid check of n-pre-stability on [0,1]^k");
  st->add_option("FUNCTION", which, "wpor, poly or identity");
  st->add_option("--fn", fn, "PPCF term; its free variables are the coordinates");
  st->add_option("--coeffs", coeffs, "poly coefficients, constant term first")->delimiter(',');
  st->add_option("--n", n, "order");
  st->add_option("--grid", grid, "grid resolution per axis")->check(CLI::Range(2, 1000));
  st->add_option("--slack", slack, "tolerance on Δ⁻ <= Δ⁺");
  st->add_option("--samples", samples, "queries when not exhaustive");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*p) return cmd_parse(c);
    if (*tc) return cmd_typecheck(c);
    if (*r) return cmd_run(c);
    if (*d) return cmd_denote(c);
    if (*ch) return cmd_check(c);
    if (*st) return cmd_stability(which, fn, coeffs, n, grid, slack, samples);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
