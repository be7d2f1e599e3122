#include "ppcf/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include <json.hpp>

#include "ppcf/error.hpp"
#include "ppcf/pretty.hpp"

namespace ppcf {

namespace {

template <class Run>
void capture_failure(AdequacyReport& rep, Run run) {
  try {
    run();
  } catch (const NonConvergent& e) {
    rep.error_kind = "NonConvergent";
    rep.error_message = e.what();
  } catch (const QuadratureFailure& e) {
    rep.error_kind = "QuadratureFailure";
    rep.error_message = e.what();
  } catch (const DimensionLimit& e) {
    rep.error_kind = "DimensionLimit";
    rep.error_message = e.what();
  } catch (const InvariantViolation& e) {
    rep.error_kind = "InvariantViolation";
    rep.error_message = e.what();
  }
}

}  // namespace

AdequacyReport adequacy_check(const SourceProgram& program, const AdequacyConfig& cfg) {
  if (cfg.runs < 1) throw InvariantViolation("adequacy check needs at least one run");
  if (!(cfg.delta > 0.0 && cfg.delta < 1.0)) throw InvariantViolation("confidence delta must be in (0, 1)");
  const TermPtr& main = program.main;
  if (!main->closed()) throw TypeError("program is not closed", pretty(*main));
  Type t = typecheck(*main);
  if (!t.is_real()) throw TypeError("program has type " + t.to_string() + ", expected real", pretty(*main));

  AdequacyReport rep;
  rep.runs = cfg.runs;
  rep.budget = cfg.budget;
  rep.seed = cfg.seed;
  rep.delta = cfg.delta;

  // Denotational side.
  DenotationConfig dcfg;
  dcfg.quadrature = cfg.quadrature;
  dcfg.fix = cfg.fix;
  for (const auto& U : cfg.intervals) dcfg.fix.probe_sets.push_back(U);
  Interpreter interp(dcfg);
  std::vector<std::optional<double>> denot(cfg.intervals.size());
  capture_failure(rep, [&] {
    Measure m = interp.denote(main);
    for (std::size_t i = 0; i < cfg.intervals.size(); ++i) denot[i] = m.mass(cfg.intervals[i], cfg.quadrature);
  });
  rep.runtime_stats.fixpoint_iterations = interp.fix_iterations();

  // Operational side.
  SimulationConfig scfg;
  scfg.runs = cfg.runs;
  scfg.budget = cfg.budget;
  scfg.seed = cfg.seed;
  scfg.threads = cfg.threads;
  scfg.step = cfg.operational;
  std::vector<Outcome> outcomes = simulate(main, scfg);

  for (const auto& o : outcomes) {
    rep.runtime_stats.total_steps += o.steps;
    rep.runtime_stats.max_steps = std::max(rep.runtime_stats.max_steps, o.steps);
  }
  rep.runtime_stats.mean_steps = static_cast<double>(rep.runtime_stats.total_steps) / static_cast<double>(cfg.runs);

  double delta = cfg.delta;
  if (cfg.bonferroni && !cfg.intervals.empty()) delta /= static_cast<double>(cfg.intervals.size());
  double quad_tol = 2.0 * cfg.quadrature.abs_tol + (rep.runtime_stats.fixpoint_iterations > 0 ? cfg.fix.mass_tol : 0.0);

  Estimate none = summarize(outcomes, IntervalSet{}, delta);
  rep.exhausted_fraction = static_cast<double>(none.exhausted) / static_cast<double>(none.runs);
  rep.stuck_fraction = static_cast<double>(none.stuck) / static_cast<double>(none.runs);

  rep.pass = !rep.error_kind.has_value();
  for (std::size_t i = 0; i < cfg.intervals.size(); ++i) {
    Estimate e = summarize(outcomes, cfg.intervals[i], delta);
    IntervalResult r;
    r.U = cfg.intervals[i];
    r.denotational_mass = denot[i];
    r.empirical_mass = e.p_hat;
    r.dkw_bound = e.dkw;
    r.quad_tol = quad_tol;
    r.pass = denot[i].has_value() && std::abs(*denot[i] - e.p_hat) <= e.dkw + quad_tol;
    rep.pass = rep.pass && r.pass;
    rep.intervals.push_back(std::move(r));
  }
  return rep;
}

std::string report_json(const AdequacyReport& r) {
  using nlohmann::ordered_json;
  ordered_json j;
  ordered_json rows = ordered_json::array();
  for (const auto& i : r.intervals) {
    ordered_json row;
    row["U"] = i.U.to_string();
    row["denotational_mass"] = i.denotational_mass ? ordered_json(*i.denotational_mass) : ordered_json(nullptr);
    row["empirical_mass"] = i.empirical_mass;
    row["dkw_bound"] = i.dkw_bound;
    row["quad_tol"] = i.quad_tol;
    row["pass"] = i.pass;
    rows.push_back(std::move(row));
  }
  j["intervals"] = std::move(rows);
  j["pass"] = r.pass;
  j["runtime_stats"] = {{"total_steps", r.runtime_stats.total_steps},
                        {"max_steps", r.runtime_stats.max_steps},
                        {"mean_steps", r.runtime_stats.mean_steps},
                        {"fixpoint_iterations", r.runtime_stats.fixpoint_iterations}};
  j["exhausted_fraction"] = r.exhausted_fraction;
  j["stuck_fraction"] = r.stuck_fraction;
  j["runs"] = r.runs;
  j["budget"] = r.budget;
  j["seed"] = r.seed;
  j["delta"] = r.delta;
  if (r.error_kind) j["error"] = {{"kind", *r.error_kind}, {"message", *r.error_message}};
  else j["error"] = nullptr;
  return j.dump(2) + "\n";
}

std::string report_csv(const AdequacyReport& r) {
  auto num = [](double v) { return format_real(v); };
  std::ostringstream out;
  out << "U,denotational_mass,empirical_mass,dkw_bound,quad_tol,pass\n";
  for (const auto& i : r.intervals) {
    out << '"' << i.U.to_string() << "\"," << (i.denotational_mass ? num(*i.denotational_mass) : "") << ','
        << num(i.empirical_mass) << ',' << num(i.dkw_bound) << ',' << num(i.quad_tol) << ','
        << (i.pass ? "true" : "false") << '\n';
  }
  out << "# pass=" << (r.pass ? "true" : "false") << " exhausted_fraction=" << num(r.exhausted_fraction)
      << " stuck_fraction=" << num(r.stuck_fraction) << " total_steps=" << r.runtime_stats.total_steps
      << " fixpoint_iterations=" << r.runtime_stats.fixpoint_iterations;
  if (r.error_kind) out << " error=" << *r.error_kind;
  out << '\n';
  return out.str();
}

std::vector<IntervalSet> parse_interval_list(std::string_view spec) {
  std::vector<IntervalSet> out;
  std::size_t start = 0;
  while (start <= spec.size()) {
    std::size_t end = spec.find(';', start);
    if (end == std::string_view::npos) end = spec.size();
    std::string_view part = spec.substr(start, end - start);
    if (part.find_first_not_of(" \t\n") != std::string_view::npos) out.push_back(IntervalSet::parse(part));
    start = end + 1;
  }
  return out;
}

std::vector<IntervalSet> cdf_grid(double lo, double hi, std::size_t steps) {
  if (steps == 0 || !(lo < hi)) throw InvariantViolation("cdf grid needs lo < hi and steps >= 1");
  std::vector<IntervalSet> out;
  for (std::size_t i = 0; i <= steps; ++i) {
    double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(steps);
    out.push_back(IntervalSet::at_most(x));
  }
  return out;
}

std::vector<IntervalSet> parse_cdf_spec(std::string_view spec) {
  std::string s(spec);
  std::replace(s.begin(), s.end(), ':', ' ');
  std::istringstream in(s);
  double lo = 0, hi = 0;
  long long steps = 0;
  if (!(in >> lo >> hi >> steps) || steps < 1) {
    throw ParseError(1, 1, "cdf spec must look like lo:hi:steps", {"lo:hi:steps"});
  }
  return cdf_grid(lo, hi, static_cast<std::size_t>(steps));
}

StepOptions plus_as_minus() {
  StepOptions o;
  o.prim_eval = [](const Primitive& f, std::span<const double> xs) {
    if (f.name == "+") return xs[0] - xs[1];
    return f(xs);
  };
  return o;
}

std::string read_source(const std::string& arg) {
  if (arg == "-") {
    return std::string(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
  }
  std::ifstream in(arg, std::ios::binary);
  if (in) return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  return arg;
}

}  // namespace ppcf
