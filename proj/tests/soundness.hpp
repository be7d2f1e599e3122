#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "ppcf/denotational.hpp"
#include "ppcf/operational.hpp"
#include "ppcf/pretty.hpp"
#include "ppcf/quadrature.hpp"

namespace ppcf::testing {

inline std::vector<IntervalSet> soundness_probes() {
  return {IntervalSet::real_line(), IntervalSet::at_most(0.0),       IntervalSet::at_most(0.5),
          IntervalSet::at_most(1.0), IntervalSet::point(0),          IntervalSet::point(1),
          IntervalSet::closed(0.25, 0.75), IntervalSet({{2, IntervalSet::kInf, true, false}})};
}

struct SoundnessConfig {
  DenotationConfig denotation;
  /// Outer quadrature over r in the sample identity.
  QuadratureConfig outer;
  double det_tol = 2e-6;
  double sample_tol = 1e-6;
  std::size_t max_steps = 8;
  std::size_t max_sample_steps = 2;
  std::uint64_t seed = 7;

  SoundnessConfig() {
    denotation.fix.mass_tol = 1e-8;
    outer.abs_tol = 1e-7;
    outer.rel_tol = 1e-9;
  }
};

struct SoundnessTally {
  std::size_t det_checks = 0;
  std::size_t sample_checks = 0;
  double max_det_gap = 0.0;
  double max_sample_gap = 0.0;
  std::vector<std::string> failures;
};

inline Interpreter soundness_interpreter(const SoundnessConfig& cfg) {
  DenotationConfig dc = cfg.denotation;
  dc.fix.probe_sets = soundness_probes();
  return Interpreter(dc);
}

inline std::vector<double> probe_masses(const TermPtr& t, Interpreter& interp) {
  Measure m = interp.denote(t);
  std::vector<double> out;
  for (const auto& U : soundness_probes()) out.push_back(m.mass(U, interp.config().quadrature));
  return out;
}

inline std::vector<double> probe_masses(const TermPtr& t, const SoundnessConfig& cfg) {
  Interpreter interp = soundness_interpreter(cfg);
  return probe_masses(t, interp);
}

/// Walks one seeded reduction of `t`. Deterministic steps must preserve every
/// probe mass; sample steps must satisfy
///   [[E[sample]]](U) = ∫_0^1 [[E[r]]](U) dr.
inline void check_soundness(const TermPtr& t, const SoundnessConfig& cfg, SoundnessTally& tally) {
  RngStream rng(cfg.seed, 0);
  TermPtr cur = t;
  std::vector<double> cur_masses = probe_masses(cur, cfg);
  std::size_t sample_steps = 0;
  auto probes = soundness_probes();
  for (std::size_t i = 0; i < cfg.max_steps; ++i) {
    Decomposition d = decompose(cur);
    if (d.normal_form) break;
    if (d.kind == RedexKind::Sample) {
      if (sample_steps++ < cfg.max_sample_steps) {
        // One interpreter for every r: closed subterms of the context, such
        // as an unrolled fix, are then solved once.
        Interpreter interp = soundness_interpreter(cfg);
        std::map<double, std::vector<double>> memo;
        auto at = [&](double r) -> const std::vector<double>& {
          auto it = memo.find(r);
          if (it == memo.end()) it = memo.emplace(r, probe_masses(d.context.plug(Term::numeral(r)), interp)).first;
          return it->second;
        };
        for (std::size_t k = 0; k < probes.size(); ++k) {
          double integral = adaptive_simpson([&](double r) { return at(r)[k]; }, 0.0, 1.0, cfg.outer).value;
          double gap = std::fabs(integral - cur_masses[k]);
          ++tally.sample_checks;
          tally.max_sample_gap = std::max(tally.max_sample_gap, gap);
          if (gap > cfg.sample_tol)
            tally.failures.push_back("sample step of `" + pretty(*cur) + "` on " + probes[k].to_string() +
                                     ": " + std::to_string(cur_masses[k]) + " vs " + std::to_string(integral));
        }
      }
      cur = step(cur, rng);
      cur_masses = probe_masses(cur, cfg);
      continue;
    }
    TermPtr next = step(cur, rng);
    std::vector<double> next_masses = probe_masses(next, cfg);
    for (std::size_t k = 0; k < probes.size(); ++k) {
      double gap = std::fabs(next_masses[k] - cur_masses[k]);
      ++tally.det_checks;
      tally.max_det_gap = std::max(tally.max_det_gap, gap);
      if (gap > cfg.det_tol)
        tally.failures.push_back("step `" + pretty(*cur) + "` -> `" + pretty(*next) + "` on " +
                                 probes[k].to_string() + ": " + std::to_string(cur_masses[k]) + " vs " +
                                 std::to_string(next_masses[k]));
    }
    cur = std::move(next);
    cur_masses = std::move(next_masses);
  }
}

}  // namespace ppcf::testing
