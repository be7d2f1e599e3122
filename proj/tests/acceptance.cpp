// Acceptance checks. Usage: acceptance PATH_TO_PPCF
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sys/wait.h>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "corpus.hpp"
#include "ppcf/harness.hpp"
#include "ppcf/stability.hpp"
#include "soundness.hpp"

using namespace ppcf;
using nlohmann::json;

namespace {

std::string g_cli;

struct Shell {
  std::string out;
  int status = -1;
};

Shell sh(const std::string& args) {
  Shell r;
  std::string cmd = "'" + g_cli + "' " + args;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  int st = pclose(p);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

double Phi(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// P(u1 + u2 + u3 <= s) by discrete convolution of n-bin uniform histograms.
double irwin_hall3_cdf(double s, std::size_t bins) {
  std::vector<double> one(bins, 1.0 / bins), acc = one;
  for (int k = 1; k < 3; ++k) {
    std::vector<double> next(acc.size() + bins - 1, 0.0);
    for (std::size_t i = 0; i < acc.size(); ++i)
      for (std::size_t j = 0; j < bins; ++j) next[i + j] += acc[i] * one[j];
    acc = std::move(next);
  }
  // Bin i of the triple sum has its center at (i + 1.5) / bins.
  double total = 0.0;
  for (std::size_t i = 0; i < acc.size(); ++i)
    if ((i + 1.5) / bins <= s) total += acc[i];
  return total;
}

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

int g_failures = 0;

void criterion(int id, const char* title, double time_limit, const std::function<void(Verdict&)>& body) {
  Verdict v;
  auto t0 = std::chrono::steady_clock::now();
  try {
    body(v);
  } catch (const std::exception& e) {
    v.pass = false;
    v.detail << " [exception: " << e.what() << "]";
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (time_limit > 0 && secs > time_limit) {
    v.pass = false;
    v.detail << " [runtime " << secs << " s exceeds " << time_limit << " s]";
  }
  if (!v.pass) ++g_failures;
  std::printf("AC%d %s  %s (%.2f s) %s\n", id, v.pass ? "PASS" : "FAIL", title, secs, v.detail.str().c_str());
  std::fflush(stdout);
}

double mass_of(const json& denote, std::size_t i) { return denote["intervals"][i]["mass"].get<double>(); }

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: acceptance PATH_TO_PPCF\n";
    return 2;
  }
  g_cli = argv[1];

  criterion(1, "Dirac arithmetic: [[3 + 2]] = delta_5", 1.0, [](Verdict& v) {
    auto r = sh("denote '3 + 2' --intervals '{5}; (-inf,5) + (5,inf)'");
    v.require(r.status == 0, "exit status");
    auto j = json::parse(r.out);
    v.detail << "mass{5}=" << mass_of(j, 0) << " mass(R\\{5})=" << mass_of(j, 1);
    v.require(mass_of(j, 0) == 1.0, "mass on {5} is exactly 1");
    v.require(mass_of(j, 1) == 0.0, "mass off {5} is exactly 0");
  });

  criterion(2, "CBN vs let: (fun x -> x = x) sample vs let x = sample in x = x", 5.0, [](Verdict& v) {
    auto a = json::parse(sh("denote '(fun x : real -> x = x) sample' --intervals '{0}'").out);
    auto b = json::parse(sh("denote 'let x = sample in x = x' --intervals '{1}'").out);
    v.detail << "cbn{0}=" << mass_of(a, 0) << " let{1}=" << mass_of(b, 0);
    v.require(mass_of(a, 0) == 1.0, "cbn mass on {0} is 1");
    v.require(mass_of(b, 0) == 1.0, "let mass on {1} is 1");
    SimulationConfig cfg;
    cfg.runs = 10000;
    cfg.budget = 100;
    auto outs = simulate(parse("let x = sample in x = x").main, cfg);
    std::size_t ones = 0;
    for (const auto& o : outs) ones += o.kind == Outcome::Kind::Value && o.value == 1.0;
    v.detail << " runs returning 1: " << ones << "/10000";
    v.require(ones == 10000, "every run returns 1");
  });

  criterion(3, "Bernoulli(0.3): exact masses and adequacy at 1e5 runs", 30.0, [](Verdict& v) {
    auto d = json::parse(sh("denote '#bernoulli(0.3)' --intervals '{0}; {1}'").out);
    v.detail << "mass{0}=" << mass_of(d, 0) << " mass{1}=" << mass_of(d, 1);
    v.require(mass_of(d, 0) == 0.7 && mass_of(d, 1) == 0.3, "masses are (0.7, 0.3)");
    auto r = sh("check '#bernoulli(0.3)' --intervals '{0}; {1}' --runs 100000 --delta 0.01 --seed 1");
    auto j = json::parse(r.out);
    double dkw = j["intervals"][0]["dkw_bound"].get<double>();
    v.detail << " dkw=" << dkw << " empirical{1}=" << j["intervals"][1]["empirical_mass"].get<double>();
    v.require(std::fabs(dkw - 0.0052) < 1e-4, "DKW bound near 0.0052");
    v.require(r.status == 0 && j["pass"].get<bool>(), "adequacy check passes");
  });

  criterion(4, "Exponential and Box-Muller normal: 20-point CDFs and adequacy", 120.0, [](Verdict& v) {
    double worst = 0.0;
    auto e = json::parse(sh("denote '#exponential' --cdf 0:4:19").out);
    for (std::size_t i = 0; i < 20; ++i) {
      double x = 4.0 * i / 19;
      worst = std::max(worst, std::fabs(mass_of(e, i) - (1 - std::exp(-x))));
    }
    auto n = json::parse(sh("denote '#normal' --cdf -3:3:19").out);
    for (std::size_t i = 0; i < 20; ++i) {
      double x = -3.0 + 6.0 * i / 19;
      worst = std::max(worst, std::fabs(mass_of(n, i) - Phi(x)));
    }
    v.detail << "max CDF error " << worst;
    v.require(e["intervals"].size() == 20 && n["intervals"].size() == 20, "20 grid points each");
    v.require(worst <= 1e-6, "CDF within 1e-6");
    auto ce = sh("check '#exponential' --cdf 0:4:19 --runs 100000 --seed 2");
    auto cn = sh("check '#normal' --cdf -3:3:19 --runs 100000 --seed 3");
    v.require(ce.status == 0, "exponential adequacy");
    v.require(cn.status == 0, "normal adequacy");
  });

  criterion(5, "Conditioning: observe [0,0.5] sample, and observe on a null set", 0, [](Verdict& v) {
    auto d = json::parse(sh("denote '#observe[[0,0.5]](sample)' --intervals '[0,0.25]'").out);
    double m = mass_of(d, 0);
    v.detail << "mass[0,0.25]=" << m;
    v.require(std::fabs(m - 0.5) <= 1e-6, "conditional mass 0.5 +- 1e-6");
    auto z = json::parse(sh("denote '#observe[[2,3]](sample)' --intervals 'R'").out);
    double z_total = z["total_mass"].get<double>();
    v.detail << " null-set total mass=" << z_total;
    v.require(z_total == 0.0 && mass_of(z, 0) == 0.0, "zero measure");
    auto r = json::parse(sh("run '#observe[[2,3]](sample)' --runs 1000 --budget 2000").out);
    double ex = r["exhausted"].get<double>() / r["runs"].get<double>();
    v.detail << " exhausted=" << ex;
    v.require(ex >= 0.99, "at least 99% of runs exhaust");
  });

  criterion(6, "Monte-Carlo expectation_3 of the identity over sample", 0, [](Verdict& v) {
    auto d = json::parse(
        sh("denote '#expectation_3(fun x : real -> x, sample)' --intervals '[0,0.5]; [0,0.3333333333333333]'").out);
    double oracle = irwin_hall3_cdf(1.0, 1000);
    v.detail << "mass[0,0.5]=" << mass_of(d, 0) << " mass[0,1/3]=" << mass_of(d, 1) << " oracle=" << oracle;
    v.require(std::fabs(mass_of(d, 0) - 0.5) <= 1e-4, "symmetry");
    v.require(std::fabs(mass_of(d, 1) - oracle) <= 1e-4, "convolution oracle");
  });

  criterion(7, "Soundness: deterministic steps and the sample integral identity", 0, [](Verdict& v) {
    testing::SoundnessConfig cfg;
    testing::SoundnessTally tally;
    std::size_t terms = 0;
    for (auto src : testing::kCorpus) {
      testing::check_soundness(parse(src).main, cfg, tally);
      ++terms;
    }
    v.detail << terms << " terms, " << tally.det_checks << " deterministic checks (max gap " << tally.max_det_gap
             << " <= " << cfg.det_tol << "), " << tally.sample_checks << " sample checks (max gap "
             << tally.max_sample_gap << " <= " << cfg.sample_tol << ")";
    v.require(terms >= 50, "at least 50 terms");
    for (const auto& f : tally.failures) v.require(false, f);
  });

  criterion(8, "Stability: wpor witness, absolutely monotone passes, Delta paths agree", 60.0, [](Verdict& v) {
    StabilityOptions opt;
    opt.max_recorded = 1u << 24;
    auto w = check_pre_stable(wpor(), 1, 8, opt);
    bool witness = false;
    for (const auto& x : w.violations)
      if (x.x == Point{0, 0} && x.us == std::vector<Point>{{0.5, 0.5}, {0.5, 0.5}})
        witness = std::fabs(x.minus - 1.5) < 1e-12 && std::fabs(x.plus - 1.0) < 1e-12;
    v.detail << "wpor violations=" << w.violation_count;
    v.require(!w.pass() && witness, "wpor rejected at n=1 with minus 1.5 > plus 1");
    for (std::size_t n = 0; n <= 4; ++n) {
      v.require(check_pre_stable(identity_fn(), n, 8).pass(), "identity n=" + std::to_string(n));
      v.require(check_pre_stable(polynomial({0, 0, 0.5, 0.3}), n, 8).pass(), "0.5x^2+0.3x^3 n=" + std::to_string(n));
    }
    std::mt19937_64 gen(2718);
    std::uniform_real_distribution<double> u(0, 1);
    double worst = 0;
    for (int q = 0; q < 10000; ++q) {
      PointFn f = q % 2 ? wpor() : PointFn{2, [](std::span<const double> x) { return std::exp(x[0]) * x[1]; }, "e^x y"};
      std::size_t n = 1 + q % 4;
      Point x = {u(gen) * 0.5, u(gen) * 0.5};
      std::vector<Point> us(n, Point(2));
      for (auto& inc : us)
        for (std::size_t j = 0; j < 2; ++j) inc[j] = u(gen) * (0.5 / n);
      double rec = iterated_delta(f, x, us);
      double sig = delta_signed(f, x, us, Sign::Plus) - delta_signed(f, x, us, Sign::Minus);
      worst = std::max(worst, std::fabs(rec - sig));
    }
    v.detail << " max path gap=" << worst;
    v.require(worst <= 1e-10, "paths agree within 1e-10");
  });

  criterion(9, "Reproducibility: ppcf check twice with one seed", 0, [](Verdict& v) {
    const std::string args = "check '#observe[[0,0.5]](#exponential)' --cdf 0:0.5:4 --runs 20000 --seed 42";
    auto a = sh(args), b = sh(args);
    v.detail << a.out.size() << " bytes";
    v.require(!a.out.empty() && a.out == b.out, "byte-identical JSON");
  });

  return g_failures == 0 ? 0 : 1;
}
