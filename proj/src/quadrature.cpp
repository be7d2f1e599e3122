#include "ppcf/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>
#include <vector>

#include "ppcf/error.hpp"
#include "ppcf/interval_set.hpp"

namespace ppcf {

QuadratureConfig QuadratureConfig::nested() const {
  QuadratureConfig c = *this;
  c.abs_tol = std::max(abs_tol * 0.5, 1e-13);
  c.rel_tol = std::max(rel_tol * 0.5, 1e-14);
  return c;
}

namespace {

struct Cell {
  double a, m, b;
  double fa, fm, fb;
  double coarse;  // Simpson on [a, b]
  double fine;    // Simpson on both halves
  double flm, frm;
  double err;
  int depth;

  double value() const { return fine + (fine - coarse) / 15.0; }
  bool operator<(const Cell& o) const { return err < o.err; }
};

double simpson(double a, double b, double fa, double fm, double fb) {
  return (b - a) * (fa + 4.0 * fm + fb) / 6.0;
}

class Integrator {
 public:
  Integrator(const std::function<double(double)>& g, const QuadratureConfig& cfg) : g_(g), cfg_(cfg) {}

  double eval(double x) {
    ++evals_;
    double v = g_(x);
    if (std::isnan(v)) throw QuadratureFailure("integrand is NaN at " + format_real(x));
    return v;
  }

  Cell make(double a, double b, double fa, double fm, double fb, int depth) {
    Cell c{};
    c.a = a;
    c.b = b;
    c.m = 0.5 * (a + b);
    c.fa = fa;
    c.fm = fm;
    c.fb = fb;
    c.depth = depth;
    c.flm = eval(0.5 * (a + c.m));
    c.frm = eval(0.5 * (c.m + b));
    c.coarse = simpson(a, b, fa, fm, fb);
    c.fine = simpson(a, c.m, fa, c.flm, fm) + simpson(c.m, b, fm, c.frm, fb);
    // Not divided by 15: a jump at a cell endpoint makes the Richardson
    // estimate 14x optimistic.
    c.err = std::abs(c.fine - c.coarse);
    return c;
  }

  // At a mark each adjacent cell takes the one-sided value from its own
  // side, one ulp inward, so a jump there costs no refinement.
  QuadratureResult run(std::vector<double> cuts, const std::vector<double>& marks) {
    std::priority_queue<Cell> heap;
    auto is_mark = [&](double x) { return std::binary_search(marks.begin(), marks.end(), x); };
    std::vector<double> fcuts;
    fcuts.reserve(cuts.size());
    for (double x : cuts) fcuts.push_back(is_mark(x) ? 0.0 : eval(x));
    double total = 0.0, err = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      double a = cuts[i], b = cuts[i + 1];
      double fa = is_mark(a) ? eval(std::nextafter(a, b)) : fcuts[i];
      double fb = is_mark(b) ? eval(std::nextafter(b, a)) : fcuts[i + 1];
      Cell c = make(a, b, fa, eval(0.5 * (a + b)), fb, 0);
      total += c.value();
      err += c.err;
      heap.push(c);
    }
    for (;;) {
      double tol = std::max(cfg_.abs_tol, cfg_.rel_tol * std::abs(total));
      if (err <= tol) {
        // Re-sum to shed accumulated rounding in the running totals.
        auto copy = heap;
        total = err = 0.0;
        while (!copy.empty()) {
          total += copy.top().value();
          err += copy.top().err;
          copy.pop();
        }
        if (err <= std::max(cfg_.abs_tol, cfg_.rel_tol * std::abs(total))) break;
      }
      Cell c = heap.top();
      if (c.err == 0.0) break;
      if (c.depth >= cfg_.max_depth) {
        throw QuadratureFailure("adaptive Simpson reached depth " + std::to_string(cfg_.max_depth) +
                                " near " + format_real(c.m) + " (error estimate " + format_real(err) + ")");
      }
      if (heap.size() >= cfg_.max_cells) {
        throw QuadratureFailure("adaptive Simpson exceeded " + std::to_string(cfg_.max_cells) + " cells");
      }
      heap.pop();
      total -= c.value();
      err -= c.err;
      Cell l = make(c.a, c.m, c.fa, c.flm, c.fm, c.depth + 1);
      Cell r = make(c.m, c.b, c.fm, c.frm, c.fb, c.depth + 1);
      total += l.value() + r.value();
      err += l.err + r.err;
      heap.push(l);
      heap.push(r);
    }
    return {total, err, evals_};
  }

 private:
  const std::function<double(double)>& g_;
  const QuadratureConfig& cfg_;
  std::size_t evals_ = 0;
};

}  // namespace

QuadratureResult adaptive_simpson(const std::function<double(double)>& g, double a, double b,
                                  const QuadratureConfig& cfg, std::span<const double> breakpoints) {
  a = std::max(a, cfg.truncation_lo);
  b = std::min(b, cfg.truncation_hi);
  if (!(a < b)) return {};
  std::vector<double> marks{a, b};
  for (double x : breakpoints) {
    if (x > a && x < b) marks.push_back(x);
  }
  std::sort(marks.begin(), marks.end());
  marks.erase(std::unique(marks.begin(), marks.end()), marks.end());

  // Uniform refinement of [a, b] up to min_cells, merged with the marks.
  std::vector<double> cuts = marks;
  std::size_t n = std::max<std::size_t>(cfg.min_cells, 1);
  for (std::size_t i = 1; i < n; ++i) cuts.push_back(a + (b - a) * static_cast<double>(i) / static_cast<double>(n));
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  return Integrator(g, cfg).run(std::move(cuts), marks);
}

}  // namespace ppcf
