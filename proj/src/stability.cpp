#include "ppcf/stability.hpp"

#include <bit>
#include <cmath>
#include <random>

#include "ppcf/error.hpp"

namespace ppcf {

PointFn wpor() {
  return {2, [](std::span<const double> x) { return x[0] + x[1] - x[0] * x[1]; }, "wpor"};
}

PointFn identity_fn() {
  return {1, [](std::span<const double> x) { return x[0]; }, "identity"};
}

PointFn polynomial(std::vector<double> coeffs) {
  std::string label = "poly(";
  for (std::size_t i = 0; i < coeffs.size(); ++i) label += (i ? ", " : "") + std::to_string(coeffs[i]);
  label += ")";
  return {1,
          [coeffs = std::move(coeffs)](std::span<const double> x) {
            double acc = 0.0;
            for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x[0] + *it;
            return acc;
          },
          std::move(label)};
}

PointFn combine(double alpha, const PointFn& f, double beta, const PointFn& g) {
  if (f.k != g.k) throw DomainError("combine: dimension mismatch");
  return {f.k, [alpha, beta, f, g](std::span<const double> x) { return alpha * f(x) + beta * g(x); },
          std::to_string(alpha) + "*" + f.label + " + " + std::to_string(beta) + "*" + g.label};
}

namespace {

constexpr double kCubeTol = 1e-12;

void check_domain(const PointFn& f, std::span<const double> x, std::span<const Point> us) {
  if (x.size() != f.k) throw DomainError("point has dimension " + std::to_string(x.size()) + ", expected " +
                                         std::to_string(f.k));
  for (std::size_t j = 0; j < f.k; ++j) {
    double top = x[j];
    for (const auto& u : us) {
      if (u.size() != f.k) throw DomainError("increment has the wrong dimension");
      if (u[j] < 0.0) throw DomainError("increments must be nonnegative");
      top += u[j];
    }
    if (x[j] < -kCubeTol || top > 1.0 + kCubeTol)
      throw DomainError("point leaves the unit cube in coordinate " + std::to_string(j));
  }
}

}  // namespace

double delta_signed(const PointFn& f, std::span<const double> x, std::span<const Point> us, Sign sign) {
  check_domain(f, x, us);
  const std::size_t n = us.size();
  const std::size_t want = sign == Sign::Plus ? 0 : 1;
  double total = 0.0;
  Point y(f.k);
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    std::size_t size = static_cast<std::size_t>(std::popcount(mask));
    if ((n - size) % 2 != want) continue;
    for (std::size_t j = 0; j < f.k; ++j) {
      y[j] = x[j];
      for (std::size_t i = 0; i < n; ++i) {
        if ((mask >> i) & 1) y[j] += us[i][j];
      }
    }
    total += f(y);
  }
  return total;
}

namespace {

double iterated_rec(const PointFn& f, const Point& x, std::span<const Point> us, std::size_t i) {
  if (i == 0) return f(x);
  Point shifted = x;
  for (std::size_t j = 0; j < x.size(); ++j) shifted[j] += us[i - 1][j];
  return iterated_rec(f, shifted, us, i - 1) - iterated_rec(f, x, us, i - 1);
}

}  // namespace

double iterated_delta(const PointFn& f, std::span<const double> x, std::span<const Point> us) {
  check_domain(f, x, us);
  return iterated_rec(f, Point(x.begin(), x.end()), us, us.size());
}

namespace {

using Units = std::vector<int>;

class GridChecker {
 public:
  GridChecker(const PointFn& f, std::size_t n, std::size_t grid, const StabilityOptions& opt, StabilityReport& rep)
      : f_(f), n_(n), grid_(static_cast<int>(grid)), opt_(opt), rep_(rep) {
    // All nonzero increment vectors with entries in 0..grid.
    Units u(f.k, 0);
    for (;;) {
      std::size_t j = 0;
      while (j < f.k && u[j] == grid_) u[j++] = 0;
      if (j == f.k) break;
      ++u[j];
      increments_.push_back(u);
    }
  }

  void exhaustive() {
    Units x(f_.k, 0);
    for (;;) {
      std::vector<std::size_t> chosen;
      Units room(f_.k);
      for (std::size_t j = 0; j < f_.k; ++j) room[j] = grid_ - x[j];
      extend(x, chosen, room, 0);
      std::size_t j = 0;
      while (j < f_.k && x[j] == grid_) x[j++] = 0;
      if (j == f_.k) break;
      ++x[j];
    }
  }

  void sampled() {
    std::mt19937_64 rng(opt_.seed);
    std::uniform_int_distribution<int> coord(0, grid_);
    std::uniform_int_distribution<std::size_t> len(1, n_ + 1);
    std::uniform_int_distribution<std::size_t> pick(0, increments_.size() - 1);
    for (std::size_t s = 0; s < opt_.samples; ++s) {
      Units x(f_.k);
      for (auto& c : x) c = coord(rng);
      std::size_t m = len(rng);
      std::vector<std::size_t> chosen;
      Units top = x;
      for (std::size_t i = 0; i < m; ++i) {
        const Units& u = increments_[pick(rng)];
        bool fits = true;
        for (std::size_t j = 0; j < f_.k; ++j) fits = fits && top[j] + u[j] <= grid_;
        if (!fits) break;
        for (std::size_t j = 0; j < f_.k; ++j) top[j] += u[j];
        chosen.push_back(&u - increments_.data());
      }
      if (!chosen.empty()) test(x, chosen);
    }
  }

 private:
  void extend(const Units& x, std::vector<std::size_t>& chosen, Units& room, std::size_t from) {
    if (chosen.size() == n_ + 1) return;
    for (std::size_t i = from; i < increments_.size(); ++i) {
      const Units& u = increments_[i];
      bool fits = true;
      for (std::size_t j = 0; j < f_.k; ++j) fits = fits && u[j] <= room[j];
      if (!fits) continue;
      for (std::size_t j = 0; j < f_.k; ++j) room[j] -= u[j];
      chosen.push_back(i);
      test(x, chosen);
      extend(x, chosen, room, i);
      chosen.pop_back();
      for (std::size_t j = 0; j < f_.k; ++j) room[j] += u[j];
    }
  }

  Point to_point(const Units& u) const {
    Point p(u.size());
    for (std::size_t j = 0; j < u.size(); ++j) p[j] = static_cast<double>(u[j]) / grid_;
    return p;
  }

  void test(const Units& x, const std::vector<std::size_t>& chosen) {
    Point px = to_point(x);
    std::vector<Point> us;
    us.reserve(chosen.size());
    for (std::size_t i : chosen) us.push_back(to_point(increments_[i]));
    double minus = delta_signed(f_, px, us, Sign::Minus);
    double plus = delta_signed(f_, px, us, Sign::Plus);
    ++rep_.checked;
    if (minus > plus + opt_.slack) {
      ++rep_.violation_count;
      if (rep_.violations.size() < opt_.max_recorded) rep_.violations.push_back({px, std::move(us), minus, plus});
    }
  }

  const PointFn& f_;
  std::size_t n_;
  int grid_;
  const StabilityOptions& opt_;
  StabilityReport& rep_;
  std::vector<Units> increments_;
};

}  // namespace

StabilityReport check_pre_stable(const PointFn& f, std::size_t n, std::size_t grid, const StabilityOptions& options) {
  if (grid < 2) throw DomainError("grid resolution must be at least 2");
  if (f.k == 0) throw DomainError("function of dimension 0");
  StabilityReport rep;
  rep.n = n;
  rep.grid = grid;
  rep.slack = options.slack;
  GridChecker checker(f, n, grid, options, rep);
  rep.exhaustive = f.k == 1 || (f.k == 2 && n <= 3);
  if (rep.exhaustive) checker.exhaustive();
  else checker.sampled();
  return rep;
}

}  // namespace ppcf
