#include <doctest.h>

#include <cmath>
#include <random>

#include "ppcf/error.hpp"
#include "ppcf/stability.hpp"

using namespace ppcf;

namespace {

PointFn product2() {
  return {2, [](std::span<const double> x) { return x[0] * x[1]; }, "xy"};
}
PointFn exp_sum() {
  return {2, [](std::span<const double> x) { return std::exp(x[0] + 2 * x[1]); }, "exp(x+2y)"};
}
PointFn bump() {
  return {1, [](std::span<const double> x) { return std::sin(3 * x[0]); }, "sin 3x"};
}

// Random x in the cube and increments summing to at most 1 - x per axis.
struct Query {
  Point x;
  std::vector<Point> us;
};

Query random_query(std::mt19937_64& gen, std::size_t k, std::size_t n) {
  std::uniform_real_distribution<double> u(0, 1);
  Query q;
  q.x.resize(k);
  q.us.assign(n, Point(k));
  for (std::size_t j = 0; j < k; ++j) {
    q.x[j] = u(gen) * 0.5;
    double room = 1.0 - q.x[j];
    std::vector<double> w(n + 1);
    double s = 0;
    for (auto& wi : w) s += (wi = u(gen));
    for (std::size_t i = 0; i < n; ++i) q.us[i][j] = room * w[i] / s;
  }
  return q;
}

}  // namespace

TEST_CASE("delta examples") {
  auto f = wpor();
  Point x = {0, 0};
  std::vector<Point> us = {{0.5, 0.5}, {0.5, 0.5}};
  CHECK(delta_signed(f, x, us, Sign::Minus) == doctest::Approx(2 * (0.5 + 0.5 - 0.25)));
  CHECK(delta_signed(f, x, us, Sign::Plus) == doctest::Approx(1.0));
  CHECK(iterated_delta(f, x, us) == doctest::Approx(-0.5));

  Point x1 = {0.25};
  std::vector<Point> one = {{0.5}};
  CHECK(iterated_delta(identity_fn(), x1, one) == doctest::Approx(0.5));

  std::vector<Point> neg = {{-0.1}};
  CHECK_THROWS_AS(iterated_delta(identity_fn(), x1, neg), DomainError);
  std::vector<Point> big = {{0.5}, {0.5}};
  CHECK_THROWS_AS(delta_signed(identity_fn(), x1, big, Sign::Plus), DomainError);
}

TEST_CASE("wpor is not 1-pre-stable, with the witness") {
  StabilityOptions opt;
  opt.max_recorded = 1u << 24;
  auto rep = check_pre_stable(wpor(), 1, 8, opt);
  CHECK_FALSE(rep.pass());
  CHECK(rep.exhaustive);
  CHECK(rep.violation_count == rep.violations.size());
  bool witness = false;
  for (const auto& v : rep.violations) {
    CHECK(v.minus > v.plus + opt.slack);
    if (v.x == Point{0, 0} && v.us == std::vector<Point>{{0.5, 0.5}, {0.5, 0.5}}) {
      witness = true;
      CHECK(v.minus == doctest::Approx(1.5));
      CHECK(v.plus == doctest::Approx(1.0));
    }
  }
  CHECK(witness);
  // Monotone (0-pre-stable) it is.
  CHECK(check_pre_stable(wpor(), 0, 8).pass());
}

TEST_CASE("absolutely monotonic functions pass") {
  for (std::size_t n = 0; n <= 4; ++n) {
    CHECK(check_pre_stable(identity_fn(), n, 8).pass());
    CHECK(check_pre_stable(polynomial({0, 0, 0.5, 0.3}), n, 8).pass());
    CHECK(check_pre_stable(polynomial({0.1, 2, 0, 0, 1}), n, 8).pass());
  }
  for (std::size_t n = 0; n <= 3; ++n) {
    auto rep = check_pre_stable(product2(), n, 8);
    CHECK(rep.pass());
    CHECK(rep.exhaustive);
  }
  auto sampled = check_pre_stable(exp_sum(), 4, 8);
  CHECK(sampled.pass());
  CHECK_FALSE(sampled.exhaustive);
}

TEST_CASE("functions with negative differences fail") {
  CHECK_FALSE(check_pre_stable(polynomial({0, 1, -1}), 0, 8).pass());
  CHECK_FALSE(check_pre_stable(polynomial({0, 0, 1, -0.4}), 2, 8).pass());
  auto rep = check_pre_stable(bump(), 1, 8);
  CHECK_FALSE(rep.pass());
  CHECK(rep.violation_count >= rep.violations.size());
}

TEST_CASE("recursive and signed differences agree") {
  std::mt19937_64 gen(48);
  std::vector<PointFn> fs = {wpor(), product2(), exp_sum(), identity_fn(), polynomial({0, 1, -3, 2}), bump()};
  std::size_t agree_sign = 0;
  for (int i = 0; i < 10000; ++i) {
    const auto& f = fs[i % fs.size()];
    auto q = random_query(gen, f.k, 1 + i % 5);
    double rec = iterated_delta(f, q.x, q.us);
    double plus = delta_signed(f, q.x, q.us, Sign::Plus);
    double minus = delta_signed(f, q.x, q.us, Sign::Minus);
    CHECK(std::fabs(rec - (plus - minus)) <= 1e-10);
    const double slack = 1e-9;
    agree_sign += (rec >= -slack) == (minus <= plus + slack);
  }
  CHECK(agree_sign == 10000);
}

TEST_CASE("delta is linear") {
  std::mt19937_64 gen(12);
  std::uniform_real_distribution<double> coef(0, 3);
  for (int i = 0; i < 2000; ++i) {
    double a = coef(gen), b = coef(gen);
    auto f = i % 2 ? wpor() : exp_sum();
    auto g = product2();
    auto h = combine(a, f, b, g);
    auto q = random_query(gen, 2, 1 + i % 4);
    double lhs = iterated_delta(h, q.x, q.us);
    double rhs = a * iterated_delta(f, q.x, q.us) + b * iterated_delta(g, q.x, q.us);
    CHECK(std::fabs(lhs - rhs) <= 1e-10 * (1 + std::fabs(rhs)));
  }
}

TEST_CASE("difference shift identity") {
  std::mt19937_64 gen(21);
  for (int i = 0; i < 2000; ++i) {
    auto f = i % 3 == 0 ? wpor() : (i % 3 == 1 ? product2() : exp_sum());
    auto q = random_query(gen, 2, 2 + i % 4);
    // Split off the first increment as u.
    Point u = q.us[0];
    std::vector<Point> rest(q.us.begin() + 1, q.us.end());
    Point xu = {q.x[0] + u[0], q.x[1] + u[1]};
    double lhs = iterated_delta(f, xu, rest);
    double rhs = iterated_delta(f, q.x, rest) + iterated_delta(f, q.x, q.us);
    CHECK(std::fabs(lhs - rhs) <= 1e-10);
  }
}

TEST_CASE("sums of pre-stable functions are pre-stable") {
  std::vector<PointFn> ones = {identity_fn(), polynomial({0, 0, 0.5, 0.3}), polynomial({1, 0, 0, 2})};
  for (std::size_t n = 0; n <= 3; ++n) {
    for (const auto& f : ones)
      for (const auto& g : ones) {
        REQUIRE(check_pre_stable(f, n, 8).pass());
        CHECK(check_pre_stable(combine(1, f, 1, g), n, 8).pass());
      }
    CHECK(check_pre_stable(combine(1, product2(), 1, combine(1, product2(), 1, product2())), n, 8).pass());
  }
}

TEST_CASE("reports are deterministic") {
  auto a = check_pre_stable(exp_sum(), 4, 8);
  auto b = check_pre_stable(exp_sum(), 4, 8);
  CHECK(a.checked == b.checked);
  CHECK(a.violation_count == b.violation_count);
}
