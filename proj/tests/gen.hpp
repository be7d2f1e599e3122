#pragma once

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "ppcf/syntax.hpp"

namespace ppcf::testing {

/// Random well-typed terms over real and real -> real.
class TermGen {
 public:
  explicit TermGen(std::uint64_t seed) : gen_(seed) {}

  TermPtr real(int depth) { return term(Type::real(), depth); }

  TermPtr term(const Type& t, int depth) {
    if (t.is_arrow()) {
      std::string x = name();
      scope_.push_back({x, t.domain()});
      TermPtr body = term(t.codomain(), depth - 1);
      scope_.pop_back();
      return Term::abs(x, t.domain(), body);
    }
    std::vector<const std::pair<std::string, Type>*> reals;
    std::vector<std::string> seen;
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it) {
      if (std::find(seen.begin(), seen.end(), it->first) != seen.end()) continue;
      seen.push_back(it->first);
      if (it->second.is_real()) reals.push_back(&*it);
    }
    int choice = depth <= 0 ? pick(3) : pick(11);
    switch (choice) {
      case 0:
        return Term::numeral(numeral());
      case 1:
        return Term::sample();
      case 2:
        if (!reals.empty()) return Term::var(reals[pick(reals.size())]->first);
        return Term::numeral(numeral());
      case 3:
      case 4: {
        static const char* ops[] = {"+", "-", "*", "/", "<", "<=", "=", "max", "min"};
        return Term::prim(ops[pick(9)], {real(depth - 1), real(depth - 1)});
      }
      case 5: {
        static const char* ops[] = {"neg", "abs", "exp", "sqrt"};
        return Term::prim(ops[pick(4)], {real(depth - 1)});
      }
      case 6:
        return Term::ifz(real(depth - 1), real(depth - 1), real(depth - 1));
      case 7: {
        TermPtr bound = real(depth - 1);
        std::string x = name();
        scope_.push_back({x, Type::real()});
        TermPtr body = real(depth - 1);
        scope_.pop_back();
        return Term::let(x, bound, body);
      }
      case 8: {
        Type rr = Type::arrow(Type::real(), Type::real());
        return Term::app(term(rr, depth - 1), real(depth - 1));
      }
      case 9:
        return Term::prim(chi(IntervalSet::closed(0, 0.5)), {real(depth - 1)});
      default: {
        // A higher-order redex: (fun f : real -> real. f M) (fun x. N)
        Type rr = Type::arrow(Type::real(), Type::real());
        std::string f = name();
        scope_.push_back({f, rr});
        TermPtr body = Term::app(Term::var(f), real(depth - 1));
        scope_.pop_back();
        return Term::app(Term::abs(f, rr, body), term(rr, depth - 1));
      }
    }
  }

 private:
  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(gen_); }
  double numeral() {
    static const double vals[] = {0, 1, 2, 0.5, -1, 3.25, 1e-3, -0.0};
    return vals[pick(8)];
  }
  std::string name() {
    static const char* names[] = {"x", "y", "z", "w"};
    return names[pick(4)];
  }

  std::mt19937_64 gen_;
  std::vector<std::pair<std::string, Type>> scope_;
};

}  // namespace ppcf::testing
