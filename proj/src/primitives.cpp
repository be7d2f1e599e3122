#include "ppcf/primitives.hpp"

#include <cmath>

#include "ppcf/error.hpp"

namespace ppcf {

double Primitive::operator()(std::span<const double> args) const {
  double v = fn(args);
  if (std::isnan(v)) return 0.0;
  if (v == IntervalSet::kInf) return kMaxReal;
  if (v == -IntervalSet::kInf) return -kMaxReal;
  return v;
}

std::string Primitive::key() const {
  if (chi_set) return "chi[" + chi_set->to_string() + "]";
  return name;
}

namespace {

const IntervalSet kNone{};

IntervalSet when(bool cond, const IntervalSet& s) { return cond ? s : kNone; }

// Preimage of U for a boolean-valued section whose "true" set is T.
IntervalSet boolean_preimage(const IntervalSet& T, const IntervalSet& U) {
  return when(U.contains(1.0), T).unite(when(U.contains(0.0), T.complement()));
}

// Preimage of U under a strictly monotone piece whose image is `image`.
// `inverse` must map image endpoints (including +-inf) to domain endpoints.
template <class Inverse>
IntervalSet monotone_preimage(const IntervalSet& U, Interval image, bool increasing,
                              Inverse inverse) {
  std::vector<Interval> out;
  IntervalSet inside = U.intersect(IntervalSet({image}));
  for (const auto& iv : inside.pieces()) {
    double a = inverse(iv.lo);
    double b = inverse(iv.hi);
    if (increasing) {
      out.push_back({a, b, iv.lo_closed, iv.hi_closed});
    } else {
      out.push_back({b, a, iv.hi_closed, iv.lo_closed});
    }
  }
  return IntervalSet(std::move(out));
}

// {s | s / c in U} for c != 0, i.e. U scaled by c (endpoints multiplied).
IntervalSet scale_by(const IntervalSet& U, double c) {
  std::vector<Interval> out;
  for (const auto& iv : U.pieces()) {
    double a = iv.lo * c, b = iv.hi * c;
    if (c > 0) out.push_back({a, b, iv.lo_closed, iv.hi_closed});
    else out.push_back({b, a, iv.hi_closed, iv.lo_closed});
  }
  return IntervalSet(std::move(out));
}

// {s | s * c in U} for c != 0.
IntervalSet divide_by(const IntervalSet& U, double c) {
  std::vector<Interval> out;
  for (const auto& iv : U.pieces()) {
    double a = iv.lo / c, b = iv.hi / c;
    if (c > 0) out.push_back({a, b, iv.lo_closed, iv.hi_closed});
    else out.push_back({b, a, iv.hi_closed, iv.lo_closed});
  }
  return IntervalSet(std::move(out));
}

constexpr double kInf = IntervalSet::kInf;

PrimRef make(std::string name, std::size_t arity, Primitive::Eval fn, Primitive::Preimage pre,
             Notation notation = Notation::Function, int precedence = 0) {
  auto p = std::make_shared<Primitive>();
  p->name = std::move(name);
  p->arity = arity;
  p->fn = std::move(fn);
  p->preimage = std::move(pre);
  p->notation = notation;
  p->precedence = precedence;
  return p;
}

PrimRef comparison(std::string name, bool (*rel)(double, double)) {
  auto n = name;
  auto pre = [n](std::size_t k, std::span<const double> args,
                 const IntervalSet& U) -> std::optional<IntervalSet> {
    double a = args[1 - k];
    IntervalSet T;
    // Normalize to the relation "s REL a" for the free argument s.
    std::string r = n;
    if (k == 1) {
      if (r == "<") r = ">";
      else if (r == "<=") r = ">=";
      else if (r == ">") r = "<";
      else if (r == ">=") r = "<=";
    }
    if (r == "<") T = IntervalSet::open(-kInf, a);
    else if (r == "<=") T = IntervalSet::at_most(a);
    else if (r == ">") T = IntervalSet::open(a, kInf);
    else if (r == ">=") T = IntervalSet({{a, kInf, true, false}});
    else T = IntervalSet::point(a);
    return boolean_preimage(T, U);
  };
  return make(
      std::move(name), 2,
      [rel](std::span<const double> x) { return rel(x[0], x[1]) ? 1.0 : 0.0; }, pre,
      Notation::Infix, 1);
}

PrimitiveTable build_standard() {
  PrimitiveTable t;
  t.add(make(
      "+", 2, [](std::span<const double> x) { return x[0] + x[1]; },
      [](std::size_t k, std::span<const double> a, const IntervalSet& U) -> std::optional<IntervalSet> {
        return U.affine(1.0, -a[1 - k]);
      },
      Notation::Infix, 2));
  t.add(make(
      "-", 2, [](std::span<const double> x) { return x[0] - x[1]; },
      [](std::size_t k, std::span<const double> a, const IntervalSet& U) -> std::optional<IntervalSet> {
        if (k == 0) return U.affine(1.0, a[1]);
        return U.affine(-1.0, a[0]);
      },
      Notation::Infix, 2));
  t.add(make(
      "*", 2, [](std::span<const double> x) { return x[0] * x[1]; },
      [](std::size_t k, std::span<const double> a, const IntervalSet& U) -> std::optional<IntervalSet> {
        double c = a[1 - k];
        if (c == 0.0) return when(U.contains(0.0), IntervalSet::real_line());
        return divide_by(U, c);
      },
      Notation::Infix, 3));
  // x / 0 is totalized to 0.
  t.add(make(
      "/", 2, [](std::span<const double> x) { return x[1] == 0.0 ? 0.0 : x[0] / x[1]; },
      [](std::size_t k, std::span<const double> a, const IntervalSet& U) -> std::optional<IntervalSet> {
        if (k == 0) {
          double c = a[1];
          if (c == 0.0) return when(U.contains(0.0), IntervalSet::real_line());
          return scale_by(U, c);
        }
        double c = a[0];
        if (c == 0.0) return when(U.contains(0.0), IntervalSet::real_line());
        IntervalSet out = when(U.contains(0.0), IntervalSet::point(0.0));
        bool increasing = c < 0;
        auto inv_pos = [c](double y) { return y == 0.0 ? kInf : c / y; };
        auto inv_neg = [c](double y) { return y == 0.0 ? -kInf : c / y; };
        Interval img_pos = c > 0 ? Interval{0, kInf, false, false} : Interval{-kInf, 0, false, false};
        Interval img_neg = c > 0 ? Interval{-kInf, 0, false, false} : Interval{0, kInf, false, false};
        out = out.unite(monotone_preimage(U, img_pos, increasing, inv_pos)
                            .intersect(IntervalSet::open(0, kInf)));
        out = out.unite(monotone_preimage(U, img_neg, increasing, inv_neg)
                            .intersect(IntervalSet::open(-kInf, 0)));
        return out;
      },
      Notation::Infix, 3));
  t.add(comparison("=", [](double a, double b) { return a == b; }));
  t.add(comparison("<", [](double a, double b) { return a < b; }));
  t.add(comparison("<=", [](double a, double b) { return a <= b; }));
  t.add(comparison(">", [](double a, double b) { return a > b; }));
  t.add(comparison(">=", [](double a, double b) { return a >= b; }));

  t.add(make(
      "neg", 1, [](std::span<const double> x) { return -x[0]; },
      [](std::size_t, std::span<const double>, const IntervalSet& U) -> std::optional<IntervalSet> {
        return U.affine(-1.0, 0.0);
      }));
  // log x for x <= 0 is totalized to -MAXREAL.
  t.add(make(
      "log", 1, [](std::span<const double> x) { return x[0] <= 0.0 ? -kMaxReal : std::log(x[0]); },
      [](std::size_t, std::span<const double>, const IntervalSet& U) -> std::optional<IntervalSet> {
        auto pos = monotone_preimage(U, {-kInf, kInf, false, false}, true,
                                     [](double y) { return std::exp(y); });
        pos = pos.intersect(IntervalSet::open(0, kInf));
        return pos.unite(when(U.contains(-kMaxReal), IntervalSet::at_most(0.0)));
      }));
  t.add(make(
      "exp", 1, [](std::span<const double> x) { return std::exp(x[0]); },
      [](std::size_t, std::span<const double>, const IntervalSet& U) -> std::optional<IntervalSet> {
        return monotone_preimage(U, {0, kInf, false, false}, true,
                                 [](double y) { return y == 0.0 ? -kInf : std::log(y); });
      }));
  // sqrt x for x < 0 is totalized to 0.
  t.add(make(
      "sqrt", 1, [](std::span<const double> x) { return x[0] < 0.0 ? 0.0 : std::sqrt(x[0]); },
      [](std::size_t, std::span<const double>, const IntervalSet& U) -> std::optional<IntervalSet> {
        auto pos = monotone_preimage(U, {0, kInf, false, false}, true,
                                     [](double y) { return y * y; });
        return pos.unite(when(U.contains(0.0), IntervalSet::at_most(0.0)));
      }));
  t.add(make(
      "abs", 1, [](std::span<const double> x) { return std::fabs(x[0]); },
      [](std::size_t, std::span<const double>, const IntervalSet& U) -> std::optional<IntervalSet> {
        auto pos = U.intersect(IntervalSet::open(0, kInf));
        return pos.unite(pos.affine(-1.0, 0.0)).unite(when(U.contains(0.0), IntervalSet::point(0.0)));
      }));
  t.add(make("cos", 1, [](std::span<const double> x) { return std::cos(x[0]); }, nullptr));
  t.add(make("sin", 1, [](std::span<const double> x) { return std::sin(x[0]); }, nullptr));
  t.add(make(
      "min", 2, [](std::span<const double> x) { return std::fmin(x[0], x[1]); },
      [](std::size_t k, std::span<const double> a, const IntervalSet& U) -> std::optional<IntervalSet> {
        double c = a[1 - k];
        return U.intersect(IntervalSet::open(-kInf, c))
            .unite(when(U.contains(c), IntervalSet({{c, kInf, true, false}})));
      }));
  t.add(make(
      "max", 2, [](std::span<const double> x) { return std::fmax(x[0], x[1]); },
      [](std::size_t k, std::span<const double> a, const IntervalSet& U) -> std::optional<IntervalSet> {
        double c = a[1 - k];
        return U.intersect(IntervalSet::open(c, kInf))
            .unite(when(U.contains(c), IntervalSet::at_most(c)));
      }));
  return t;
}

}  // namespace

const PrimitiveTable& PrimitiveTable::standard() {
  static const PrimitiveTable table = build_standard();
  return table;
}

PrimRef PrimitiveTable::find(std::string_view name) const {
  auto it = entries_.find(name);
  return it == entries_.end() ? nullptr : it->second;
}

PrimRef PrimitiveTable::at(std::string_view name) const {
  auto p = find(name);
  if (!p) throw UnknownPrimitive("unknown primitive `" + std::string(name) + "`");
  return p;
}

void PrimitiveTable::add(PrimRef p) { entries_[p->name] = std::move(p); }

PrimRef chi(IntervalSet U) {
  auto p = std::make_shared<Primitive>();
  p->name = "chi";
  p->arity = 1;
  p->notation = Notation::Chi;
  p->chi_set = U;
  p->fn = [U](std::span<const double> x) { return U.contains(x[0]) ? 1.0 : 0.0; };
  p->preimage = [U](std::size_t, std::span<const double>,
                    const IntervalSet& V) -> std::optional<IntervalSet> {
    return boolean_preimage(U, V);
  };
  return p;
}

PrimRef prim(std::string_view name) { return PrimitiveTable::standard().at(name); }

}  // namespace ppcf
