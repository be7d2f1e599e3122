#include "ppcf/measure.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

#include "ppcf/error.hpp"

namespace ppcf {

std::vector<double> endpoints(const IntervalSet& U) {
  std::vector<double> out;
  for (const auto& iv : U.pieces()) {
    if (std::isfinite(iv.lo)) out.push_back(iv.lo);
    if (std::isfinite(iv.hi) && iv.hi != iv.lo) out.push_back(iv.hi);
  }
  return out;
}

namespace {

std::string weight_prefix(double w) { return w == 1.0 ? "" : format_real(w) + "*"; }

// Memo of masses per set. A value computed at a tighter tolerance answers any
// looser query. Safe for concurrent readers.
class MassCache {
 public:
  template <class Compute>
  double get(const IntervalSet& U, const QuadratureConfig& cfg, Compute compute) const {
    std::string key = U.to_string();
    {
      std::lock_guard lock(mu_);
      auto it = memo_.find(key);
      if (it != memo_.end() && it->second.first <= cfg.abs_tol) return it->second.second;
    }
    double v = compute();
    std::lock_guard lock(mu_);
    auto [it, fresh] = memo_.try_emplace(std::move(key), cfg.abs_tol, v);
    if (!fresh && cfg.abs_tol < it->second.first) it->second = {cfg.abs_tol, v};
    return v;
  }

 private:
  mutable std::mutex mu_;
  mutable std::map<std::string, std::pair<double, double>> memo_;
};

class DensityComponent final : public Component {
 public:
  DensityComponent(double lo, double hi, RealFn density, double constant, std::string label)
      : lo_(lo), hi_(hi), density_(std::move(density)), constant_(constant), label_(std::move(label)) {}

  double mass(const IntervalSet& U, const QuadratureConfig& cfg) const override {
    IntervalSet I = U.intersect(IntervalSet::closed(lo_, hi_));
    double total = 0.0;
    for (const auto& iv : I.pieces()) {
      if (iv.is_point()) continue;
      if (!density_) {
        total += constant_ * (std::min(iv.hi, cfg.truncation_hi) - std::max(iv.lo, cfg.truncation_lo));
      } else {
        total += adaptive_simpson(density_, iv.lo, iv.hi, cfg).value;
      }
    }
    return total;
  }

  double integrate(const RealFn& g, const QuadratureConfig& cfg,
                   std::span<const double> breakpoints) const override {
    RealFn h = density_ ? RealFn([&](double s) { return g(s) * density_(s); })
                        : RealFn([&](double s) { return g(s) * constant_; });
    return adaptive_simpson(h, lo_, hi_, cfg, breakpoints).value;
  }

  int dims() const override { return 1; }
  std::string describe() const override { return label_; }

 private:
  double lo_, hi_;
  RealFn density_;
  double constant_;
  std::string label_;
};

class PushforwardComponent final : public Component {
 public:
  PushforwardComponent(PrimRef f, std::vector<Measure> args) : f_(std::move(f)), args_(std::move(args)) {
    for (std::size_t i = 0; i < args_.size(); ++i) {
      if (!args_[i].is_discrete()) inner_ = i;
    }
    for (std::size_t i = 0; i < args_.size(); ++i) {
      if (i != inner_) outer_.push_back(i);
    }
  }

  double mass(const IntervalSet& U, const QuadratureConfig& cfg) const override {
    if (U.empty()) return 0.0;
    return cache_.get(U, cfg, [&] {
      std::vector<double> xs(args_.size(), 0.0);
      return mass_level(0, xs, U, cfg);
    });
  }

  double integrate(const RealFn& g, const QuadratureConfig& cfg,
                   std::span<const double> breakpoints) const override {
    std::vector<double> xs(args_.size(), 0.0);
    return integrate_level(0, xs, g, cfg, breakpoints);
  }

  int dims() const override {
    int d = 0;
    for (const auto& a : args_) d += a.dims();
    return d;
  }

  std::string describe() const override {
    std::string s = f_->key() + "_*(";
    for (std::size_t i = 0; i < args_.size(); ++i) {
      if (i) s += ", ";
      s += args_[i].describe();
    }
    return s + ")";
  }

 private:
  double mass_level(std::size_t j, std::vector<double>& xs, const IntervalSet& U,
                    const QuadratureConfig& cfg) const {
    if (j == outer_.size()) {
      const Measure& m = args_[inner_];
      if (f_->preimage) {
        if (auto pre = f_->preimage(inner_, xs, U)) return m.mass(*pre, cfg);
      }
      return m.integrate(
          [&](double s) {
            xs[inner_] = s;
            return U.contains((*f_)(xs)) ? 1.0 : 0.0;
          },
          cfg);
    }
    std::size_t i = outer_[j];
    return args_[i].integrate(
        [&](double r) {
          xs[i] = r;
          return mass_level(j + 1, xs, U, cfg.nested());
        },
        cfg);
  }

  double integrate_level(std::size_t j, std::vector<double>& xs, const RealFn& g,
                         const QuadratureConfig& cfg, std::span<const double> breakpoints) const {
    if (j == args_.size()) return g((*f_)(xs));
    std::size_t i = j < outer_.size() ? outer_[j] : inner_;
    // Jumps of g at b sit where f crosses b along the last argument.
    std::vector<double> pulled;
    if (i == inner_ && f_->preimage) {
      for (double b : breakpoints) {
        if (auto pre = f_->preimage(inner_, xs, IntervalSet::at_most(b))) {
          auto e = endpoints(*pre);
          pulled.insert(pulled.end(), e.begin(), e.end());
        }
      }
    }
    return args_[i].integrate(
        [&](double r) {
          xs[i] = r;
          return integrate_level(j + 1, xs, g, cfg.nested(), breakpoints);
        },
        cfg, pulled);
  }

  PrimRef f_;
  std::vector<Measure> args_;
  std::size_t inner_ = 0;
  std::vector<std::size_t> outer_;
  MassCache cache_;
};

class KernelComponent final : public Component {
 public:
  KernelComponent(Measure bound, std::function<Measure(double)> body, std::vector<double> breakpoints)
      : bound_(std::move(bound)), body_(std::move(body)), breakpoints_(std::move(breakpoints)) {}

  double mass(const IntervalSet& U, const QuadratureConfig& cfg) const override {
    if (U.empty()) return 0.0;
    return cache_.get(U, cfg, [&] {
      std::vector<double> bp = breakpoints_;
      auto more = endpoints(U);
      bp.insert(bp.end(), more.begin(), more.end());
      QuadratureConfig inner = cfg.nested();
      return bound_.integrate([&](double r) { return body_(r).mass(U, inner); }, cfg, bp);
    });
  }

  double integrate(const RealFn& g, const QuadratureConfig& cfg,
                   std::span<const double> breakpoints) const override {
    QuadratureConfig inner = cfg.nested();
    return bound_.integrate([&](double r) { return body_(r).integrate(g, inner, breakpoints); }, cfg,
                            breakpoints_);
  }

  int dims() const override { return bound_.dims() + 1; }
  std::string describe() const override { return "let(" + bound_.describe() + ")"; }

 private:
  Measure bound_;
  std::function<Measure(double)> body_;
  std::vector<double> breakpoints_;
  MassCache cache_;
};

}  // namespace

Measure::Measure(std::vector<Atom> atoms, std::vector<Weighted> parts) {
  std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a.at < b.at; });
  for (const auto& a : atoms) {
    if (!(a.weight > 0.0)) continue;
    double at = a.at == 0.0 ? 0.0 : a.at;  // -0 and 0 are one location
    if (!atoms_.empty() && atoms_.back().at == at) atoms_.back().weight += a.weight;
    else atoms_.push_back({at, a.weight});
  }
  for (auto& p : parts) {
    if (p.weight > 0.0 && p.component) parts_.push_back(std::move(p));
  }
}

Measure Measure::dirac(double r, double weight) { return Measure({{r, weight}}, {}); }

Measure Measure::lebesgue(double lo, double hi) {
  std::string label = "uniform[" + format_real(lo) + "," + format_real(hi) + "]";
  return of(std::make_shared<DensityComponent>(lo, hi, nullptr, 1.0, std::move(label)));
}

Measure Measure::with_density(double lo, double hi, RealFn density, std::string label, double weight) {
  return of(std::make_shared<DensityComponent>(lo, hi, std::move(density), 0.0, std::move(label)), weight);
}

Measure Measure::of(ComponentPtr c, double weight) { return Measure({}, {{weight, std::move(c)}}); }

int Measure::dims() const {
  int d = 0;
  for (const auto& p : parts_) d = std::max(d, p.component->dims());
  return d;
}

double Measure::mass(const IntervalSet& U, const QuadratureConfig& cfg) const {
  if (U.empty()) return 0.0;
  double total = 0.0;
  for (const auto& a : atoms_) {
    if (U.contains(a.at)) total += a.weight;
  }
  for (const auto& p : parts_) total += p.weight * p.component->mass(U, cfg);
  return total;
}

double Measure::total_mass(const QuadratureConfig& cfg) const { return mass(IntervalSet::real_line(), cfg); }

double Measure::integrate(const RealFn& g, const QuadratureConfig& cfg, std::span<const double> breakpoints) const {
  double total = 0.0;
  for (const auto& a : atoms_) total += a.weight * g(a.at);
  for (const auto& p : parts_) total += p.weight * p.component->integrate(g, cfg, breakpoints);
  return total;
}

Measure Measure::scaled(double c) const {
  if (!(c > 0.0)) return {};
  if (c == 1.0) return *this;
  std::vector<Atom> atoms = atoms_;
  for (auto& a : atoms) a.weight *= c;
  std::vector<Weighted> parts = parts_;
  for (auto& p : parts) p.weight *= c;
  return Measure(std::move(atoms), std::move(parts));
}

std::string Measure::describe() const {
  if (is_zero()) return "0";
  std::string s;
  for (const auto& a : atoms_) {
    if (!s.empty()) s += " + ";
    s += weight_prefix(a.weight) + "delta(" + format_real(a.at) + ")";
  }
  for (const auto& p : parts_) {
    if (!s.empty()) s += " + ";
    s += weight_prefix(p.weight) + p.component->describe();
  }
  return s;
}

Measure mix(std::span<const double> coeffs, std::span<const Measure> measures) {
  if (coeffs.size() != measures.size()) throw InvariantViolation("mix: coefficient count mismatch");
  std::vector<Atom> atoms;
  std::vector<Weighted> parts;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    double c = coeffs[i];
    if (!(c > 0.0)) continue;
    for (const auto& a : measures[i].atoms()) atoms.push_back({a.at, c * a.weight});
    for (const auto& p : measures[i].parts()) parts.push_back({c * p.weight, p.component});
  }
  return Measure(std::move(atoms), std::move(parts));
}

Measure pushforward(PrimRef f, std::vector<Measure> args) {
  if (!f) throw InvariantViolation("pushforward of a null primitive");
  if (args.size() != f->arity) throw ArityError("pushforward arity mismatch for " + f->key());
  int continuous = 0;
  for (const auto& a : args) {
    if (a.is_zero()) return {};
    if (!a.is_discrete()) ++continuous;
  }
  if (continuous > kMaxPushforwardDims) {
    throw DimensionLimit("pushforward of " + f->key() + " over " + std::to_string(continuous) +
                         " continuous arguments (limit " + std::to_string(kMaxPushforwardDims) + ")");
  }

  // Expand the product of (atoms + continuous part) per argument: the all-atom
  // combinations give exact atoms, every other combination a component.
  const std::size_t n = args.size();
  std::vector<Measure> atom_part(n), cont_part(n);
  for (std::size_t i = 0; i < n; ++i) {
    atom_part[i] = Measure({args[i].atoms().begin(), args[i].atoms().end()}, {});
    cont_part[i] = Measure({}, {args[i].parts().begin(), args[i].parts().end()});
  }

  std::vector<Atom> atoms;
  std::vector<Weighted> parts;
  std::vector<double> xs(n);
  std::function<void(std::size_t, double)> expand_atoms = [&](std::size_t i, double w) {
    if (i == n) {
      atoms.push_back({(*f)(xs), w});
      return;
    }
    for (const auto& a : atom_part[i].atoms()) {
      xs[i] = a.at;
      expand_atoms(i + 1, w * a.weight);
    }
  };
  expand_atoms(0, 1.0);

  for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
    std::vector<Measure> picked(n);
    bool empty = false;
    for (std::size_t i = 0; i < n; ++i) {
      picked[i] = (mask >> i) & 1 ? cont_part[i] : atom_part[i];
      empty = empty || picked[i].is_zero();
    }
    if (!empty) parts.push_back({1.0, std::make_shared<PushforwardComponent>(f, std::move(picked))});
  }
  return Measure(std::move(atoms), std::move(parts));
}

Measure let_bind(const Measure& bound, std::function<Measure(double)> body, std::vector<double> breakpoints) {
  std::vector<double> coeffs;
  std::vector<Measure> pieces;
  for (const auto& a : bound.atoms()) {
    coeffs.push_back(a.weight);
    pieces.push_back(body(a.at));
  }
  if (!bound.is_discrete()) {
    Measure cont({}, {bound.parts().begin(), bound.parts().end()});
    coeffs.push_back(1.0);
    pieces.push_back(Measure::of(
        std::make_shared<KernelComponent>(std::move(cont), std::move(body), std::move(breakpoints))));
  }
  return mix(coeffs, pieces);
}

}  // namespace ppcf
