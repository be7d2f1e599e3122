#include "ppcf/syntax.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>

#include "ppcf/error.hpp"

namespace ppcf {

// ---------------------------------------------------------------------------
// Type

Type Type::arrow(Type domain, Type codomain) {
  Type t;
  t.arrow_ = std::make_shared<const Arrow>(Arrow{std::move(domain), std::move(codomain)});
  return t;
}

const Type& Type::domain() const {
  if (!arrow_) throw InvariantViolation("domain of type real");
  return arrow_->domain;
}

const Type& Type::codomain() const {
  if (!arrow_) throw InvariantViolation("codomain of type real");
  return arrow_->codomain;
}

bool Type::operator==(const Type& other) const {
  if (arrow_ == other.arrow_) return true;
  if (!arrow_ || !other.arrow_) return false;
  return arrow_->domain == other.arrow_->domain && arrow_->codomain == other.arrow_->codomain;
}

std::string Type::to_string() const {
  if (!arrow_) return "real";
  std::string lhs = arrow_->domain.to_string();
  if (arrow_->domain.is_arrow()) lhs = "(" + lhs + ")";
  return lhs + " -> " + arrow_->codomain.to_string();
}

// ---------------------------------------------------------------------------
// Term construction

namespace {

void merge_into(std::vector<std::string>& acc, const std::vector<std::string>& more,
                const std::string* drop) {
  for (const auto& v : more) {
    if (drop && v == *drop) continue;
    auto it = std::lower_bound(acc.begin(), acc.end(), v);
    if (it == acc.end() || *it != v) acc.insert(it, v);
  }
}

}  // namespace

TermPtr Term::finish(Term t) {
  auto p = std::shared_ptr<Term>(new Term(std::move(t)));
  std::vector<std::string> fv;
  if (p->kind_ == TermKind::Var) fv.push_back(p->name_);
  for (std::size_t i = 0; i < p->children_.size(); ++i) {
    if (!p->children_[i]) throw InvariantViolation("null child term");
    merge_into(fv, p->children_[i]->free_, p->binds_child(i) ? &p->name_ : nullptr);
  }
  p->free_ = std::move(fv);
  return p;
}

bool Term::binds_child(std::size_t i) const {
  switch (kind_) {
    case TermKind::Abs:
      return true;
    case TermKind::Let:
      return i == 1;
    case TermKind::Macro:
      return !macro_.binder.empty() && i == 1;
    default:
      return false;
  }
}

bool Term::has_free(std::string_view x) const {
  return std::binary_search(free_.begin(), free_.end(), x);
}

TermPtr Term::var(std::string name) {
  Term t;
  t.kind_ = TermKind::Var;
  t.name_ = std::move(name);
  return finish(std::move(t));
}

TermPtr Term::abs(std::string name, Type annot, TermPtr body) {
  Term t;
  t.kind_ = TermKind::Abs;
  t.name_ = std::move(name);
  t.annot_ = std::move(annot);
  t.children_ = {std::move(body)};
  return finish(std::move(t));
}

TermPtr Term::app(TermPtr fun, TermPtr arg) {
  Term t;
  t.kind_ = TermKind::App;
  t.children_ = {std::move(fun), std::move(arg)};
  return finish(std::move(t));
}

TermPtr Term::app(TermPtr fun, std::span<const TermPtr> args) {
  for (const auto& a : args) fun = app(std::move(fun), a);
  return fun;
}

TermPtr Term::fix(TermPtr body) {
  Term t;
  t.kind_ = TermKind::Fix;
  t.children_ = {std::move(body)};
  return finish(std::move(t));
}

TermPtr Term::numeral(double value) {
  if (!std::isfinite(value)) throw InvariantViolation("numerals must be finite");
  Term t;
  t.kind_ = TermKind::Numeral;
  t.value_ = value;
  return finish(std::move(t));
}

TermPtr Term::prim(PrimRef f, std::vector<TermPtr> args) {
  if (!f) throw InvariantViolation("null primitive");
  if (args.size() != f->arity) {
    throw ArityError("primitive `" + f->key() + "` expects " + std::to_string(f->arity) +
                     " argument(s), got " + std::to_string(args.size()));
  }
  Term t;
  t.kind_ = TermKind::Prim;
  t.prim_ = std::move(f);
  t.children_ = std::move(args);
  return finish(std::move(t));
}

TermPtr Term::prim(std::string_view name, std::vector<TermPtr> args) {
  return prim(ppcf::prim(name), std::move(args));
}

TermPtr Term::ifz(TermPtr scrutinee, TermPtr then_branch, TermPtr else_branch) {
  Term t;
  t.kind_ = TermKind::Ifz;
  t.children_ = {std::move(scrutinee), std::move(then_branch), std::move(else_branch)};
  return finish(std::move(t));
}

TermPtr Term::sample() {
  static const TermPtr s = [] {
    Term t;
    t.kind_ = TermKind::Sample;
    return finish(std::move(t));
  }();
  return s;
}

TermPtr Term::let(std::string name, TermPtr bound, TermPtr body) {
  Term t;
  t.kind_ = TermKind::Let;
  t.name_ = std::move(name);
  t.children_ = {std::move(bound), std::move(body)};
  return finish(std::move(t));
}

TermPtr Term::macro(std::string name, MacroInfo info, std::vector<TermPtr> args) {
  Term t;
  t.kind_ = TermKind::Macro;
  t.name_ = std::move(name);
  t.macro_ = std::move(info);
  t.children_ = std::move(args);
  return finish(std::move(t));
}

TermPtr Term::with_children(std::vector<TermPtr> children) const {
  Term t;
  t.kind_ = kind_;
  t.name_ = name_;
  t.annot_ = annot_;
  t.value_ = value_;
  t.prim_ = prim_;
  t.macro_ = macro_;
  t.children_ = std::move(children);
  return finish(std::move(t));
}

TermPtr Term::with_binder(std::string name, std::vector<TermPtr> children) const {
  Term t;
  t.kind_ = kind_;
  t.name_ = std::move(name);
  t.annot_ = annot_;
  t.value_ = value_;
  t.prim_ = prim_;
  t.macro_ = macro_;
  if (kind_ == TermKind::Macro) t.macro_.binder = t.name_, t.name_ = name_;
  t.children_ = std::move(children);
  return finish(std::move(t));
}

// ---------------------------------------------------------------------------
// Typing context

TypingContext TypingContext::extend(std::string name, Type t) const {
  TypingContext out;
  out.entries_.reserve(entries_.size() + 1);
  for (const auto& e : entries_) {
    if (e.first != name) out.entries_.push_back(e);
  }
  out.entries_.emplace_back(std::move(name), std::move(t));
  return out;
}

const Type* TypingContext::lookup(std::string_view name) const {
  for (auto it = entries_.rbegin(); it != entries_.rend(); ++it) {
    if (it->first == name) return &it->second;
  }
  return nullptr;
}

// ---------------------------------------------------------------------------
// Substitution

std::string fresh_name(std::string_view base) {
  static std::atomic<unsigned long long> counter{0};
  auto hash = base.find('#');
  if (hash != std::string_view::npos) base = base.substr(0, hash);
  return std::string(base) + "#" + std::to_string(++counter);
}

namespace {

// Name of the variable bound over child i, or nullptr.
const std::string* binder_of(const Term& t, std::size_t i) {
  if (!t.binds_child(i)) return nullptr;
  return t.is(TermKind::Macro) ? &t.macro_info().binder : &t.name();
}

}  // namespace

TermPtr substitute(const TermPtr& t, std::string_view x, const TermPtr& s) {
  if (!t->has_free(x)) return t;
  if (t->is(TermKind::Var)) return s;

  auto kids = t->children();
  std::vector<TermPtr> out(kids.begin(), kids.end());
  std::string binder;
  bool has_binder = false;
  for (std::size_t i = 0; i < kids.size(); ++i) {
    const std::string* b = binder_of(*t, i);
    if (!b) {
      out[i] = substitute(kids[i], x, s);
      continue;
    }
    has_binder = true;
    binder = *b;
    // x is free in t, and x != binder here unless this child does not see x.
    if (binder == x) continue;
    TermPtr body = kids[i];
    if (s->has_free(binder) && body->has_free(x)) {
      std::string renamed = fresh_name(binder);
      body = substitute(body, binder, Term::var(renamed));
      binder = renamed;
    }
    out[i] = substitute(body, x, s);
  }
  if (has_binder) return t->with_binder(binder, std::move(out));
  return t->with_children(std::move(out));
}

// ---------------------------------------------------------------------------
// Alpha equivalence

namespace {

struct AlphaEnv {
  // Parallel stacks of bound names; a variable matches if both sides resolve
  // to the same depth, or both are free with the same name.
  std::vector<std::string> left, right;

  static std::optional<std::size_t> depth(const std::vector<std::string>& stack,
                                          const std::string& n) {
    for (std::size_t i = stack.size(); i-- > 0;) {
      if (stack[i] == n) return i;
    }
    return std::nullopt;
  }
};

bool alpha_rec(const Term& a, const Term& b, AlphaEnv& env) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case TermKind::Var: {
      auto da = AlphaEnv::depth(env.left, a.name());
      auto db = AlphaEnv::depth(env.right, b.name());
      if (da || db) return da == db;
      return a.name() == b.name();
    }
    case TermKind::Numeral:
      return a.value() == b.value() && std::signbit(a.value()) == std::signbit(b.value());
    case TermKind::Abs:
      if (!(a.annotation() == b.annotation())) return false;
      break;
    case TermKind::Prim:
      if (a.primitive()->key() != b.primitive()->key()) return false;
      break;
    case TermKind::Macro:
      if (a.name() != b.name() || a.macro_info().set != b.macro_info().set ||
          a.macro_info().binder.empty() != b.macro_info().binder.empty())
        return false;
      break;
    default:
      break;
  }
  auto ka = a.children();
  auto kb = b.children();
  if (ka.size() != kb.size()) return false;
  for (std::size_t i = 0; i < ka.size(); ++i) {
    const std::string* ba = binder_of(a, i);
    if (ba) {
      env.left.push_back(*ba);
      env.right.push_back(*binder_of(b, i));
    }
    bool ok = alpha_rec(*ka[i], *kb[i], env);
    if (ba) {
      env.left.pop_back();
      env.right.pop_back();
    }
    if (!ok) return false;
  }
  return true;
}

}  // namespace

bool alpha_equal(const Term& a, const Term& b) {
  AlphaEnv env;
  return alpha_rec(a, b, env);
}

std::size_t term_size(const Term& t) {
  std::size_t n = 1;
  for (const auto& c : t.children()) n += term_size(*c);
  return n;
}

}  // namespace ppcf
