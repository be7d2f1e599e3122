#include "ppcf/error.hpp"
#include "ppcf/pretty.hpp"
#include "ppcf/syntax.hpp"

namespace ppcf {

namespace {

class Checker {
 public:
  explicit Checker(TypeTable* table) : table_(table) {}

  Type check(const TypingContext& ctx, const Term& t) {
    Type ty = infer(ctx, t);
    if (table_) (*table_)[&t] = ty;
    return ty;
  }

 private:
  [[noreturn]] static void fail(const std::string& msg, const Term& t) {
    throw TypeError(msg, pretty(t));
  }

  void expect_real(const TypingContext& ctx, const Term& t, const char* role) {
    Type ty = check(ctx, t);
    if (!ty.is_real()) fail(std::string(role) + " has type " + ty.to_string() + ", expected real", t);
  }

  Type infer(const TypingContext& ctx, const Term& t) {
    switch (t.kind()) {
      case TermKind::Var: {
        const Type* ty = ctx.lookup(t.name());
        if (!ty) fail("unbound variable `" + t.name() + "`", t);
        return *ty;
      }
      case TermKind::Abs: {
        Type body = check(ctx.extend(t.name(), t.annotation()), *t.body());
        return Type::arrow(t.annotation(), body);
      }
      case TermKind::App: {
        Type f = check(ctx, *t.fun());
        if (!f.is_arrow()) fail("applying a term of type " + f.to_string(), t);
        Type a = check(ctx, *t.arg());
        if (!(a == f.domain()))
          fail("argument has type " + a.to_string() + ", expected " + f.domain().to_string(), t);
        return f.codomain();
      }
      case TermKind::Fix: {
        Type f = check(ctx, *t.body());
        if (!f.is_arrow() || !(f.domain() == f.codomain()))
          fail("fix expects a term of type A -> A, got " + f.to_string(), t);
        return f.domain();
      }
      case TermKind::Numeral:
      case TermKind::Sample:
        return Type::real();
      case TermKind::Prim:
        for (const auto& c : t.children()) expect_real(ctx, *c, "primitive argument");
        return Type::real();
      case TermKind::Ifz: {
        expect_real(ctx, *t.scrutinee(), "ifz condition");
        expect_real(ctx, *t.then_branch(), "ifz branch");
        expect_real(ctx, *t.else_branch(), "ifz branch");
        return Type::real();
      }
      case TermKind::Let:
        expect_real(ctx, *t.bound(), "let-bound term");
        expect_real(ctx.extend(t.name(), Type::real()), *t.body(), "let body");
        return Type::real();
      case TermKind::Macro:
        fail("unexpanded macro #" + t.name(), t);
    }
    fail("unknown term kind", t);
  }

  TypeTable* table_;
};

}  // namespace

Type typecheck(const TypingContext& ctx, const Term& t, TypeTable* table) {
  return Checker(table).check(ctx, t);
}

}  // namespace ppcf
