#include "ppcf/pretty.hpp"

#include <cmath>
#include <string_view>

namespace ppcf {

namespace {

// Binding strength of the printed form; higher binds tighter.
enum Level : int { kOpen = 0, kCmp = 1, kAdd = 2, kMul = 3, kUnary = 4, kApp = 5, kAtom = 6 };

std::string set_text(const IntervalSet& U) {
  std::string s = U.to_string();
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s.compare(i, 3, " + ") == 0) {
      out += " ∪ ";
      i += 2;
    } else {
      out += s[i];
    }
  }
  return out;
}

std::string annotation(const Type& t) { return t.is_arrow() ? "(" + t.to_string() + ")" : t.to_string(); }

class Printer {
 public:
  std::string print(const Term& t, int need) {
    int level = 0;
    std::string s = raw(t, level);
    return level < need ? "(" + s + ")" : s;
  }

 private:
  std::string list(std::span<const TermPtr> args) {
    std::string s = "(";
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (i) s += ", ";
      s += print(*args[i], kOpen);
    }
    return s + ")";
  }

  std::string raw(const Term& t, int& level) {
    level = kAtom;
    switch (t.kind()) {
      case TermKind::Var:
        return t.name();
      case TermKind::Numeral:
        if (t.value() < 0 || (t.value() == 0 && std::signbit(t.value()))) level = kUnary;
        return format_real(t.value());
      case TermKind::Sample:
        return "sample";
      case TermKind::Abs:
        level = kOpen;
        return "fun " + t.name() + " : " + annotation(t.annotation()) + " -> " + print(*t.body(), kOpen);
      case TermKind::Let:
        level = kOpen;
        return "let " + t.name() + " = " + print(*t.bound(), kOpen) + " in " + print(*t.body(), kOpen);
      case TermKind::Ifz:
        level = kOpen;
        return "ifz " + print(*t.scrutinee(), kOpen) + " then " + print(*t.then_branch(), kOpen) +
               " else " + print(*t.else_branch(), kOpen);
      case TermKind::Fix:
        level = kApp;
        return "fix " + print(*t.body(), kAtom);
      case TermKind::App:
        level = kApp;
        return print(*t.fun(), kApp) + " " + print(*t.arg(), kAtom);
      case TermKind::Prim: {
        const Primitive& f = *t.primitive();
        switch (f.notation) {
          case Notation::Infix: {
            level = f.precedence;
            bool assoc = f.precedence != kCmp;
            return print(*t.child(0), assoc ? level : level + 1) + " " + f.name + " " +
                   print(*t.child(1), level + 1);
          }
          case Notation::Chi:
            return "chi[" + set_text(*f.chi_set) + "]" + list(t.children());
          case Notation::Function:
            return f.name + list(t.children());
        }
        return f.name;
      }
      case TermKind::Macro: {
        const auto& info = t.macro_info();
        if (!info.binder.empty()) {
          level = kOpen;
          return "#let " + info.binder + " = " + print(*t.child(0), kOpen) + " in " + print(*t.child(1), kOpen);
        }
        std::string s = "#" + t.name();
        if (info.set) s += "[" + set_text(*info.set) + "]";
        if (!t.children().empty()) s += list(t.children());
        return s;
      }
    }
    return "?";
  }
};

}  // namespace

std::string pretty(const Term& t) { return Printer{}.print(t, kOpen); }

std::string pretty(const Type& t) { return t.to_string(); }

}  // namespace ppcf
