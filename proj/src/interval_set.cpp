#include "ppcf/interval_set.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>

#include "ppcf/error.hpp"

namespace ppcf {

ParseError::ParseError(std::size_t line, std::size_t column, std::string message,
                       std::vector<std::string> expected)
    : Error([&] {
        std::string m = std::to_string(line) + ":" + std::to_string(column) + ": " + message;
        if (!expected.empty()) {
          m += " (expected ";
          for (std::size_t i = 0; i < expected.size(); ++i) {
            if (i) m += ", ";
            m += expected[i];
          }
          m += ")";
        }
        return m;
      }()),
      line_(line),
      column_(column),
      expected_(std::move(expected)) {}

NonConvergent::NonConvergent(std::size_t iterations, std::vector<double> last_masses)
    : Error("fixpoint did not converge after " + std::to_string(iterations) + " iterations"),
      iterations_(iterations),
      last_masses_(std::move(last_masses)) {}

std::string format_real(double r) {
  if (std::isinf(r)) return r > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, r);
  return std::string(buf, end);
}

bool Interval::contains(double r) const noexcept {
  if (r < lo || r > hi) return false;
  if (r == lo && !lo_closed) return false;
  if (r == hi && !hi_closed) return false;
  return true;
}

namespace {

bool well_formed(Interval& iv) {
  if (std::isnan(iv.lo) || std::isnan(iv.hi)) return false;
  if (std::isinf(iv.lo)) iv.lo_closed = false;
  if (std::isinf(iv.hi)) iv.hi_closed = false;
  if (iv.lo > iv.hi) return false;
  if (iv.lo == iv.hi) return iv.lo_closed && iv.hi_closed;
  return true;
}

// Does `a` (starting no later than `b`) overlap or touch `b` so that their
// union is connected?
bool joins(const Interval& a, const Interval& b) {
  if (b.lo < a.hi) return true;
  if (b.lo > a.hi) return false;
  return a.hi_closed || b.lo_closed;
}

}  // namespace

IntervalSet::IntervalSet(std::vector<Interval> pieces) {
  std::vector<Interval> kept;
  kept.reserve(pieces.size());
  for (auto iv : pieces) {
    if (well_formed(iv)) kept.push_back(iv);
  }
  std::sort(kept.begin(), kept.end(), [](const Interval& a, const Interval& b) {
    if (a.lo != b.lo) return a.lo < b.lo;
    return a.lo_closed && !b.lo_closed;
  });
  for (const auto& iv : kept) {
    if (!pieces_.empty() && joins(pieces_.back(), iv)) {
      auto& last = pieces_.back();
      if (iv.hi > last.hi) {
        last.hi = iv.hi;
        last.hi_closed = iv.hi_closed;
      } else if (iv.hi == last.hi) {
        last.hi_closed = last.hi_closed || iv.hi_closed;
      }
    } else {
      pieces_.push_back(iv);
    }
  }
}

IntervalSet IntervalSet::real_line() { return IntervalSet({{-kInf, kInf, false, false}}); }
IntervalSet IntervalSet::point(double c) { return IntervalSet({{c, c, true, true}}); }
IntervalSet IntervalSet::points(std::span<const double> cs) {
  std::vector<Interval> v;
  for (double c : cs) v.push_back({c, c, true, true});
  return IntervalSet(std::move(v));
}
IntervalSet IntervalSet::closed(double lo, double hi) { return IntervalSet({{lo, hi, true, true}}); }
IntervalSet IntervalSet::open(double lo, double hi) { return IntervalSet({{lo, hi, false, false}}); }
IntervalSet IntervalSet::closed_open(double lo, double hi) {
  return IntervalSet({{lo, hi, true, false}});
}
IntervalSet IntervalSet::open_closed(double lo, double hi) {
  return IntervalSet({{lo, hi, false, true}});
}
IntervalSet IntervalSet::at_most(double b) { return IntervalSet({{-kInf, b, false, true}}); }

bool IntervalSet::contains(double r) const noexcept {
  auto it = std::upper_bound(pieces_.begin(), pieces_.end(), r,
                             [](double x, const Interval& iv) { return x < iv.lo; });
  if (it == pieces_.begin()) return false;
  return std::prev(it)->contains(r);
}

IntervalSet IntervalSet::unite(const IntervalSet& other) const {
  std::vector<Interval> all(pieces_.begin(), pieces_.end());
  all.insert(all.end(), other.pieces_.begin(), other.pieces_.end());
  return IntervalSet(std::move(all));
}

IntervalSet IntervalSet::intersect(const IntervalSet& other) const {
  std::vector<Interval> out;
  for (const auto& a : pieces_) {
    for (const auto& b : other.pieces_) {
      Interval c{};
      if (a.lo > b.lo) {
        c.lo = a.lo;
        c.lo_closed = a.lo_closed;
      } else if (b.lo > a.lo) {
        c.lo = b.lo;
        c.lo_closed = b.lo_closed;
      } else {
        c.lo = a.lo;
        c.lo_closed = a.lo_closed && b.lo_closed;
      }
      if (a.hi < b.hi) {
        c.hi = a.hi;
        c.hi_closed = a.hi_closed;
      } else if (b.hi < a.hi) {
        c.hi = b.hi;
        c.hi_closed = b.hi_closed;
      } else {
        c.hi = a.hi;
        c.hi_closed = a.hi_closed && b.hi_closed;
      }
      out.push_back(c);
    }
  }
  return IntervalSet(std::move(out));
}

IntervalSet IntervalSet::complement() const {
  std::vector<Interval> out;
  double lo = -kInf;
  bool lo_closed = false;
  for (const auto& iv : pieces_) {
    out.push_back({lo, iv.lo, lo_closed, !iv.lo_closed});
    lo = iv.hi;
    lo_closed = !iv.hi_closed;
  }
  out.push_back({lo, kInf, lo_closed, false});
  return IntervalSet(std::move(out));
}

bool IntervalSet::subset_of(const IntervalSet& other) const {
  return intersect(other) == *this;
}

IntervalSet IntervalSet::without_points() const {
  std::vector<Interval> out;
  for (const auto& iv : pieces_) {
    if (!iv.is_point()) out.push_back(iv);
  }
  IntervalSet s;
  s.pieces_ = std::move(out);
  return s;
}

IntervalSet IntervalSet::affine(double scale, double shift) const {
  if (scale == 0.0) return empty() ? IntervalSet{} : point(shift);
  std::vector<Interval> out;
  for (const auto& iv : pieces_) {
    double a = iv.lo * scale + shift;
    double b = iv.hi * scale + shift;
    if (scale > 0) {
      out.push_back({a, b, iv.lo_closed, iv.hi_closed});
    } else {
      out.push_back({b, a, iv.hi_closed, iv.lo_closed});
    }
  }
  return IntervalSet(std::move(out));
}

double IntervalSet::length() const noexcept {
  double total = 0.0;
  for (const auto& iv : pieces_) total += iv.hi - iv.lo;
  return total;
}

std::string IntervalSet::to_string() const {
  if (pieces_.empty()) return "{}";
  std::string out;
  std::size_t i = 0;
  while (i < pieces_.size()) {
    if (!out.empty()) out += " + ";
    if (pieces_[i].is_point()) {
      out += "{";
      bool first = true;
      while (i < pieces_.size() && pieces_[i].is_point()) {
        if (!first) out += ", ";
        out += format_real(pieces_[i].lo);
        first = false;
        ++i;
      }
      out += "}";
    } else {
      const auto& iv = pieces_[i++];
      out += iv.lo_closed ? "[" : "(";
      out += format_real(iv.lo) + "," + format_real(iv.hi);
      out += iv.hi_closed ? "]" : ")";
    }
  }
  return out;
}

namespace {

class SetLexer {
 public:
  explicit SetLexer(std::string_view text) : text_(text) {}

  void skip_ws() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' ||
                                   text_[pos_] == '\n' || text_[pos_] == '\r'))
      ++pos_;
  }
  bool at_end() {
    skip_ws();
    return pos_ >= text_.size();
  }
  bool accept(std::string_view tok) {
    skip_ws();
    if (text_.substr(pos_, tok.size()) == tok) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }
  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }
  [[noreturn]] void fail(const std::string& msg, std::vector<std::string> expected) {
    throw ParseError(1, pos_ + 1, msg, std::move(expected));
  }
  void expect(std::string_view tok) {
    if (!accept(tok)) fail("unexpected input in interval set", {"'" + std::string(tok) + "'"});
  }
  double number() {
    skip_ws();
    bool neg = false;
    if (accept("-")) neg = true;
    else accept("+");
    skip_ws();
    if (accept("inf")) return neg ? -IntervalSet::kInf : IntervalSet::kInf;
    const char* begin = text_.data() + pos_;
    const char* end = text_.data() + text_.size();
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{} || ptr == begin) fail("expected a number", {"number", "inf"});
    pos_ += static_cast<std::size_t>(ptr - begin);
    return neg ? -v : v;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

IntervalSet IntervalSet::parse(std::string_view text) {
  SetLexer lx(text);
  std::vector<Interval> pieces;
  if (lx.at_end()) return IntervalSet{};
  if (lx.accept("R") || lx.accept("ℝ")) {
    pieces.push_back({-kInf, kInf, false, false});
  }
  for (bool first = pieces.empty();; first = false) {
    if (!first) {
      if (lx.at_end()) break;
      if (!(lx.accept("+") || lx.accept("∪") || lx.accept("U")))
        lx.fail("expected a set separator", {"'+'", "'∪'"});
    }
    char c = lx.peek();
    if (c == '{') {
      lx.expect("{");
      if (!lx.accept("}")) {
        do {
          double v = lx.number();
          pieces.push_back({v, v, true, true});
        } while (lx.accept(","));
        lx.expect("}");
      }
    } else if (c == '[' || c == '(') {
      bool lo_closed = lx.accept("[");
      if (!lo_closed) lx.expect("(");
      double lo = lx.number();
      lx.expect(",");
      double hi = lx.number();
      bool hi_closed = lx.accept("]");
      if (!hi_closed) lx.expect(")");
      if (lo > hi) lx.fail("interval with lower bound above upper bound", {});
      pieces.push_back({lo, hi, lo_closed, hi_closed});
    } else if (lx.accept("R") || lx.accept("ℝ")) {
      pieces.push_back({-kInf, kInf, false, false});
    } else {
      lx.fail("expected an interval or point set", {"'['", "'('", "'{'"});
    }
  }
  return IntervalSet(std::move(pieces));
}

}  // namespace ppcf
