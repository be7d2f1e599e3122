#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ppcf/syntax.hpp"

namespace ppcf {

/// A parsed `.ppcf` file. `definitions` and `main` are core terms: macros are
/// expanded and earlier definitions are inlined.
struct SourceProgram {
  std::string text;
  std::vector<std::pair<std::string, TermPtr>> definitions;
  TermPtr main;
};

/// program := { "def" name "=" expr ";" } expr [";"]
///
/// expr  := let x = expr in expr | fun x : tatom -> expr
///        | ifz expr then expr else expr | #let x = expr in expr | cmp
/// cmp   := add [ ("=" | "<" | "<=" | ">" | ">=") add ]
/// add   := mul { ("+" | "-") mul }
/// mul   := unary { ("*" | "/") unary }
/// unary := "-" unary | app
/// app   := ( "fix" atom | atom ) { atom }
/// atom  := number | name | sample | "(" expr ")" | chi[set](expr)
///        | prim(expr, ...) | #macro[set](expr, ...)
/// type  := tatom [ -> type ]
/// tatom := real | (type)
///
/// An arrow-typed parameter needs parentheses: `fun f : (real -> real) -> f 1`.
/// `-` directly before a number literal gives a negative numeral. Comments run
/// from `--` to the end of the line. Throws ParseError, and anything
/// `expand_sugar` throws.
SourceProgram parse(std::string_view text);

/// A single expression in surface syntax: no definitions, macros kept.
TermPtr parse_term(std::string_view text);

/// Type syntax alone, e.g. "(real -> real) -> real".
Type parse_type(std::string_view text);

}  // namespace ppcf
