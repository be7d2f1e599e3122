#pragma once

#include <string>
#include <vector>

#include "ppcf/syntax.hpp"

namespace ppcf {

/// Replaces every Macro node by core syntax. `ctx` types the free variables
/// of `surface`; it is needed because `#if` and `#let` wrap arrow-typed
/// branches in abstractions.
///
///   #bernoulli(p)        let x = sample in x <= p
///   #exponential         let x = sample in -log(x)
///   #normal              Box-Muller from two samples
///   #gaussian(mu, sigma) sigma * normal + mu
///   #observe[U](m)       rejection sampling until the draw lands in U
///   #expectation_n(f, m) (f m + ... + f m) / n
///   #if[U](l, m, n)      m if l in U, else n
///   #let x = m in n      let at any result type
///
/// Combinators may be partially applied (`#bernoulli` alone has type
/// real -> real). Throws UnknownMacro, ArityError, TypeError.
TermPtr expand_sugar(const TermPtr& surface, const TypingContext& ctx = {});

/// The closed core term a combinator macro stands for, before application.
TermPtr macro_combinator(const std::string& name, const std::optional<IntervalSet>& set = {});

std::vector<std::string> macro_names();

}  // namespace ppcf
