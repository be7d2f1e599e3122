#pragma once

#include <string>

#include "ppcf/syntax.hpp"

namespace ppcf {

/// Concrete syntax that `parse` reads back to an alpha-equivalent term.
std::string pretty(const Term& t);
inline std::string pretty(const TermPtr& t) { return pretty(*t); }
std::string pretty(const Type& t);

}  // namespace ppcf
