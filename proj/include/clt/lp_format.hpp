#pragma once

#include <string>

#include "clt/lp.hpp"

namespace clt {

/// Writes the standard textual LP format (Minimize / Subject To / Bounds /
/// End). Variable names must be alphanumeric-with-underscore and must not
/// start with a digit; anything else raises UnsupportedName. Unnamed rows get
/// generated names c<i>.
std::string export_lp_format(const LpProblem& problem);

/// Parses the subset of the LP format emitted by export_lp_format (enough to
/// make export/parse a round trip). Zero-coefficient terms are dropped.
LpProblem parse_lp_format(const std::string& text);

/// Structural equality modulo generated row names, for round-trip checks.
bool problems_equivalent(const LpProblem& a, const LpProblem& b);

} // namespace clt
