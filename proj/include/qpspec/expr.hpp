// SPDX-License-Identifier: MIT
#pragma once

#include <string>

namespace qpspec {

/// Evaluate a constant arithmetic expression from a configuration file.
///
/// Entries such as projection-matrix elements may be given as strings like
/// "2*pi", "sqrt(5)" or "-2*pi*sqrt(5)" so that irrational constants enter at
/// full double precision instead of as truncated decimals.
///
/// Grammar (ASCII, whitespace ignored):
///   expr   := term (('+' | '-') term)*
///   term   := factor (('*' | '/') factor)*
///   factor := NUMBER | 'pi' | 'sqrt' '(' expr ')' | '-' factor | '(' expr ')'
///
/// Throws invalid_input on any syntax error, with the offending position.
double eval_expression(const std::string& text);

}  // namespace qpspec
