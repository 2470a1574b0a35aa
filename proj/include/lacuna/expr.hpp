#pragma once

#include <string_view>

#include "lacuna/trigpoly.hpp"

namespace lacuna {

// Parses function expressions into trig polynomials.
//
//   expr   := term (('+' | '-') term)*
//   term   := factor (('*' | '/') factor)*       '/' needs a constant divisor
//   factor := ('+' | '-') factor | primary ('^' int)?
//   primary:= number | 'pi' | 'z' | 'zbar' | '(' expr ')'
//
// Examples: "z^2", "(pi/4)*(1+z)", "0.5*z + 0.5*zbar".
TrigPoly parse_function(std::string_view text);

}  // namespace lacuna
