#pragma once

#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "mero/evalgal.hpp"

namespace mero::cli {

// Germ expressions:
//
//   expr   := ['+'|'-'] term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := atom ('^' posint)*
//   atom   := integer | 'z' posint | '(' expr ')'
//
// Every divisor must be a nonzero constant times a product of powers of
// homogeneous linear forms. Throws ParseError, and NonHomogeneousPole for
// affine divisors such as 1 + z1.
RationalGerm parse_germ(std::string_view text);

// A homogeneous linear expression such as "z1 - 1/2*z3". Throws ParseError.
LinearForm parse_linear_form(std::string_view text);

// Sums of products of polynomial expressions and fraction specs, e.g.
// "2*f[2; 1]*f[2; 2] - 1/2*(z3 + 1)*f[1,1; 1,2]". Throws ParseError, and
// InvalidArgument when a factor outside f[...] is not a polynomial.
LocalityCombo parse_combo(std::string_view text, const std::shared_ptr<const LMap>& lmap);

// Runs the command line args (without the program name). Returns 0 on
// success, 1 on domain errors and 2 on parse or usage errors.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace mero::cli
