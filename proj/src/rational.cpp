#include "mero/rational.hpp"

#include <cctype>

#include "mero/errors.hpp"

namespace mero {

Rational parse_rational(std::string_view text) {
  std::string s(text);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  if (s.empty()) throw InvalidArgument("empty rational literal");
  std::size_t start = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  bool seen_slash = false;
  bool digit_before = false;
  bool digit_after = false;
  for (std::size_t i = start; i < s.size(); ++i) {
    char c = s[i];
    if (c == '/' && !seen_slash) {
      seen_slash = true;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      (seen_slash ? digit_after : digit_before) = true;
    } else {
      throw InvalidArgument("malformed rational literal '" + s + "'");
    }
  }
  if (!digit_before || (seen_slash && !digit_after)) {
    throw InvalidArgument("malformed rational literal '" + s + "'");
  }
  if (s[0] == '+') s.erase(s.begin());
  Rational r;
  if (r.set_str(s, 10) != 0) throw InvalidArgument("malformed rational literal '" + s + "'");
  if (r.get_den() == 0) throw InvalidArgument("zero denominator in '" + s + "'");
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& value) { return value.get_str(); }

long double to_long_double(const Rational& value) {
  // Two-step conversion through a 128-bit float recovers the bits that a
  // single get_d() would drop.
  mpf_class f(value, 128);
  double hi = f.get_d();
  mpf_class rest = f - mpf_class(hi, 128);
  return static_cast<long double>(hi) + static_cast<long double>(rest.get_d());
}

Rational abs(const Rational& value) { return value < 0 ? Rational(-value) : value; }

}  // namespace mero
