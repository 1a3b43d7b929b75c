#include "mero/polynomial.hpp"

#include <algorithm>
#include <functional>

#include "mero/errors.hpp"

namespace mero {

Monomial::Monomial(std::vector<Power> powers) {
  std::sort(powers.begin(), powers.end());
  for (const auto& [index, exponent] : powers) {
    if (index < 1 || exponent < 0) throw InvalidArgument("bad monomial power");
    if (exponent == 0) continue;
    if (!powers_.empty() && powers_.back().first == index) {
      powers_.back().second += exponent;
    } else {
      powers_.emplace_back(index, exponent);
    }
  }
}

Monomial Monomial::variable(int index, int exponent) { return Monomial({{index, exponent}}); }

int Monomial::degree() const {
  int d = 0;
  for (const auto& p : powers_) d += p.second;
  return d;
}

int Monomial::exponent(int index) const {
  for (const auto& [i, e] : powers_) {
    if (i == index) return e;
  }
  return 0;
}

Monomial Monomial::without(int index) const {
  Monomial out;
  for (const auto& p : powers_) {
    if (p.first != index) out.powers_.push_back(p);
  }
  return out;
}

Monomial operator*(const Monomial& a, const Monomial& b) {
  Monomial out;
  auto x = a.powers_.begin();
  auto y = b.powers_.begin();
  while (x != a.powers_.end() || y != b.powers_.end()) {
    if (y == b.powers_.end() || (x != a.powers_.end() && x->first < y->first)) {
      out.powers_.push_back(*x++);
    } else if (x == a.powers_.end() || y->first < x->first) {
      out.powers_.push_back(*y++);
    } else {
      out.powers_.emplace_back(x->first, x->second + y->second);
      ++x;
      ++y;
    }
  }
  return out;
}

std::strong_ordering operator<=>(const Monomial& a, const Monomial& b) {
  if (auto c = a.degree() <=> b.degree(); c != 0) return c;
  auto x = a.powers_.begin();
  auto y = b.powers_.begin();
  while (x != a.powers_.end() && y != b.powers_.end()) {
    if (x->first != y->first) {
      // The one with the smaller index has a positive exponent where the other
      // has zero.
      return x->first < y->first ? std::strong_ordering::greater : std::strong_ordering::less;
    }
    if (x->second != y->second) return x->second <=> y->second;
    ++x;
    ++y;
  }
  // Same degree and a common prefix means both ran out together.
  return std::strong_ordering::equal;
}

Polynomial::Polynomial(const Rational& constant) {
  if (constant != 0) terms_.emplace(Monomial(), constant);
}

Polynomial::Polynomial(const LinearForm& form) {
  for (const auto& [index, c] : form.terms()) terms_.emplace(Monomial::variable(index), c);
}

Polynomial::Polynomial(const Monomial& m, const Rational& c) {
  if (c != 0) terms_.emplace(m, c);
}

bool Polynomial::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one());
}

Rational Polynomial::constant_term() const {
  auto it = terms_.find(Monomial());
  return it == terms_.end() ? Rational(0) : it->second;
}

int Polynomial::total_degree() const {
  return terms_.empty() ? -1 : terms_.rbegin()->first.degree();
}

int Polynomial::degree_in(int index) const {
  int d = terms_.empty() ? -1 : 0;
  for (const auto& [m, _] : terms_) d = std::max(d, m.exponent(index));
  return d;
}

std::vector<int> Polynomial::variables() const {
  std::vector<int> out;
  for (const auto& [m, _] : terms_) {
    for (const auto& p : m.powers()) out.push_back(p.first);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

int Polynomial::max_variable() const {
  auto vars = variables();
  return vars.empty() ? 0 : vars.back();
}

std::map<int, Polynomial> Polynomial::coefficients_in(int index) const {
  std::map<int, Polynomial> out;
  for (const auto& [m, c] : terms_) out[m.exponent(index)].add_term(m.without(index), c);
  for (auto it = out.begin(); it != out.end();) {
    it = it->second.is_zero() ? out.erase(it) : std::next(it);
  }
  return out;
}

Polynomial Polynomial::derivative(int index) const {
  Polynomial out;
  for (const auto& [m, c] : terms_) {
    int e = m.exponent(index);
    if (e == 0) continue;
    out.add_term(m.without(index) * Monomial::variable(index, e - 1), c * e);
  }
  return out;
}

Polynomial Polynomial::pow(int exponent) const {
  if (exponent < 0) throw InvalidArgument("negative polynomial power");
  Polynomial result(1);
  Polynomial base = *this;
  while (exponent > 0) {
    if (exponent & 1) result *= base;
    exponent >>= 1;
    if (exponent) base *= base;
  }
  return result;
}

namespace {

// Horner's scheme in the largest variable, recursing into the coefficients.
Polynomial substitute_from(const Polynomial& p, std::map<int, std::optional<Polynomial>>& images,
                           const std::function<std::optional<Polynomial>(int)>& lookup) {
  if (p.is_constant()) return p;
  const int v = p.max_variable();
  auto it = images.find(v);
  if (it == images.end()) it = images.emplace(v, lookup(v)).first;
  const Polynomial image = it->second ? *it->second : Polynomial::variable(v);
  const auto coefficients = p.coefficients_in(v);
  Polynomial out;
  int degree = coefficients.rbegin()->first;
  for (auto c = coefficients.rbegin(); c != coefficients.rend(); ++c) {
    for (; degree > c->first; --degree) out *= image;
    out += substitute_from(c->second, images, lookup);
  }
  for (; degree > 0; --degree) out *= image;
  return out;
}

}  // namespace

Polynomial Polynomial::substitute(const std::function<std::optional<Polynomial>(int)>& images) const {
  std::map<int, std::optional<Polynomial>> cache;
  return substitute_from(*this, cache, images);
}

void Polynomial::add_term(const Monomial& m, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  for (const auto& [m, c] : other.terms_) add_term(m, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  for (const auto& [m, c] : other.terms_) add_term(m, -c);
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  Polynomial out;
  Rational product;
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      product = ca * cb;
      auto [it, inserted] = out.terms_.try_emplace(ma * mb, product);
      if (!inserted) it->second += product;
    }
  }
  std::erase_if(out.terms_, [](const auto& term) { return term.second == 0; });
  return out;
}

Polynomial& Polynomial::operator*=(const Polynomial& other) { return *this = *this * other; }

Polynomial& Polynomial::operator*=(const Rational& factor) {
  if (factor == 0) {
    terms_.clear();
  } else {
    for (auto& [_, c] : terms_) c *= factor;
  }
  return *this;
}

std::strong_ordering operator<=>(const Polynomial& a, const Polynomial& b) {
  auto x = a.terms_.begin();
  auto y = b.terms_.begin();
  for (; x != a.terms_.end() && y != b.terms_.end(); ++x, ++y) {
    if (auto c = x->first <=> y->first; c != 0) return c;
    if (x->second != y->second) {
      return x->second < y->second ? std::strong_ordering::less : std::strong_ordering::greater;
    }
  }
  return a.terms_.size() <=> b.terms_.size();
}

std::optional<Polynomial> divide_exact(const Polynomial& p, const LinearForm& form) {
  if (form.is_zero()) throw InvalidArgument("division by the zero form");
  if (p.is_zero()) return Polynomial();
  // form = a z_v + rest; synthetic division by (z_v - root), root = -rest/a.
  const int v = form.min_variable();
  const Rational a = form.terms().front().second;
  LinearForm rest = form - LinearForm::variable(v, a);
  const Polynomial root = Polynomial(rest) * (Rational(-1) / a);

  auto coeffs = p.coefficients_in(v);
  const int degree = coeffs.rbegin()->first;
  if (degree == 0) return std::nullopt;
  std::vector<Polynomial> c(degree + 1);
  for (auto& [k, poly] : coeffs) c[k] = std::move(poly);
  // q_{d-1} = c_d, q_{k-1} = c_k + root * q_k, remainder = c_0 + root * q_0.
  std::vector<Polynomial> q(degree);
  q[degree - 1] = c[degree];
  for (int k = degree - 1; k >= 1; --k) q[k - 1] = c[k] + root * q[k];
  if (!(c[0] + root * q[0]).is_zero()) return std::nullopt;
  Polynomial quotient;
  for (int k = 0; k < degree; ++k) {
    quotient += q[k] * Polynomial(Monomial::variable(v, k), 1);
  }
  return quotient * (Rational(1) / a);
}

std::string to_string(const Polynomial& p) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
    const auto& [m, c] = *it;
    Rational magnitude = abs(c);
    if (first) {
      if (c < 0) out += "-";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    std::string mono;
    for (const auto& [index, e] : m.powers()) {
      if (!mono.empty()) mono += "*";
      mono += "z" + std::to_string(index);
      if (e != 1) mono += "^" + std::to_string(e);
    }
    if (mono.empty()) {
      out += to_string(magnitude);
    } else if (magnitude == 1) {
      out += mono;
    } else {
      out += to_string(magnitude) + "*" + mono;
    }
    first = false;
  }
  return out;
}

}  // namespace mero

namespace mero {

Rational evaluate(const Polynomial& p, const std::vector<Rational>& point) {
  Rational sum = 0;
  for (const auto& [m, c] : p.terms()) {
    Rational term = c;
    for (const auto& [index, e] : m.powers()) {
      if (static_cast<std::size_t>(index) > point.size()) {
        term = 0;
        break;
      }
      Rational x = point[index - 1];
      for (int k = 0; k < e; ++k) term *= x;
    }
    sum += term;
  }
  return sum;
}

Rational evaluate(const LinearForm& form, const std::vector<Rational>& point) {
  Rational sum = 0;
  for (const auto& [index, c] : form.terms()) {
    if (static_cast<std::size_t>(index) <= point.size()) sum += c * point[index - 1];
  }
  return sum;
}

}  // namespace mero
