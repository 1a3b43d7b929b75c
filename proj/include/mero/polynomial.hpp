#pragma once

#include <compare>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mero/linear_form.hpp"
#include "mero/rational.hpp"

namespace mero {

// z_{i1}^{e1} z_{i2}^{e2} ... with strictly increasing indices and positive
// exponents. The empty monomial is 1.
class Monomial {
 public:
  using Power = std::pair<int, int>;

  Monomial() = default;
  explicit Monomial(std::vector<Power> powers);
  static Monomial variable(int index, int exponent = 1);

  const std::vector<Power>& powers() const { return powers_; }
  int degree() const;
  int exponent(int index) const;
  bool is_one() const { return powers_.empty(); }

  Monomial without(int index) const;
  friend Monomial operator*(const Monomial& a, const Monomial& b);

  friend bool operator==(const Monomial&, const Monomial&) = default;
  // Graded lexicographic: total degree, then exponent of z_1, z_2, ...
  friend std::strong_ordering operator<=>(const Monomial& a, const Monomial& b);

 private:
  std::vector<Power> powers_;
};

// Sparse multivariate polynomial with exact rational coefficients. No zero
// coefficient is ever stored.
class Polynomial {
 public:
  using Terms = std::map<Monomial, Rational>;

  Polynomial() = default;
  Polynomial(const Rational& constant);  // NOLINT: constants convert implicitly
  Polynomial(int constant) : Polynomial(Rational(constant)) {}  // NOLINT
  explicit Polynomial(const LinearForm& form);
  Polynomial(const Monomial& m, const Rational& c);

  static Polynomial variable(int index) { return Polynomial(Monomial::variable(index), 1); }

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  Rational constant_term() const;  // value at 0
  int total_degree() const;        // -1 for the zero polynomial
  int degree_in(int index) const;
  std::vector<int> variables() const;
  int max_variable() const;

  // Coefficient polynomials c_k with p = sum_k c_k z_index^k.
  std::map<int, Polynomial> coefficients_in(int index) const;

  Polynomial derivative(int index) const;
  Polynomial pow(int exponent) const;

  // Replaces every variable z_i by images(i) when present.
  Polynomial substitute(const std::function<std::optional<Polynomial>(int)>& images) const;

  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(const Polynomial& other);
  Polynomial& operator*=(const Rational& factor);

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(Polynomial a, const Rational& c) { return a *= c; }
  friend Polynomial operator*(const Rational& c, Polynomial a) { return a *= c; }
  friend Polynomial operator-(Polynomial a) { return a *= Rational(-1); }

  friend bool operator==(const Polynomial&, const Polynomial&) = default;
  friend std::strong_ordering operator<=>(const Polynomial& a, const Polynomial& b);

 private:
  void add_term(const Monomial& m, const Rational& c);

  Terms terms_;
};

// Exact quotient p / L when L divides p, nullopt otherwise.
std::optional<Polynomial> divide_exact(const Polynomial& p, const LinearForm& form);

// Terms in decreasing graded-lex order, e.g. "z1^2 - 1/2*z1*z2 + 3".
std::string to_string(const Polynomial& p);

// Value at a point; point[i - 1] is the value of z_i, missing entries are 0.
Rational evaluate(const Polynomial& p, const std::vector<Rational>& point);
Rational evaluate(const LinearForm& form, const std::vector<Rational>& point);

}  // namespace mero
