#pragma once

#include <compare>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mero/rational.hpp"

namespace mero {

// A homogeneous linear form sum_i c_i z_i over the variables z_1, z_2, ...
// Terms are kept sorted by variable index with no zero coefficients, so the
// representation is unique.
class LinearForm {
 public:
  using Term = std::pair<int, Rational>;

  LinearForm() = default;
  explicit LinearForm(std::vector<Term> terms);

  static LinearForm variable(int index, const Rational& coefficient = 1);
  // z_I = sum_{i in I} z_i.
  static LinearForm sum_of(std::span<const int> indices);

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  Rational coefficient(int index) const;
  int min_variable() const;  // 0 for the zero form
  int max_variable() const;  // 0 for the zero form
  std::vector<int> support() const;

  // Scalar multiple with integer coprime coefficients and a positive
  // coefficient on the smallest variable. Returns the scale factor c with
  // primitive() == c * (*this).
  std::pair<LinearForm, Rational> primitive() const;

  LinearForm& operator+=(const LinearForm& other);
  LinearForm& operator-=(const LinearForm& other);
  LinearForm& operator*=(const Rational& factor);

  friend LinearForm operator+(LinearForm a, const LinearForm& b) { return a += b; }
  friend LinearForm operator-(LinearForm a, const LinearForm& b) { return a -= b; }
  friend LinearForm operator*(LinearForm a, const Rational& c) { return a *= c; }
  friend LinearForm operator*(const Rational& c, LinearForm a) { return a *= c; }
  friend LinearForm operator-(LinearForm a) { return a *= Rational(-1); }

  friend bool operator==(const LinearForm& a, const LinearForm& b) { return a.terms_ == b.terms_; }
  // Dense lexicographic order: compare the coefficient of z_1, then z_2, ...
  friend std::strong_ordering operator<=>(const LinearForm& a, const LinearForm& b);

 private:
  void add_scaled(const LinearForm& other, const Rational& factor);

  std::vector<Term> terms_;
};

// Plain dot product of coefficient vectors.
Rational dot(const LinearForm& a, const LinearForm& b);

// "z1 + 2*z2 - 1/2*z3"; "0" for the zero form.
std::string to_string(const LinearForm& form);

}  // namespace mero
