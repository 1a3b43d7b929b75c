#pragma once

#include <compare>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "mero/exactlin.hpp"
#include "mero/polynomial.hpp"

namespace mero {

// A meromorphic germ at 0 with linear poles: numerator / prod_i L_i^{e_i}.
//
// Always normalized: every L_i is primitive (integer coprime coefficients,
// positive leading coefficient), forms are distinct, and no L_i divides the
// numerator. Since linear forms are irreducible, two germs are equal as
// rational functions iff their normalized representations are identical.
class RationalGerm {
 public:
  using Denominator = std::map<LinearForm, int>;

  RationalGerm() = default;  // zero
  RationalGerm(const Polynomial& numerator);  // NOLINT: polynomials are germs
  RationalGerm(const Rational& constant) : RationalGerm(Polynomial(constant)) {}  // NOLINT
  RationalGerm(int constant) : RationalGerm(Polynomial(constant)) {}  // NOLINT

  // numerator / prod form^exponent. Forms need not be primitive, distinct or
  // independent; they must be nonzero and exponents positive.
  static RationalGerm fraction(Polynomial numerator,
                               const std::vector<std::pair<LinearForm, int>>& denominator);
  // 1 / form^exponent.
  static RationalGerm pole(const LinearForm& form, int exponent = 1);

  const Polynomial& numerator() const { return numerator_; }
  const Denominator& denominator() const { return denominator_; }
  bool is_zero() const { return numerator_.is_zero(); }
  bool is_polynomial() const { return denominator_.empty(); }
  int max_variable() const;

  // Numerator after clearing denominators down to the given common multiple,
  // which must contain this germ's denominator.
  Polynomial numerator_over(const Denominator& common) const;

  friend RationalGerm operator+(const RationalGerm& f, const RationalGerm& g);
  friend RationalGerm operator-(const RationalGerm& f, const RationalGerm& g);
  friend RationalGerm operator*(const RationalGerm& f, const RationalGerm& g);
  friend RationalGerm operator-(const RationalGerm& f);
  RationalGerm pow(int exponent) const;

  friend bool operator==(const RationalGerm&, const RationalGerm&) = default;
  friend std::strong_ordering operator<=>(const RationalGerm& a, const RationalGerm& b);

 private:
  void normalize();

  Polynomial numerator_;
  Denominator denominator_;
};

inline RationalGerm germ_add(const RationalGerm& f, const RationalGerm& g) { return f + g; }
inline RationalGerm germ_mul(const RationalGerm& f, const RationalGerm& g) { return f * g; }

// Renders "num" or "(num)/(L1^e1*L2)" in the germ expression syntax.
std::string to_string(const RationalGerm& f);

// 1 / prod L_i^{s_i} with linearly independent primitive forms, sorted by the
// dense lexicographic form order.
class SimplexFraction {
 public:
  using Factor = std::pair<LinearForm, int>;

  SimplexFraction() = default;
  // Throws InvalidArgument if the forms are dependent or an exponent is not
  // positive. Forms are normalized to primitive representatives; the
  // scalar this introduces is returned through `scale` when non-null.
  explicit SimplexFraction(std::vector<Factor> factors, Rational* scale = nullptr);

  const std::vector<Factor>& factors() const { return factors_; }
  bool empty() const { return factors_.empty(); }
  int p_order() const;
  Subspace support() const;
  std::vector<LinearForm> forms() const;
  RationalGerm germ() const;

  friend bool operator==(const SimplexFraction&, const SimplexFraction&) = default;
  friend std::strong_ordering operator<=>(const SimplexFraction& a, const SimplexFraction& b);

 private:
  std::vector<Factor> factors_;
};

std::string to_string(const SimplexFraction& s);

// numerator / simplex with Dep(numerator) orthogonal to the supporting space.
struct PolarTerm {
  Polynomial numerator;
  SimplexFraction denominator;

  RationalGerm germ() const;
  friend bool operator==(const PolarTerm&, const PolarTerm&) = default;
};

// Canonical polar decomposition f = sum_j h_j / S_j + h_0. Terms are sorted by
// (supporting space, p-order, simplex) and the simplices are pairwise distinct.
struct Decomposition {
  std::vector<PolarTerm> terms;
  Polynomial holomorphic;

  bool empty() const { return terms.empty() && holomorphic.is_zero(); }
  friend bool operator==(const Decomposition&, const Decomposition&) = default;
};

Decomposition decompose(const RationalGerm& f, const InnerProduct& q);
RationalGerm recompose(const Decomposition& d);

// Holomorphic part h_0 of the decomposition.
Polynomial project_plus(const RationalGerm& f, const InnerProduct& q);
// Minimal subtraction: h_0(0).
Rational ms_eval(const RationalGerm& f, const InnerProduct& q);

// Top p-order (resp. top supporting-space dimension) polar terms with their
// numerators frozen at 0, as the canonical decomposition of their sum, so
// equal residues compare equal. The holomorphic part is 0.
Decomposition p_residue(const RationalGerm& f, const InnerProduct& q);
Decomposition d_residue(const RationalGerm& f, const InnerProduct& q);

// Dep of a polynomial: span over monomials m of sum_j [m](d p / d z_j) z_j,
// the annihilator of the directions along which p is constant.
Subspace polynomial_dependence(const Polynomial& p);

// Smallest subspace of linear forms the germ depends on, assembled as the sum
// of the dependence spaces of the supporting-space components of the
// decomposition plus that of the holomorphic part.
Subspace dependence(const RationalGerm& f, const InnerProduct& q);

bool is_local_pair(const RationalGerm& f, const RationalGerm& g, const InnerProduct& q);

// f * g, defined only when f and g are Q-orthogonal; throws NotLocal otherwise.
RationalGerm locality_mul(const RationalGerm& f, const RationalGerm& g, const InnerProduct& q);

}  // namespace mero
