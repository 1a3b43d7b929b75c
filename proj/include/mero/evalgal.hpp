#pragma once

#include <compare>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mero/fracmap.hpp"
#include "mero/germ.hpp"

namespace mero {

// A real number, either an exact rational or a long double midpoint with a
// rigorous error radius. Operations on two exact values stay exact.
class Real {
 public:
  Real() = default;  // exact 0
  Real(const Rational& value) : exact_(value) {}  // NOLINT
  Real(int value) : exact_(Rational(value)) {}    // NOLINT
  static Real approx(long double mid, long double radius);

  bool is_exact() const { return exact_.has_value(); }
  const Rational& exact() const { return *exact_; }
  long double mid() const;
  long double radius() const { return radius_; }
  bool is_zero() const { return exact_ && *exact_ == 0; }

  Real& operator+=(const Real& other);
  Real& operator*=(const Real& other);
  friend Real operator+(Real a, const Real& b) { return a += b; }
  friend Real operator*(Real a, const Real& b) { return a *= b; }
  friend Real operator-(const Real& a);
  friend Real operator-(const Real& a, const Real& b) { return a + -b; }
  // Representation equality; use within() to compare values.
  friend bool operator==(const Real&, const Real&) = default;

 private:
  std::optional<Rational> exact_ = Rational(0);
  long double mid_ = 0;
  long double radius_ = 0;
};

// Exact values print as "p/q"; approximate ones with the given number of
// decimals.
std::string to_string(const Real& x, int decimals = 12);

// Whether |a - b| <= tol is guaranteed by the radii. With tol = 0 both values
// must be exact and equal.
bool within(const Real& a, const Real& b, long double tol);

// Single-variable regularized evaluation: the z_i^0 coefficient of the Laurent
// expansion of f in z_i, with the other variables generic.
RationalGerm ev_reg_single(const RationalGerm& f, int i);

// 1/k! sum over the orders of vars of the iterated single-variable
// evaluations. Throws TooManyVariables when k exceeds the cap and
// DependenceEscapesVars when f depends on directions outside span(z_v).
Rational iter_eval(const RationalGerm& f, const std::vector<int>& vars, int perm_cap = 8);

// zeta(s_1, ..., s_k) = sum_{n_1 > ... > n_k >= 1} n_1^{-s_1} ... n_k^{-s_k},
// with radius at most 10^-precision. Throws DivergentIndex when s_1 = 1 and
// PrecisionUnattainable when the truncation needed is too large.
Real mzv_numeric(const std::vector<int>& s, int precision);

// h * prod of fraction specs, with h orthogonal to the fractions and the
// fractions pairwise orthogonal.
struct LocalityMonomial {
  Polynomial holo = Polynomial(1);
  std::vector<FractionSpec> factors;  // sorted

  RationalGerm germ() const;
  friend bool operator==(const LocalityMonomial&, const LocalityMonomial&) = default;
  friend std::strong_ordering operator<=>(const LocalityMonomial& a, const LocalityMonomial& b);
};

using LocalityCombo = std::map<LocalityMonomial, Real>;

// Merges weight * monomial into the combination. Holomorphic coefficients are
// kept with leading coefficient 1, so the representation is canonical.
void add_to(LocalityCombo& combo, LocalityMonomial monomial, const Real& weight);
LocalityCombo operator*(const LocalityCombo& a, const LocalityCombo& b);
// Requires exact weights.
RationalGerm combo_germ(const LocalityCombo& combo);
// Throws NotLocal if a monomial is not a product of pairwise orthogonal
// factors under the inner product of its L-map.
void check_local(const LocalityCombo& combo);
// Rewrites every factor as a polynomial in Lyndon specs.
LocalityCombo lyndon_normal_form(const LocalityCombo& combo);
std::string to_string(const LocalityCombo& combo, int decimals = 12);

// Value at 0 of the holomorphic part, with its own decomposition.
Real ms_eval(const LocalityCombo& combo, const InnerProduct& q = {});
Real iter_eval(const LocalityCombo& combo, const std::vector<int>& vars, int perm_cap = 8);
// Assigns zeta(t_1, ..., t_k) to a Lyndon spec whose word has block exponents
// t_1, ..., t_k when t_1 >= 2 and 0 otherwise, and extends multiplicatively.
// Throws NotChen for fractions outside the Chen map and NotLocal.
Real zeta_eval(const LocalityCombo& combo, int precision);

struct Evaluator {
  std::string name;
  std::function<Real(const LocalityCombo&)> evaluate;

  Real operator()(const LocalityCombo& combo) const { return evaluate(combo); }
};

Evaluator ms_evaluator(const InnerProduct& q = {});
Evaluator iter_evaluator(std::vector<int> vars, int perm_cap = 8);
Evaluator zeta_evaluator(int precision);

// All Lyndon specs over the given letters of weight at most max_weight.
std::vector<FractionSpec> lyndon_generators(const std::shared_ptr<const LMap>& lmap,
                                            const std::vector<Letter>& letters, int max_weight);

// A triangular substitution s -> s + c(s) on Lyndon generators, where every
// term of c(s) has smaller weight and a smaller supporting space than s.
// Generators without an entry are left fixed.
class GaloisTransform {
 public:
  using Corrections = std::map<FractionSpec, LocalityCombo>;

  GaloisTransform() = default;
  // Throws InvalidArgument for non-Lyndon generators or corrections that are
  // not lower order.
  explicit GaloisTransform(Corrections corrections);
  static GaloisTransform shifts(const std::map<FractionSpec, Real>& shifts);

  const Corrections& corrections() const { return corrections_; }
  std::vector<FractionSpec> generators() const;
  bool is_shift() const;
  // The constant c(s) of a shift generator.
  std::optional<Real> shift(const FractionSpec& generator) const;

 private:
  Corrections corrections_;
};

// The shift with c(s) = e(s). Throws EvaluatorDomain if e fails on some s.
GaloisTransform galois_from_evaluator(const Evaluator& e, const std::vector<FractionSpec>& generators);
// Throws NotLocal.
LocalityCombo apply_transform(const GaloisTransform& t, const LocalityCombo& combo);
// apply(compose(t1, t2), x) = apply(t1, apply(t2, x)). Both throw
// IncompatibleGenerators unless the transforms are shifts on the same
// generators.
GaloisTransform compose_transforms(const GaloisTransform& t1, const GaloisTransform& t2);
GaloisTransform invert_transform(const GaloisTransform& t);

struct FactorizationCase {
  LocalityCombo combo;
  Real expected;  // e(x)
  Real actual;    // ms_eval(apply_transform(t, x))
  bool pass = false;
};

struct FactorizationReport {
  std::vector<FactorizationCase> cases;
  bool all_pass() const;
};

// Compares e(x) with ms_eval(apply_transform(t, x)) for every test.
FactorizationReport check_factorization(const Evaluator& e, const GaloisTransform& t,
                                        const std::vector<LocalityCombo>& tests, long double tol,
                                        const InnerProduct& q = {});

}  // namespace mero
