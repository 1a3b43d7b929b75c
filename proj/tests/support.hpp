#pragma once

#include <random>
#include <vector>

#include <doctest.h>

#include "mero/germ.hpp"

namespace mero::testing {

inline LinearForm z(int i) { return LinearForm::variable(i); }
inline Polynomial Z(int i) { return Polynomial::variable(i); }
inline Rational q(long p, long d = 1) {
  Rational r(p, d);
  r.canonicalize();
  return r;
}

inline LinearForm form(std::initializer_list<std::pair<int, long>> terms) {
  std::vector<LinearForm::Term> out;
  for (auto [i, c] : terms) out.emplace_back(i, Rational(c));
  return LinearForm(out);
}

inline RationalGerm over(const Polynomial& num, std::vector<std::pair<LinearForm, int>> den) {
  return RationalGerm::fraction(num, den);
}

// Small-coefficient random generators for property tests.
class Random {
 public:
  explicit Random(unsigned seed) : engine_(seed) {}

  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }

  Rational rational(int bound = 5) {
    int den = uniform(1, 3);
    return q(uniform(-bound, bound), den);
  }

  LinearForm linear_form(int vars) {
    for (;;) {
      std::vector<LinearForm::Term> terms;
      for (int i = 1; i <= vars; ++i) {
        if (uniform(0, 2) == 0) continue;
        terms.emplace_back(i, Rational(uniform(-2, 2)));
      }
      LinearForm f(terms);
      if (!f.is_zero()) return f;
    }
  }

  Polynomial polynomial(int vars, int degree, int terms) {
    Polynomial p;
    for (int t = 0; t < terms; ++t) {
      std::vector<Monomial::Power> powers;
      int left = uniform(0, degree);
      for (int i = 1; i <= vars && left > 0; ++i) {
        int e = uniform(0, left);
        if (e > 0) powers.emplace_back(i, e);
        left -= e;
      }
      p += Polynomial(Monomial(powers), rational());
    }
    return p;
  }

  RationalGerm germ(int vars = 4, int factors = 3, int max_exp = 3) {
    std::vector<std::pair<LinearForm, int>> den;
    int n = uniform(1, factors);
    for (int k = 0; k < n; ++k) den.emplace_back(linear_form(vars), uniform(1, max_exp));
    Polynomial num = polynomial(vars, 2, uniform(1, 3));
    if (num.is_zero()) num = 1;
    return RationalGerm::fraction(num, den);
  }

  // Random SPD Gram block: A^T A + I.
  InnerProduct gram(int n) {
    std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n));
    for (auto& row : a)
      for (auto& x : row) x = rational(2);
    std::vector<std::vector<Rational>> g(n, std::vector<Rational>(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Rational s = i == j ? 1 : 0;
        for (int k = 0; k < n; ++k) s += a[k][i] * a[k][j];
        g[i][j] = s;
      }
    return InnerProduct(g);
  }

  std::vector<Rational> point(int vars) {
    std::vector<Rational> p;
    for (int i = 0; i < vars; ++i) p.push_back(q(uniform(-40, 40), uniform(1, 17)));
    return p;
  }

  std::mt19937& engine() { return engine_; }

 private:
  std::mt19937 engine_;
};

// Value of a germ at a point, nullopt on a pole.
inline std::optional<Rational> evaluate(const RationalGerm& f, const std::vector<Rational>& x) {
  Rational den = 1;
  for (const auto& [form, e] : f.denominator()) {
    Rational v = mero::evaluate(form, x);
    if (v == 0) return std::nullopt;
    for (int k = 0; k < e; ++k) den *= v;
  }
  return mero::evaluate(f.numerator(), x) / den;
}

// Dep oracle independent of the decomposition: the span of exact gradients
// of f at random points. D_v f vanishes identically iff v is orthogonal to all
// of them, so with enough generic points the span is Dep(f).
inline Subspace dependence_by_gradients(const RationalGerm& f, int vars, Random& rng) {
  std::vector<LinearForm> rows;
  for (int sample = 0; sample < 3 * vars + 4; ++sample) {
    auto x = rng.point(vars);
    bool pole = false;
    for (const auto& [form, e] : f.denominator()) {
      Rational v = mero::evaluate(form, x);
      if (v == 0) pole = true;
    }
    if (pole) continue;
    // f = N * prod L^-e; grad f = f * (grad N / N - sum e grad L / L), written
    // without dividing by N.
    Rational n = mero::evaluate(f.numerator(), x);
    Rational inv_den = 1;
    for (const auto& [form, e] : f.denominator()) {
      Rational v = mero::evaluate(form, x);
      for (int k = 0; k < e; ++k) inv_den /= v;
    }
    std::vector<LinearForm::Term> grad;
    for (int j = 1; j <= vars; ++j) {
      Rational g = mero::evaluate(f.numerator().derivative(j), x);
      for (const auto& [form, e] : f.denominator()) {
        g -= n * e * form.coefficient(j) / mero::evaluate(form, x);
      }
      grad.emplace_back(j, g * inv_den);
    }
    rows.emplace_back(grad);
  }
  return Subspace::span(rows);
}

}  // namespace mero::testing

namespace doctest {

template <>
struct StringMaker<mero::Rational> {
  static String convert(const mero::Rational& x) { return mero::to_string(x).c_str(); }
};
template <>
struct StringMaker<mero::LinearForm> {
  static String convert(const mero::LinearForm& x) { return mero::to_string(x).c_str(); }
};
template <>
struct StringMaker<mero::Polynomial> {
  static String convert(const mero::Polynomial& x) { return mero::to_string(x).c_str(); }
};
template <>
struct StringMaker<mero::RationalGerm> {
  static String convert(const mero::RationalGerm& x) { return mero::to_string(x).c_str(); }
};
template <>
struct StringMaker<mero::Subspace> {
  static String convert(const mero::Subspace& x) { return mero::to_string(x).c_str(); }
};
template <>
struct StringMaker<mero::Decomposition> {
  static String convert(const mero::Decomposition& d) {
    std::string out;
    for (const auto& t : d.terms) {
      out += "(" + mero::to_string(t.numerator) + ")*" + mero::to_string(t.denominator) + " + ";
    }
    return (out + mero::to_string(d.holomorphic)).c_str();
  }
};

}  // namespace doctest
