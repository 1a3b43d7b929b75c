#include "mero/germ.hpp"

#include <algorithm>

#include "mero/errors.hpp"

namespace mero {

namespace {

Polynomial form_power(const LinearForm& form, int exponent) {
  return Polynomial(form).pow(exponent);
}

std::strong_ordering compare_denominators(const RationalGerm::Denominator& a,
                                          const RationalGerm::Denominator& b) {
  auto x = a.begin();
  auto y = b.begin();
  for (; x != a.end() && y != b.end(); ++x, ++y) {
    if (auto c = x->first <=> y->first; c != 0) return c;
    if (auto c = x->second <=> y->second; c != 0) return c;
  }
  return a.size() <=> b.size();
}

}  // namespace

RationalGerm::RationalGerm(const Polynomial& numerator) : numerator_(numerator) {}

RationalGerm RationalGerm::fraction(Polynomial numerator,
                                    const std::vector<std::pair<LinearForm, int>>& denominator) {
  RationalGerm f;
  f.numerator_ = std::move(numerator);
  for (const auto& [form, exponent] : denominator) {
    if (form.is_zero()) throw InvalidArgument("zero linear form in a denominator");
    if (exponent < 0) throw InvalidArgument("negative exponent in a denominator");
    if (exponent == 0) continue;
    auto [primitive, scale] = form.primitive();
    // 1/form^e = scale^e / primitive^e.
    Rational factor = 1;
    for (int k = 0; k < exponent; ++k) factor *= scale;
    f.numerator_ *= factor;
    f.denominator_[primitive] += exponent;
  }
  f.normalize();
  return f;
}

RationalGerm RationalGerm::pole(const LinearForm& form, int exponent) {
  return fraction(Polynomial(1), {{form, exponent}});
}

void RationalGerm::normalize() {
  if (numerator_.is_zero()) {
    denominator_.clear();
    return;
  }
  for (auto it = denominator_.begin(); it != denominator_.end();) {
    while (it->second > 0) {
      auto quotient = divide_exact(numerator_, it->first);
      if (!quotient) break;
      numerator_ = std::move(*quotient);
      --it->second;
    }
    it = it->second == 0 ? denominator_.erase(it) : std::next(it);
  }
}

int RationalGerm::max_variable() const {
  int m = numerator_.max_variable();
  for (const auto& [form, _] : denominator_) m = std::max(m, form.max_variable());
  return m;
}

Polynomial RationalGerm::numerator_over(const Denominator& common) const {
  Polynomial out = numerator_;
  for (const auto& [form, e] : common) {
    auto it = denominator_.find(form);
    int have = it == denominator_.end() ? 0 : it->second;
    if (have > e) throw InvalidArgument("common denominator does not contain the germ's");
    if (e > have) out *= form_power(form, e - have);
  }
  for (const auto& [form, _] : denominator_) {
    if (!common.contains(form)) throw InvalidArgument("common denominator does not contain the germ's");
  }
  return out;
}

RationalGerm operator+(const RationalGerm& f, const RationalGerm& g) {
  if (f.is_zero()) return g;
  if (g.is_zero()) return f;
  RationalGerm out;
  out.denominator_ = f.denominator_;
  for (const auto& [form, e] : g.denominator_) {
    int& slot = out.denominator_[form];
    slot = std::max(slot, e);
  }
  out.numerator_ = f.numerator_over(out.denominator_) + g.numerator_over(out.denominator_);
  out.normalize();
  return out;
}

RationalGerm operator-(const RationalGerm& f) {
  RationalGerm out = f;
  out.numerator_ *= Rational(-1);
  return out;
}

RationalGerm operator-(const RationalGerm& f, const RationalGerm& g) { return f + (-g); }

RationalGerm operator*(const RationalGerm& f, const RationalGerm& g) {
  RationalGerm out;
  out.numerator_ = f.numerator_ * g.numerator_;
  if (out.numerator_.is_zero()) return out;
  out.denominator_ = f.denominator_;
  for (const auto& [form, e] : g.denominator_) out.denominator_[form] += e;
  out.normalize();
  return out;
}

RationalGerm RationalGerm::pow(int exponent) const {
  if (exponent < 0) throw InvalidArgument("negative germ power");
  RationalGerm out(1);
  for (int k = 0; k < exponent; ++k) out = out * *this;
  return out;
}

std::strong_ordering operator<=>(const RationalGerm& a, const RationalGerm& b) {
  if (auto c = a.numerator_ <=> b.numerator_; c != 0) return c;
  return compare_denominators(a.denominator_, b.denominator_);
}

std::string to_string(const RationalGerm& f) {
  if (f.is_polynomial()) return to_string(f.numerator());
  std::string num = to_string(f.numerator());
  if (f.numerator().terms().size() > 1 || num.front() == '-') num = "(" + num + ")";
  std::string den;
  for (const auto& [form, e] : f.denominator()) {
    if (!den.empty()) den += "*";
    den += "(" + to_string(form) + ")";
    if (e != 1) den += "^" + std::to_string(e);
  }
  return num + "/(" + den + ")";
}

// --- simplex fractions -----------------------------------------------------

SimplexFraction::SimplexFraction(std::vector<Factor> factors, Rational* scale) {
  Rational total = 1;
  std::map<LinearForm, int> merged;
  for (auto& [form, e] : factors) {
    if (e <= 0) throw InvalidArgument("simplex exponents must be positive");
    if (form.is_zero()) throw InvalidArgument("zero form in a simplex fraction");
    auto [primitive, s] = form.primitive();
    for (int k = 0; k < e; ++k) total *= s;
    merged[primitive] += e;
  }
  for (auto& [form, e] : merged) factors_.emplace_back(form, e);
  if (find_circuit(forms())) throw InvalidArgument("simplex forms must be linearly independent");
  if (scale) *scale = total;
}

int SimplexFraction::p_order() const {
  int p = 0;
  for (const auto& f : factors_) p += f.second;
  return p;
}

std::vector<LinearForm> SimplexFraction::forms() const {
  std::vector<LinearForm> out;
  for (const auto& f : factors_) out.push_back(f.first);
  return out;
}

Subspace SimplexFraction::support() const { return Subspace::span(forms()); }

RationalGerm SimplexFraction::germ() const {
  return RationalGerm::fraction(Polynomial(1), factors_);
}

std::strong_ordering operator<=>(const SimplexFraction& a, const SimplexFraction& b) {
  auto x = a.factors_.begin();
  auto y = b.factors_.begin();
  for (; x != a.factors_.end() && y != b.factors_.end(); ++x, ++y) {
    if (auto c = x->first <=> y->first; c != 0) return c;
    if (auto c = x->second <=> y->second; c != 0) return c;
  }
  return a.factors_.size() <=> b.factors_.size();
}

std::string to_string(const SimplexFraction& s) {
  if (s.empty()) return "1";
  std::string den;
  for (const auto& [form, e] : s.factors()) {
    if (!den.empty()) den += "*";
    den += "(" + to_string(form) + ")";
    if (e != 1) den += "^" + std::to_string(e);
  }
  return "1/(" + den + ")";
}

RationalGerm PolarTerm::germ() const {
  return RationalGerm::fraction(numerator, denominator.factors());
}

// --- decomposition ---------------------------------------------------------

namespace {

using Exponents = std::map<LinearForm, int>;
using Combination = std::map<Exponents, Rational>;

std::vector<LinearForm> keys(const Exponents& den) {
  std::vector<LinearForm> out;
  for (const auto& [form, _] : den) out.push_back(form);
  return out;
}

// Rewrites 1 / prod L^e as a combination of simplex denominators.
//
// While the forms are dependent, take the circuit sum_i c_i L_i = 0 whose
// largest form L_n has c_n = -1, so 1 = sum_{i != n} c_i L_i / L_n, and
// multiply through: each branch lowers one e_i (i != n) and raises e_n. With
// the form set fixed the circuit is fixed, so sum_{i in C, i != n} e_i drops by
// one per step until some e_i reaches 0 and a form leaves the set; the pair
// (number of forms, that sum) decreases lexicographically and the recursion
// terminates.
class DependentPoleSplitter {
 public:
  const Combination& split(const Exponents& den) {
    if (auto it = memo_.find(den); it != memo_.end()) return it->second;
    Combination result;
    auto forms = keys(den);
    auto circuit = find_circuit(forms);
    if (!circuit) {
      result[den] = 1;
    } else {
      // The normalized circuit puts -1 on its largest form.
      std::size_t eliminated = circuit->indices.front();
      for (std::size_t idx : circuit->indices) {
        if (forms[eliminated] < forms[idx]) eliminated = idx;
      }
      for (std::size_t k = 0; k < circuit->indices.size(); ++k) {
        const std::size_t i = circuit->indices[k];
        if (i == eliminated) continue;
        Exponents next = den;
        if (--next[forms[i]] == 0) next.erase(forms[i]);
        ++next[forms[eliminated]];
        for (const auto& [term, c] : split(next)) {
          Rational& slot = result[term];
          slot += c * circuit->coefficients[k];
        }
      }
      for (auto it = result.begin(); it != result.end();) {
        it = it->second == 0 ? result.erase(it) : std::next(it);
      }
    }
    return memo_.emplace(den, std::move(result)).first->second;
  }

 private:
  std::map<Exponents, Combination> memo_;
};

struct PartialDecomposition {
  std::map<Exponents, Polynomial> polar;
  Polynomial holomorphic;
};

// Placeholder variables standing for the simplex forms during rewriting.
constexpr int kPlaceholderBase = 1 << 28;

// Splits coefficient * numerator / S (S independent) into polar terms whose
// numerators are Q-orthogonal to their supporting spaces plus a polynomial.
//
// Every variable is written as z_v = sum_i a_{v,i} L_i + b_v with b_v
// orthogonal to span(L). Expanding, a monomial prod L_i^{m_i} against
// prod L_i^{e_i} either cancels completely (holomorphic), leaves a pure
// orthogonal numerator over the surviving forms (polar), or leaves surviving
// L factors in the numerator, which are split again over the smaller simplex.
void polar_split(const Polynomial& numerator, const Exponents& simplex, const Rational& coefficient,
                 const InnerProduct& q, PartialDecomposition& out) {
  if (numerator.is_zero()) return;
  if (simplex.empty()) {
    out.holomorphic += numerator * coefficient;
    return;
  }
  const auto forms = keys(simplex);
  const std::size_t r = forms.size();
  const Subspace u = Subspace::span(forms);

  std::map<int, Polynomial> images;
  for (int v : numerator.variables()) {
    auto [parallel, perpendicular] = orth_decompose(q, LinearForm::variable(v), u);
    auto coords = express_in(forms, parallel);
    Polynomial image(perpendicular);
    for (std::size_t i = 0; i < r; ++i) {
      image += Polynomial::variable(kPlaceholderBase + static_cast<int>(i)) * (*coords)[i];
    }
    images.emplace(v, std::move(image));
  }
  Polynomial rewritten = numerator.substitute([&](int v) -> std::optional<Polynomial> {
    auto it = images.find(v);
    if (it == images.end()) return std::nullopt;
    return it->second;
  });

  // Group by the exponent vector of the placeholders.
  std::map<std::vector<int>, Polynomial> groups;
  for (const auto& [m, c] : rewritten.terms()) {
    std::vector<int> placeholder(r, 0);
    std::vector<Monomial::Power> rest;
    for (const auto& [index, e] : m.powers()) {
      if (index >= kPlaceholderBase) {
        placeholder[index - kPlaceholderBase] = e;
      } else {
        rest.emplace_back(index, e);
      }
    }
    groups[placeholder] += Polynomial(Monomial(std::move(rest)), c);
  }

  for (const auto& [m, part] : groups) {
    if (part.is_zero()) continue;
    Exponents remaining;
    Polynomial excess(1);
    bool has_excess = false;
    for (std::size_t i = 0; i < r; ++i) {
      const int e = simplex.at(forms[i]);
      if (m[i] < e) {
        remaining.emplace(forms[i], e - m[i]);
      } else if (m[i] > e) {
        excess *= form_power(forms[i], m[i] - e);
        has_excess = true;
      }
    }
    if (remaining.empty()) {
      out.holomorphic += part * excess * coefficient;
    } else if (!has_excess) {
      out.polar[remaining] += part * coefficient;
    } else {
      polar_split(part * excess, remaining, coefficient, q, out);
    }
  }
}

struct TermOrder {
  bool operator()(const PolarTerm& a, const PolarTerm& b) const {
    Subspace ua = a.denominator.support();
    Subspace ub = b.denominator.support();
    if (auto c = ua <=> ub; c != 0) return c < 0;
    if (a.denominator.p_order() != b.denominator.p_order()) {
      return a.denominator.p_order() < b.denominator.p_order();
    }
    return a.denominator < b.denominator;
  }
};

Decomposition assemble(PartialDecomposition partial) {
  Decomposition d;
  d.holomorphic = std::move(partial.holomorphic);
  for (auto& [den, numerator] : partial.polar) {
    if (numerator.is_zero()) continue;
    std::vector<SimplexFraction::Factor> factors(den.begin(), den.end());
    d.terms.push_back({std::move(numerator), SimplexFraction(std::move(factors))});
  }
  std::sort(d.terms.begin(), d.terms.end(), TermOrder{});
  return d;
}

// An expansion of f whose simplices depend on the forms in f's denominator.
Decomposition expand(const RationalGerm& f, const InnerProduct& q) {
  PartialDecomposition partial;
  if (f.is_zero()) return {};
  DependentPoleSplitter splitter;
  const Combination& simplices = splitter.split(f.denominator());
  for (const auto& [simplex, c] : simplices) {
    polar_split(f.numerator(), simplex, c, q, partial);
  }
  return assemble(std::move(partial));
}

}  // namespace

// The expansion of a germ is only unique up to rewriting the simplices of one
// supporting space among themselves, and which rewriting comes out depends on
// the forms present in the denominator. The component f_U of each supporting
// space U is unique, though, and so is its normalized representation; expanding
// each component again from that representation gives a canonical result.
// Groups with other supports in the second expansion sum to zero and are
// dropped.
Decomposition decompose(const RationalGerm& f, const InnerProduct& q) {
  Decomposition first = expand(f, q);
  Decomposition out;
  out.holomorphic = std::move(first.holomorphic);
  std::size_t i = 0;
  while (i < first.terms.size()) {
    const Subspace u = first.terms[i].denominator.support();
    RationalGerm component;
    for (; i < first.terms.size() && first.terms[i].denominator.support() == u; ++i) {
      component = component + first.terms[i].germ();
    }
    if (component.is_zero()) continue;
    for (auto& term : expand(component, q).terms) {
      if (term.denominator.support() == u) out.terms.push_back(std::move(term));
    }
  }
  std::sort(out.terms.begin(), out.terms.end(), TermOrder{});
  return out;
}

RationalGerm recompose(const Decomposition& d) {
  RationalGerm sum(d.holomorphic);
  for (const auto& term : d.terms) sum = sum + term.germ();
  return sum;
}

Polynomial project_plus(const RationalGerm& f, const InnerProduct& q) {
  return decompose(f, q).holomorphic;
}

Rational ms_eval(const RationalGerm& f, const InnerProduct& q) {
  return project_plus(f, q).constant_term();
}

namespace {

template <class Key>
Decomposition top_residue(const RationalGerm& f, const InnerProduct& q, Key key) {
  Decomposition d = decompose(f, q);
  Decomposition out;
  if (d.terms.empty()) return out;
  int top = 0;
  for (const auto& t : d.terms) top = std::max(top, key(t));
  for (const auto& t : d.terms) {
    if (key(t) != top) continue;
    Rational at_zero = t.numerator.constant_term();
    if (at_zero != 0) out.terms.push_back({Polynomial(at_zero), t.denominator});
  }
  // The same residue can come out over different simplices (a supporting space
  // is re-expanded over all of its forms), so decompose it on its own.
  return decompose(recompose(out), q);
}

}  // namespace

Decomposition p_residue(const RationalGerm& f, const InnerProduct& q) {
  return top_residue(f, q, [](const PolarTerm& t) { return t.denominator.p_order(); });
}

Decomposition d_residue(const RationalGerm& f, const InnerProduct& q) {
  return top_residue(f, q, [](const PolarTerm& t) {
    return static_cast<int>(t.denominator.support().dim());
  });
}

// --- dependence spaces -----------------------------------------------------

namespace {

// Span over monomials m of sum_j [m](P_j) z_j for the family (P_j).
Subspace row_space(const std::map<int, Polynomial>& partials) {
  std::map<Monomial, std::vector<LinearForm::Term>> rows;
  for (const auto& [j, poly] : partials) {
    for (const auto& [m, c] : poly.terms()) rows[m].emplace_back(j, c);
  }
  std::vector<LinearForm> forms;
  forms.reserve(rows.size());
  for (auto& [_, terms] : rows) forms.emplace_back(std::move(terms));
  return Subspace::span(forms);
}

// Directions v with D_v f = 0 are the common kernel of the polynomials
// P_j = dN/dz_j * R - N * sum_i e_i [z_j]L_i * R / L_i, with R = prod_i L_i;
// Dep(f) is the annihilator of that kernel, i.e. the row space.
Subspace germ_dependence(const RationalGerm& f) {
  if (f.is_zero()) return {};
  if (f.is_polynomial()) return polynomial_dependence(f.numerator());
  std::vector<int> vars = f.numerator().variables();
  for (const auto& [form, _] : f.denominator()) {
    auto s = form.support();
    vars.insert(vars.end(), s.begin(), s.end());
  }
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());

  Polynomial radical(1);
  std::vector<Polynomial> cofactors;  // R / L_i
  std::vector<std::pair<LinearForm, int>> den(f.denominator().begin(), f.denominator().end());
  for (std::size_t i = 0; i < den.size(); ++i) {
    radical *= Polynomial(den[i].first);
    Polynomial cofactor(1);
    for (std::size_t k = 0; k < den.size(); ++k) {
      if (k != i) cofactor *= Polynomial(den[k].first);
    }
    cofactors.push_back(std::move(cofactor));
  }
  const Polynomial& n = f.numerator();
  std::map<int, Polynomial> partials;
  for (int j : vars) {
    Polynomial p = n.derivative(j) * radical;
    Polynomial log_derivative;
    for (std::size_t i = 0; i < den.size(); ++i) {
      Rational a = den[i].first.coefficient(j);
      if (a != 0) log_derivative += cofactors[i] * (a * den[i].second);
    }
    p -= n * log_derivative;
    partials.emplace(j, std::move(p));
  }
  return row_space(partials);
}

}  // namespace

Subspace polynomial_dependence(const Polynomial& p) {
  std::map<int, Polynomial> partials;
  for (int j : p.variables()) partials.emplace(j, p.derivative(j));
  return row_space(partials);
}

Subspace dependence(const RationalGerm& f, const InnerProduct& q) {
  Decomposition d = decompose(f, q);
  Subspace total = polynomial_dependence(d.holomorphic);
  // Terms arrive grouped by supporting space.
  std::size_t i = 0;
  while (i < d.terms.size()) {
    const Subspace u = d.terms[i].denominator.support();
    RationalGerm component;
    for (; i < d.terms.size() && d.terms[i].denominator.support() == u; ++i) {
      component = component + d.terms[i].germ();
    }
    total = total + germ_dependence(component);
  }
  return total;
}

bool is_local_pair(const RationalGerm& f, const RationalGerm& g, const InnerProduct& q) {
  return orthogonal(q, dependence(f, q), dependence(g, q));
}

RationalGerm locality_mul(const RationalGerm& f, const RationalGerm& g, const InnerProduct& q) {
  if (!is_local_pair(f, g, q)) {
    throw NotLocal("germs are not Q-orthogonal: " + to_string(f) + " and " + to_string(g));
  }
  return f * g;
}

}  // namespace mero
