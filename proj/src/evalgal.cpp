#include "mero/evalgal.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <mutex>
#include <shared_mutex>

#include "mero/errors.hpp"

namespace mero {

namespace {

constexpr long double kEps = LDBL_EPSILON;
// Relative error of to_long_double.
constexpr long double kConversionError = 0x1p-59L;

long double radius_of(const Real& x) {
  return x.is_exact() ? std::fabs(x.mid()) * kConversionError : x.radius();
}

}  // namespace

Real Real::approx(long double mid, long double radius) {
  if (!(radius >= 0) || !std::isfinite(mid) || !std::isfinite(radius)) {
    throw InvalidArgument("approximate reals need a finite midpoint and radius");
  }
  Real x;
  x.exact_.reset();
  x.mid_ = mid;
  x.radius_ = radius;
  return x;
}

long double Real::mid() const { return exact_ ? to_long_double(*exact_) : mid_; }

Real& Real::operator+=(const Real& other) {
  if (is_exact() && other.is_exact()) {
    *exact_ += *other.exact_;
    return *this;
  }
  const long double sum = mid() + other.mid();
  const long double r = radius_of(*this) + radius_of(other) + std::fabs(sum) * kEps;
  return *this = approx(sum, r * (1 + 4 * kEps));
}

Real& Real::operator*=(const Real& other) {
  if (is_exact() && other.is_exact()) {
    *exact_ *= *other.exact_;
    return *this;
  }
  if (is_zero() || other.is_zero()) return *this = Real();
  const long double a = mid();
  const long double b = other.mid();
  const long double ra = radius_of(*this);
  const long double rb = radius_of(other);
  const long double product = a * b;
  const long double r = std::fabs(a) * rb + std::fabs(b) * ra + ra * rb + std::fabs(product) * kEps;
  return *this = approx(product, r * (1 + 8 * kEps));
}

Real operator-(const Real& a) {
  if (a.is_exact()) return Real(-a.exact());
  return Real::approx(-a.mid_, a.radius_);
}

std::string to_string(const Real& x, int decimals) {
  if (x.is_exact()) return to_string(x.exact());
  char buffer[128];
  std::snprintf(buffer, sizeof buffer, "%.*Lf", std::clamp(decimals, 0, 40), x.mid());
  return buffer;
}

bool within(const Real& a, const Real& b, long double tol) {
  if (a.is_exact() && b.is_exact()) {
    const Rational diff = abs(a.exact() - b.exact());
    return tol == 0 ? diff == 0 : to_long_double(diff) <= tol;
  }
  if (tol == 0) return false;
  const long double diff = std::fabs(a.mid() - b.mid());
  return (diff + radius_of(a) + radius_of(b)) * (1 + 4 * kEps) <= tol;
}

// ---------------------------------------------------------------------------
// Speer's iterated evaluator

namespace {

// (-1)^k binom(e + k - 1, k), the coefficient of x^k in (1 + x)^{-e}.
Rational negative_binomial(int e, int k) {
  Integer b;
  mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(e + k - 1), static_cast<unsigned long>(k));
  return Rational(k % 2 ? Integer(-b) : b);
}

}  // namespace

RationalGerm ev_reg_single(const RationalGerm& f, int i) {
  if (i < 1) throw InvalidArgument("variable indices start at 1");
  if (f.is_zero()) return f;

  // f = z_i^{-m} * numerator * prod (a z_i + M)^{-e} * rest, with every M
  // nonzero and the rest free of z_i.
  int m = 0;
  Rational scale = 1;
  struct Factor {
    Rational a;
    LinearForm rest;
    int exponent;
  };
  std::vector<Factor> series_factors;
  std::vector<std::pair<LinearForm, int>> others;
  for (const auto& [form, e] : f.denominator()) {
    const Rational a = form.coefficient(i);
    if (a == 0) {
      others.emplace_back(form, e);
      continue;
    }
    LinearForm rest = form - LinearForm::variable(i) * a;
    if (rest.is_zero()) {
      m += e;
      for (int k = 0; k < e; ++k) scale /= a;
    } else {
      series_factors.push_back({a, std::move(rest), e});
    }
  }

  // Truncated power series in z_i up to z_i^m with germ coefficients.
  std::vector<RationalGerm> series(m + 1);
  for (const auto& [k, c] : f.numerator().coefficients_in(i)) {
    if (k <= m) series[k] = RationalGerm(c);
  }
  for (const auto& factor : series_factors) {
    std::vector<RationalGerm> expansion(m + 1);
    Rational a_power = 1;
    for (int k = 0; k <= m; ++k) {
      expansion[k] = RationalGerm::pole(factor.rest, factor.exponent + k) *
                     RationalGerm(negative_binomial(factor.exponent, k) * a_power);
      a_power *= factor.a;
    }
    std::vector<RationalGerm> next(m + 1);
    for (int p = 0; p <= m; ++p) {
      if (series[p].is_zero()) continue;
      for (int k = 0; p + k <= m; ++k) next[p + k] = next[p + k] + series[p] * expansion[k];
    }
    series = std::move(next);
  }
  return series[m] * RationalGerm::fraction(Polynomial(scale), others);
}

namespace {

void iterate_orders(const RationalGerm& f, std::vector<int>& remaining, std::vector<int>& applied,
                    std::map<std::vector<int>, Rational>& leaves) {
  if (remaining.empty()) {
    if (!f.is_polynomial() || !f.numerator().is_constant()) {
      throw InvalidArgument("iterated evaluation did not reach a constant");
    }
    // applied lists the variables in the order they were evaluated, which is
    // the reverse of the permutation.
    leaves.emplace(std::vector<int>(applied.rbegin(), applied.rend()), f.numerator().constant_term());
    return;
  }
  for (std::size_t k = 0; k < remaining.size(); ++k) {
    const int v = remaining[k];
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(k));
    applied.push_back(v);
    iterate_orders(ev_reg_single(f, v), remaining, applied, leaves);
    applied.pop_back();
    remaining.insert(remaining.begin() + static_cast<std::ptrdiff_t>(k), v);
  }
}

}  // namespace

Rational iter_eval(const RationalGerm& f, const std::vector<int>& vars, int perm_cap) {
  if (static_cast<int>(vars.size()) > perm_cap) {
    throw TooManyVariables(std::to_string(vars.size()) + " variables exceed the permutation cap " +
                           std::to_string(perm_cap));
  }
  std::vector<int> sorted = vars;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw InvalidArgument("repeated variable in iterated evaluation");
  }
  const Subspace dep = dependence(f, InnerProduct());
  for (const auto& form : dep.basis()) {
    for (const auto& [index, c] : form.terms()) {
      if (!std::binary_search(sorted.begin(), sorted.end(), index)) {
        throw DependenceEscapesVars("the germ depends on z" + std::to_string(index));
      }
    }
  }
  std::map<std::vector<int>, Rational> leaves;
  std::vector<int> applied;
  iterate_orders(f, sorted, applied, leaves);
  // The map holds the permutations in lexicographic order.
  Rational sum = 0;
  for (const auto& [order, value] : leaves) sum += value;
  Integer count = 1;
  for (std::size_t k = 2; k <= vars.size(); ++k) count *= static_cast<unsigned long>(k);
  return sum / Rational(count);
}

// ---------------------------------------------------------------------------
// Multiple zeta values

namespace {

// Neumaier-compensated running sum.
struct CompensatedSum {
  long double sum = 0;
  long double compensation = 0;

  void add(long double x) {
    const long double t = sum + x;
    if (std::fabs(sum) >= std::fabs(x)) {
      compensation += (sum - t) + x;
    } else {
      compensation += (x - t) + sum;
    }
    sum = t;
  }
  long double value() const { return sum + compensation; }
};

long double power(long double base, int exponent) {
  long double out = 1;
  for (int k = 0; k < exponent; ++k) out *= base;
  return out;
}

// int_0^inf e^{-(s-1)t} p(t) dt for a polynomial p.
long double laplace(const std::vector<long double>& p, int s) {
  long double out = 0;
  long double factorial = 1;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i > 0) factorial *= static_cast<long double>(i);
    out += p[i] * factorial / power(static_cast<long double>(s - 1), static_cast<int>(i) + 1);
  }
  return out;
}

std::vector<long double> antiderivative(const std::vector<long double>& p, long double constant) {
  std::vector<long double> out{constant};
  for (std::size_t i = 0; i < p.size(); ++i) out.push_back(p[i] / static_cast<long double>(i + 1));
  return out;
}

// Whether x^{-s} p(ln(x / A)) is nonincreasing for x >= A.
bool decreasing_weight(const std::vector<long double>& p, int s) {
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    if (s * p[i] < static_cast<long double>(i + 1) * p[i + 1]) return false;
  }
  return true;
}

// With T_j(n) the partial sum of the suffix s_j, ..., s_k over n_j <= n, and
// N the truncation point, every T_j(n) with n >= N lies between
// lower_j(ln((n + 1) / (N + 1))) and upper_j(ln(n / N)). For m > N,
//   m^{-s} T_{j+1}(m - 1) <= int_{m-1}^m x^{-s} upper_{j+1}(ln(x / N)) dx,
// and when x^{-s} lower_{j+1}(ln(x / (N + 1))) is decreasing,
//   m^{-s} T_{j+1}(m - 1) >= int_m^{m+1} x^{-s} lower_{j+1}(ln(x / (N + 1))) dx.
// Summing over m and substituting x = N e^t gives the tails below.
struct Bracket {
  long double low;
  long double high;
};

Bracket tail_bracket(const std::vector<int>& s, const std::vector<long double>& partial, long double rel,
                     std::uint64_t truncation) {
  const auto n = static_cast<long double>(truncation);
  const std::size_t k = s.size();
  std::vector<long double> upper{1};
  std::vector<long double> lower{1};
  for (std::size_t j = k; j-- > 0;) {
    const long double t_high = partial[j] * (1 + rel);
    const long double t_low = partial[j] * (1 - rel);
    long double tail_high;
    long double tail_low;
    if (s[j] >= 2) {
      tail_high = std::pow(n, static_cast<long double>(1 - s[j])) * laplace(upper, s[j]);
      const long double scale = std::pow(n + 1, static_cast<long double>(1 - s[j]));
      tail_low = decreasing_weight(lower, s[j]) ? scale * laplace(lower, s[j])
                                                : scale * lower[0] / static_cast<long double>(s[j] - 1);
      if (j == 0) return {t_low + tail_low, t_high + tail_high};
      upper = {t_high + tail_high};
      lower = {t_low + tail_low};
    } else {
      // s_j = 1 only occurs below the outermost sum.
      upper = antiderivative(upper, t_high);
      lower = decreasing_weight(lower, 1) ? antiderivative(lower, t_low) : std::vector<long double>{t_low};
    }
  }
  return {0, 0};
}

struct MzvCache {
  std::shared_mutex mutex;
  std::map<std::pair<std::vector<int>, int>, Real> values;
};

MzvCache& mzv_cache() {
  static MzvCache cache;
  return cache;
}

}  // namespace

Real mzv_numeric(const std::vector<int>& s, int precision) {
  if (s.empty()) throw InvalidArgument("empty MZV index");
  for (int e : s) {
    if (e < 1) throw InvalidArgument("MZV exponents must be positive");
  }
  if (s[0] == 1) throw DivergentIndex("zeta diverges when s1 = 1");
  if (precision < 0) throw InvalidArgument("precision must be nonnegative");
  // Beyond this the rounding error of long double alone exceeds the target.
  if (precision > 18) throw PrecisionUnattainable("long double sums reach at most 18 digits");

  auto& cache = mzv_cache();
  const auto key = std::make_pair(s, precision);
  {
    std::shared_lock lock(cache.mutex);
    if (auto it = cache.values.find(key); it != cache.values.end()) return it->second;
  }

  constexpr std::uint64_t kMaxTruncation = std::uint64_t{1} << 26;
  const long double target = std::pow(10.0L, -static_cast<long double>(precision));
  const std::size_t k = s.size();
  long double weight_sum = 0;
  for (int e : s) weight_sum += e + 6;

  // sums[j] = T_j(n); T_k is identically 1.
  std::vector<CompensatedSum> sums(k + 1);
  sums[k].add(1);
  std::uint64_t n = 0;
  for (std::uint64_t checkpoint = 256;; checkpoint *= 2) {
    for (; n < checkpoint; ++n) {
      const long double inv = 1.0L / static_cast<long double>(n + 1);
      // Ascending j reads T_{j+1}(n) before it is advanced to n + 1.
      for (std::size_t j = 0; j < k; ++j) sums[j].add(power(inv, s[j]) * sums[j + 1].value());
    }
    std::vector<long double> partial(k);
    for (std::size_t j = 0; j < k; ++j) partial[j] = sums[j].value();
    const long double rel =
        (weight_sum + 4 * static_cast<long double>(k) * static_cast<long double>(n) * kEps) * kEps;
    const auto [low, high] = tail_bracket(s, partial, rel, n);
    const long double mid = (low + high) / 2;
    const long double radius = (high - low) / 2 + std::fabs(mid) * 8 * kEps;
    if (radius <= target) {
      Real value = Real::approx(mid, radius);
      std::unique_lock lock(cache.mutex);
      cache.values.emplace(key, value);
      return value;
    }
    if (checkpoint >= kMaxTruncation) {
      throw PrecisionUnattainable("zeta needs more than " + std::to_string(kMaxTruncation) +
                                  " terms for 10^-" + std::to_string(precision));
    }
  }
}

// ---------------------------------------------------------------------------
// Locality combinations

RationalGerm LocalityMonomial::germ() const {
  RationalGerm out(holo);
  for (const auto& f : factors) out = out * fraction_germ(f);
  return out;
}

std::strong_ordering operator<=>(const LocalityMonomial& a, const LocalityMonomial& b) {
  if (auto c = a.factors.size() <=> b.factors.size(); c != 0) return c;
  for (std::size_t i = 0; i < a.factors.size(); ++i) {
    if (auto c = a.factors[i] <=> b.factors[i]; c != 0) return c;
  }
  return a.holo <=> b.holo;
}

void add_to(LocalityCombo& combo, LocalityMonomial monomial, const Real& weight) {
  if (weight.is_zero() || monomial.holo.is_zero()) return;
  std::sort(monomial.factors.begin(), monomial.factors.end());
  // The leading coefficient of the holomorphic part moves into the weight.
  const Rational lead = monomial.holo.terms().rbegin()->second;
  Real scaled = weight;
  if (lead != 1) {
    monomial.holo *= Rational(1) / lead;
    scaled *= Real(lead);
  }
  auto [it, inserted] = combo.try_emplace(std::move(monomial), scaled);
  if (!inserted) {
    it->second += scaled;
    if (it->second.is_zero()) combo.erase(it);
  }
}

LocalityCombo operator*(const LocalityCombo& a, const LocalityCombo& b) {
  LocalityCombo out;
  for (const auto& [ma, wa] : a) {
    for (const auto& [mb, wb] : b) {
      LocalityMonomial m{ma.holo * mb.holo, ma.factors};
      m.factors.insert(m.factors.end(), mb.factors.begin(), mb.factors.end());
      add_to(out, std::move(m), wa * wb);
    }
  }
  return out;
}

RationalGerm combo_germ(const LocalityCombo& combo) {
  RationalGerm out;
  for (const auto& [m, w] : combo) {
    if (!w.is_exact()) throw InvalidArgument("combination has inexact weights");
    out = out + m.germ() * RationalGerm(w.exact());
  }
  return out;
}

namespace {

Subspace fraction_support(const FractionSpec& f) {
  std::vector<LinearForm> forms;
  for (Letter u : f.letters) forms.push_back(f.lmap->form(u));
  return Subspace::span(forms);
}

}  // namespace

void check_local(const LocalityCombo& combo) {
  for (const auto& [m, w] : combo) {
    std::shared_ptr<const LMap> lmap;
    std::vector<Subspace> supports;
    for (const auto& f : m.factors) {
      if (!f.lmap) throw InvalidArgument("fraction spec without an L-map");
      if (lmap && lmap != f.lmap) throw InvalidArgument("monomial mixes L-maps");
      lmap = f.lmap;
      if (!is_local_spec(f)) throw NotLocal(to_string(f) + " is not a locality fraction");
      supports.push_back(fraction_support(f));
    }
    const InnerProduct q = lmap ? lmap->inner_product() : InnerProduct();
    for (std::size_t i = 0; i < supports.size(); ++i) {
      for (std::size_t j = i + 1; j < supports.size(); ++j) {
        if (!orthogonal(q, supports[i], supports[j])) {
          throw NotLocal(to_string(m.factors[i]) + " and " + to_string(m.factors[j]) + " are not orthogonal");
        }
      }
    }
    const Subspace holo_dep = polynomial_dependence(m.holo);
    for (std::size_t i = 0; i < supports.size(); ++i) {
      if (!orthogonal(q, holo_dep, supports[i])) {
        throw NotLocal("holomorphic coefficient is not orthogonal to " + to_string(m.factors[i]));
      }
    }
  }
}

namespace {

LocalityCombo lyndon_form(const FractionSpec& f) {
  LocalityCombo out;
  for (const auto& [monomial, c] : lyndon_decompose(FractionCombo{{f, Rational(1)}})) {
    add_to(out, LocalityMonomial{Polynomial(1), monomial}, Real(c));
  }
  return out;
}

LocalityCombo single(LocalityMonomial m, const Real& w) {
  LocalityCombo out;
  add_to(out, std::move(m), w);
  return out;
}

}  // namespace

LocalityCombo lyndon_normal_form(const LocalityCombo& combo) {
  LocalityCombo out;
  for (const auto& [m, w] : combo) {
    LocalityCombo product = single(LocalityMonomial{m.holo, {}}, w);
    for (const auto& f : m.factors) product = product * lyndon_form(f);
    for (auto& [pm, pw] : product) add_to(out, pm, pw);
  }
  return out;
}

std::string to_string(const LocalityCombo& combo, int decimals) {
  if (combo.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, w] : combo) {
    std::string weight = to_string(w, decimals);
    bool negative = !weight.empty() && weight[0] == '-';
    if (negative) weight.erase(0, 1);
    out += first ? (negative ? "-" : "") : (negative ? " - " : " + ");
    first = false;
    std::vector<std::string> parts;
    if (weight != "1") parts.push_back(weight);
    if (m.holo != Polynomial(1)) parts.push_back(m.holo.terms().size() > 1 ? "(" + to_string(m.holo) + ")" : to_string(m.holo));
    for (const auto& f : m.factors) parts.push_back(to_string(f));
    if (parts.empty()) parts.push_back("1");
    for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? "*" : "") + parts[i];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Evaluators

Real ms_eval(const LocalityCombo& combo, const InnerProduct& q) {
  Real sum;
  for (const auto& [m, w] : combo) {
    const Rational value = m.factors.empty() ? m.holo.constant_term() : ms_eval(m.germ(), q);
    sum += w * Real(value);
  }
  return sum;
}

Real iter_eval(const LocalityCombo& combo, const std::vector<int>& vars, int perm_cap) {
  Real sum;
  for (const auto& [m, w] : combo) sum += w * Real(iter_eval(m.germ(), vars, perm_cap));
  return sum;
}

namespace {

Real zeta_of_lyndon(const FractionSpec& f, int precision) {
  // The word's block exponents are the spec's in reverse order.
  std::vector<int> index(f.exponents.rbegin(), f.exponents.rend());
  if (index[0] == 1) return Real();
  return mzv_numeric(index, precision);
}

}  // namespace

Real zeta_eval(const LocalityCombo& combo, int precision) {
  for (const auto& [m, w] : combo) {
    for (const auto& f : m.factors) {
      if (!f.lmap || f.lmap->kind() != LMap::Kind::Chen) throw NotChen(to_string(f) + " is not a Chen fraction");
    }
  }
  check_local(combo);
  Real sum;
  for (const auto& [m, w] : combo) {
    Real term = w * Real(m.holo.constant_term());
    if (term.is_zero()) continue;
    for (const auto& f : m.factors) {
      Real factor;
      for (const auto& [monomial, c] : lyndon_decompose(FractionCombo{{f, Rational(1)}})) {
        Real product(c);
        for (const auto& g : monomial) product *= zeta_of_lyndon(g, precision);
        factor += product;
      }
      term *= factor;
    }
    sum += term;
  }
  return sum;
}

Evaluator ms_evaluator(const InnerProduct& q) {
  return {"ms", [q](const LocalityCombo& c) { return ms_eval(c, q); }};
}

Evaluator iter_evaluator(std::vector<int> vars, int perm_cap) {
  return {"iter", [vars = std::move(vars), perm_cap](const LocalityCombo& c) { return iter_eval(c, vars, perm_cap); }};
}

Evaluator zeta_evaluator(int precision) {
  return {"zeta", [precision](const LocalityCombo& c) { return zeta_eval(c, precision); }};
}

std::vector<FractionSpec> lyndon_generators(const std::shared_ptr<const LMap>& lmap,
                                            const std::vector<Letter>& letters, int max_weight) {
  std::vector<FractionSpec> out;
  for (const auto& w : locality_lyndon_generators(lmap->alphabet(), letters, max_weight)) {
    out.push_back(spec_of_word(w, lmap));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Galois transforms

namespace {

bool is_lyndon_spec(const FractionSpec& f) {
  if (!f.lmap) return false;
  const Word w = word_of_fraction(f);
  return is_lyndon(f.lmap->alphabet(), w) && (!f.lmap->has_locality() || is_local_word(f.lmap->alphabet(), w));
}

bool is_constant(const LocalityCombo& c) {
  return c.empty() || (c.size() == 1 && c.begin()->first.factors.empty() && c.begin()->first.holo == Polynomial(1));
}

}  // namespace

GaloisTransform::GaloisTransform(Corrections corrections) {
  for (auto& [s, correction] : corrections) {
    if (!is_lyndon_spec(s)) throw InvalidArgument(to_string(s) + " is not a Lyndon generator");
    check_local(correction);
    const Subspace support = fraction_support(s);
    for (const auto& [m, w] : correction) {
      int weight = 0;
      std::vector<LinearForm> forms = polynomial_dependence(m.holo).basis();
      for (const auto& f : m.factors) {
        weight += f.weight();
        for (Letter u : f.letters) forms.push_back(f.lmap->form(u));
      }
      const Subspace term_support = Subspace::span(forms);
      if (weight >= s.weight() || !support.contains(term_support) || term_support.dim() >= support.dim()) {
        throw InvalidArgument("correction of " + to_string(s) + " is not of lower order");
      }
    }
    // Zero corrections are kept so that the generator set is recorded.
    corrections_.emplace(s, lyndon_normal_form(correction));
  }
}

GaloisTransform GaloisTransform::shifts(const std::map<FractionSpec, Real>& shifts) {
  Corrections corrections;
  for (const auto& [s, c] : shifts) corrections[s] = single(LocalityMonomial{}, c);
  return GaloisTransform(std::move(corrections));
}

std::vector<FractionSpec> GaloisTransform::generators() const {
  std::vector<FractionSpec> out;
  for (const auto& [s, c] : corrections_) out.push_back(s);
  return out;
}

bool GaloisTransform::is_shift() const {
  return std::all_of(corrections_.begin(), corrections_.end(), [](const auto& kv) { return is_constant(kv.second); });
}

std::optional<Real> GaloisTransform::shift(const FractionSpec& generator) const {
  auto it = corrections_.find(generator);
  if (it == corrections_.end()) return Real();
  if (!is_constant(it->second)) return std::nullopt;
  return it->second.empty() ? Real() : it->second.begin()->second;
}

GaloisTransform galois_from_evaluator(const Evaluator& e, const std::vector<FractionSpec>& generators) {
  std::map<FractionSpec, Real> shifts;
  for (const auto& s : generators) {
    if (!is_lyndon_spec(s)) throw InvalidArgument(to_string(s) + " is not a Lyndon generator");
    try {
      shifts[s] = e(single(LocalityMonomial{Polynomial(1), {s}}, Real(1)));
    } catch (const Error& err) {
      throw EvaluatorDomain(e.name + " is not defined on " + to_string(s) + ": " + err.what());
    }
  }
  return GaloisTransform::shifts(shifts);
}

LocalityCombo apply_transform(const GaloisTransform& t, const LocalityCombo& combo) {
  check_local(combo);
  LocalityCombo out;
  for (const auto& [m, w] : lyndon_normal_form(combo)) {
    LocalityCombo product = single(LocalityMonomial{m.holo, {}}, w);
    for (const auto& s : m.factors) {
      LocalityCombo image = single(LocalityMonomial{Polynomial(1), {s}}, Real(1));
      if (auto it = t.corrections().find(s); it != t.corrections().end()) {
        for (const auto& [cm, cw] : it->second) add_to(image, cm, cw);
      }
      product = product * image;
    }
    for (const auto& [pm, pw] : product) add_to(out, pm, pw);
  }
  return out;
}

namespace {

std::map<FractionSpec, Real> shift_table(const GaloisTransform& t) {
  std::map<FractionSpec, Real> out;
  for (const auto& s : t.generators()) {
    auto c = t.shift(s);
    if (!c) throw IncompatibleGenerators("only shift transforms can be composed or inverted");
    out.emplace(s, *c);
  }
  return out;
}

}  // namespace

GaloisTransform compose_transforms(const GaloisTransform& t1, const GaloisTransform& t2) {
  auto a = shift_table(t1);
  const auto b = shift_table(t2);
  if (a.size() != b.size() || !std::equal(a.begin(), a.end(), b.begin(), [](const auto& x, const auto& y) {
        return x.first == y.first;
      })) {
    throw IncompatibleGenerators("transforms act on different generators");
  }
  for (auto& [s, c] : a) c += b.at(s);
  return GaloisTransform::shifts(a);
}

GaloisTransform invert_transform(const GaloisTransform& t) {
  auto a = shift_table(t);
  for (auto& [s, c] : a) c = -c;
  return GaloisTransform::shifts(a);
}

bool FactorizationReport::all_pass() const {
  return std::all_of(cases.begin(), cases.end(), [](const FactorizationCase& c) { return c.pass; });
}

FactorizationReport check_factorization(const Evaluator& e, const GaloisTransform& t,
                                        const std::vector<LocalityCombo>& tests, long double tol,
                                        const InnerProduct& q) {
  FactorizationReport report;
  for (const auto& x : tests) {
    FactorizationCase c;
    c.combo = x;
    c.expected = e(x);
    c.actual = ms_eval(apply_transform(t, x), q);
    c.pass = within(c.expected, c.actual, tol);
    report.cases.push_back(std::move(c));
  }
  return report;
}

}  // namespace mero
