#include "mero/linear_form.hpp"

#include <algorithm>
#include <map>

#include "mero/errors.hpp"

namespace mero {

LinearForm::LinearForm(std::vector<Term> terms) {
  std::map<int, Rational> merged;
  for (auto& [index, coefficient] : terms) {
    if (index < 1) throw InvalidArgument("variable indices start at 1");
    merged[index] += coefficient;
  }
  for (auto& [index, coefficient] : merged) {
    if (coefficient != 0) terms_.emplace_back(index, coefficient);
  }
}

LinearForm LinearForm::variable(int index, const Rational& coefficient) {
  return LinearForm({{index, coefficient}});
}

LinearForm LinearForm::sum_of(std::span<const int> indices) {
  std::vector<Term> terms;
  for (int i : indices) terms.emplace_back(i, 1);
  return LinearForm(std::move(terms));
}

Rational LinearForm::coefficient(int index) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), index,
                             [](const Term& t, int i) { return t.first < i; });
  if (it != terms_.end() && it->first == index) return it->second;
  return 0;
}

int LinearForm::min_variable() const { return terms_.empty() ? 0 : terms_.front().first; }
int LinearForm::max_variable() const { return terms_.empty() ? 0 : terms_.back().first; }

std::vector<int> LinearForm::support() const {
  std::vector<int> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) out.push_back(t.first);
  return out;
}

std::pair<LinearForm, Rational> LinearForm::primitive() const {
  if (terms_.empty()) return {*this, Rational(1)};
  Integer den_lcm = 1;
  Integer num_gcd = 0;
  for (const auto& [_, c] : terms_) {
    mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den_mpz_t());
    mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), c.get_num_mpz_t());
  }
  Rational scale(den_lcm, num_gcd);
  scale.canonicalize();
  if (terms_.front().second < 0) scale = -scale;
  return {(*this) * scale, scale};
}

void LinearForm::add_scaled(const LinearForm& other, const Rational& factor) {
  std::vector<Term> out;
  out.reserve(terms_.size() + other.terms_.size());
  auto a = terms_.begin();
  auto b = other.terms_.begin();
  while (a != terms_.end() || b != other.terms_.end()) {
    if (b == other.terms_.end() || (a != terms_.end() && a->first < b->first)) {
      out.push_back(*a++);
    } else if (a == terms_.end() || b->first < a->first) {
      out.emplace_back(b->first, factor * b->second);
      ++b;
    } else {
      Rational c = a->second + factor * b->second;
      if (c != 0) out.emplace_back(a->first, c);
      ++a;
      ++b;
    }
  }
  terms_ = std::move(out);
}

LinearForm& LinearForm::operator+=(const LinearForm& other) {
  add_scaled(other, 1);
  return *this;
}

LinearForm& LinearForm::operator-=(const LinearForm& other) {
  add_scaled(other, -1);
  return *this;
}

LinearForm& LinearForm::operator*=(const Rational& factor) {
  if (factor == 0) {
    terms_.clear();
  } else {
    for (auto& t : terms_) t.second *= factor;
  }
  return *this;
}

std::strong_ordering operator<=>(const LinearForm& a, const LinearForm& b) {
  auto x = a.terms_.begin();
  auto y = b.terms_.begin();
  while (x != a.terms_.end() || y != b.terms_.end()) {
    int ix = x != a.terms_.end() ? x->first : 0;
    int iy = y != b.terms_.end() ? y->first : 0;
    if (x != a.terms_.end() && y != b.terms_.end() && ix == iy) {
      if (x->second != y->second) {
        return x->second < y->second ? std::strong_ordering::less : std::strong_ordering::greater;
      }
      ++x;
      ++y;
    } else if (y == b.terms_.end() || (x != a.terms_.end() && ix < iy)) {
      // b has coefficient 0 at ix.
      return x->second < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
    } else {
      return y->second > 0 ? std::strong_ordering::less : std::strong_ordering::greater;
    }
  }
  return std::strong_ordering::equal;
}

Rational dot(const LinearForm& a, const LinearForm& b) {
  Rational sum = 0;
  auto x = a.terms().begin();
  auto y = b.terms().begin();
  while (x != a.terms().end() && y != b.terms().end()) {
    if (x->first < y->first) {
      ++x;
    } else if (y->first < x->first) {
      ++y;
    } else {
      sum += x->second * y->second;
      ++x;
      ++y;
    }
  }
  return sum;
}

std::string to_string(const LinearForm& form) {
  if (form.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [index, c] : form.terms()) {
    Rational magnitude = abs(c);
    if (first) {
      if (c < 0) out += "-";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    if (magnitude != 1) out += to_string(magnitude) + "*";
    out += "z" + std::to_string(index);
    first = false;
  }
  return out;
}

}  // namespace mero
