#pragma once

#include <compare>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mero/germ.hpp"
#include "mero/shuffle.hpp"

namespace mero {

// An assignment u -> L_u of linear forms to the letters of an alphabet.
//
//   WeakChen: u -> z_u over the integers, with no locality claim.
//   Chen:     u -> z_u, u local to v iff u != v.
//   Speer:    I -> z_I = sum_{i in I} z_i over finite sets, local iff disjoint.
//   Custom:   explicit forms; locality must imply Q-orthogonality.
class LMap {
 public:
  enum class Kind { WeakChen, Chen, Speer, Custom };

  static std::shared_ptr<const LMap> weak_chen();
  static std::shared_ptr<const LMap> chen();
  static std::shared_ptr<const LMap> speer();
  // Throws NotLocal if some local pair of letters has non-orthogonal forms,
  // InvalidArgument if a letter of the table alphabet has no form.
  static std::shared_ptr<const LMap> custom(Alphabet alphabet, std::map<Letter, LinearForm> forms,
                                            InnerProduct q = {});

  Kind kind() const { return kind_; }
  const Alphabet& alphabet() const { return alphabet_; }
  const InnerProduct& inner_product() const { return q_; }
  // Whether letter locality is meaningful (false only for weak Chen).
  bool has_locality() const { return kind_ != Kind::WeakChen; }
  LinearForm form(Letter u) const;

 private:
  LMap(Kind kind, Alphabet alphabet) : kind_(kind), alphabet_(std::move(alphabet)) {}

  Kind kind_;
  Alphabet alphabet_;
  InnerProduct q_;
  std::map<Letter, LinearForm> forms_;
};

// The ordered fraction 1 / (L_{u1}^{s1} (L_{u1} + L_{u2})^{s2} ... ).
struct FractionSpec {
  std::vector<int> exponents;
  std::vector<Letter> letters;
  std::shared_ptr<const LMap> lmap;

  std::size_t depth() const { return letters.size(); }
  int weight() const;

  // Specs are compared by exponents and letters; the map is shared context.
  friend bool operator==(const FractionSpec& a, const FractionSpec& b) {
    return a.exponents == b.exponents && a.letters == b.letters;
  }
  friend std::strong_ordering operator<=>(const FractionSpec& a, const FractionSpec& b);
};

using FractionCombo = std::map<FractionSpec, Rational>;
// Commutative polynomial in fraction specs; keys are sorted multisets.
using FractionPolynomial = std::map<std::vector<FractionSpec>, Rational>;

// Throws InvalidArgument for mismatched lengths or nonpositive exponents,
// ZeroCumulativeForm if a cumulative form vanishes.
RationalGerm fraction_germ(const FractionSpec& spec);

bool is_local_spec(const FractionSpec& spec);

// Words and fractions. The word x0^{t1-1} x_{v1} ... x0^{tk-1} x_{vk} maps to
//
//   1 / ((L_{v1} + ... + L_{vk})^{t1} (L_{v2} + ... + L_{vk})^{t2} ... L_{vk}^{tk}),
//
// i.e. the first block is the outermost factor, so the fraction is
// f[tk, ..., t1; vk, ..., v1]. Read this way the map turns shuffles into
// products.
FractionSpec spec_of_word(const Word& w, std::shared_ptr<const LMap> lmap);  // WordEndsInX0
Word word_of_fraction(const FractionSpec& spec);                               // NotLocalSpec

RationalGerm phi(const Word& w, const std::shared_ptr<const LMap>& lmap);

// Image of w_a sh w_b. Throws NotLocal for a non-local pair under a map with
// locality.
FractionCombo expand_product(const FractionSpec& a, const FractionSpec& b);
FractionCombo expand_product(const std::vector<FractionSpec>& factors);

// Rewrites a combination of specs as a polynomial in Lyndon specs.
FractionPolynomial lyndon_decompose(const FractionCombo& combo);
FractionCombo expand(const FractionPolynomial& p);

RationalGerm combo_germ(const FractionCombo& combo);

// "f[2,1; 1,2]" and "f[1,2; {1},{2,3}]".
std::string to_string(const FractionSpec& spec);
std::string to_string(const FractionCombo& combo);
std::string to_string(const FractionPolynomial& p);
// Throws ParseError.
FractionSpec parse_fraction_spec(std::string_view text, std::shared_ptr<const LMap> lmap);

// Rooted forest of index sets; children carry pairwise disjoint subsets of
// their parent's set, roots are pairwise disjoint.
struct ForestNode {
  int id = 0;
  std::vector<int> set;
  int exponent = 1;
  std::vector<ForestNode> children;
};
using Forest = std::vector<ForestNode>;

// Throws InvalidArgument if the nesting or disjointness rules fail.
void validate(const Forest& forest);
// prod over nodes of z_{I(H)}^{-s_H}.
RationalGerm forest_fraction(const Forest& forest);
// Combination of Speer fractions equal to forest_fraction.
FractionCombo flatten_forest(const Forest& forest);

}  // namespace mero
