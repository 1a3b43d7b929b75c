#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mero/rational.hpp"

namespace mero {

// Letter identities. 0 is the distinguished letter x0, which precedes every
// other letter and is local to everything.
using Letter = std::uint64_t;
inline constexpr Letter kX0 = 0;

// An ordered locality alphabet {x0} + {x_u : u in U}.
//
//   Integers: U = positive integers, natural order, u local to v iff u != v.
//   Sets:     U = nonempty subsets of {1..64} encoded as bitmasks (element i
//             is bit i-1), local iff disjoint, ordered by comparing the
//             elements in decreasing order and then by size.
//   Table:    an explicit finite list of letters in increasing order with an
//             explicit symmetric locality relation.
class Alphabet {
 public:
  enum class Kind { Integers, Sets, Table };

  static Alphabet integers();
  static Alphabet sets();
  // Throws InvalidArgument on duplicate letters, on x0 in the list, or on a
  // reflexive pair.
  static Alphabet table(std::vector<Letter> order, const std::vector<std::pair<Letter, Letter>>& local_pairs);

  Kind kind() const { return kind_; }
  bool contains(Letter a) const;
  std::strong_ordering compare(Letter a, Letter b) const;
  bool less(Letter a, Letter b) const { return compare(a, b) < 0; }
  bool local(Letter a, Letter b) const;

  // "x0", "x3", "x{1,3}".
  std::string name(Letter a) const;

 private:
  explicit Alphabet(Kind kind) : kind_(kind) {}

  Kind kind_;
  std::unordered_map<Letter, std::size_t> rank_;
  std::set<std::pair<Letter, Letter>> local_pairs_;
};

// Bitmask of a finite set for the Sets alphabet.
Letter set_letter(std::initializer_list<int> elements);
Letter set_letter(const std::vector<int>& elements);
std::vector<int> set_elements(Letter mask);

using Word = std::vector<Letter>;

// Formal rational combination of words. Keys use the plain ordering of
// letter ids, which is only a storage order.
using WordPolynomial = std::map<Word, Rational>;

std::strong_ordering compare_words(const Alphabet& alphabet, const Word& a, const Word& b);

// Word literals: "x0x1x0x2", "x{1,3}x0x{2}". The empty string is the empty
// word. Throws ParseError.
Word parse_word(const Alphabet& alphabet, std::string_view text);
std::string to_string(const Alphabet& alphabet, const Word& w);
std::string to_string(const Alphabet& alphabet, const WordPolynomial& p);

void add_to(WordPolynomial& p, const Word& w, const Rational& c);

WordPolynomial shuffle(const Word& a, const Word& b);
WordPolynomial shuffle(const WordPolynomial& a, const WordPolynomial& b);

// Throws EmptyWord.
bool is_lyndon(const Alphabet& alphabet, const Word& w);

// Chen-Fox-Lyndon factorization w = w_1^{i_1} ... w_k^{i_k} with strictly
// decreasing Lyndon factors, by Duval's algorithm. Throws EmptyWord.
std::vector<std::pair<Word, int>> cfl(const Alphabet& alphabet, const Word& w);

// Commutative polynomial in Lyndon words: each key is a sorted multiset of
// Lyndon words, standing for their shuffle product.
using LyndonMonomial = std::vector<Word>;
using LyndonPolynomial = std::map<LyndonMonomial, Rational>;

// Rewrites words as polynomials in Lyndon words. With w = w_1^{i_1}...w_k^{i_k}
// its factorization, the shuffle of the factors divided by i_1!...i_k! is w
// plus lexicographically smaller anagrams of w, which are rewritten in turn.
// Results are cached per rewriter.
class LyndonRewriter {
 public:
  explicit LyndonRewriter(Alphabet alphabet) : alphabet_(std::move(alphabet)) {}

  const LyndonPolynomial& rewrite(const Word& w);
  const Alphabet& alphabet() const { return alphabet_; }

 private:
  Alphabet alphabet_;
  std::map<Word, LyndonPolynomial> cache_;
};

LyndonPolynomial lyndon_rewrite(const Alphabet& alphabet, const Word& w);

// Substitutes each Lyndon indeterminate by its word and multiplies by shuffle.
WordPolynomial expand(const LyndonPolynomial& p);

std::string to_string(const Alphabet& alphabet, const LyndonPolynomial& p);

// Pairwise locality of all letters at distinct positions.
bool is_local_word(const Alphabet& alphabet, const Word& w);
// Every letter of a is local to every letter of b.
bool is_local_pair(const Alphabet& alphabet, const Word& a, const Word& b);

// w = w_1 ... w_k x0^r for a local word: the w_i are distinct, pairwise local
// Lyndon words, strictly decreasing and larger than x0.
struct LocalityFactorization {
  std::vector<Word> factors;
  int x0_power = 0;
};
// Throws NotLocal unless w is local, EmptyWord if it is empty.
LocalityFactorization locality_cfl(const Alphabet& alphabet, const Word& w);

// All local Lyndon words over x0 and the given letters of length at most
// max_length that do not end in x0, sorted by length and then
// lexicographically.
std::vector<Word> locality_lyndon_generators(const Alphabet& alphabet, const std::vector<Letter>& letters,
                                             int max_length);

}  // namespace mero
