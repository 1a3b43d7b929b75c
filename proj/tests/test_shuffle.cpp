#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <functional>
#include <random>

#include "mero/errors.hpp"
#include "mero/shuffle.hpp"

using namespace mero;

namespace {

const Alphabet kInts = Alphabet::integers();

Word W(std::string_view s) { return parse_word(kInts, s); }

WordPolynomial poly(std::initializer_list<std::pair<const char*, int>> terms) {
  WordPolynomial p;
  for (auto [w, c] : terms) add_to(p, W(w), c);
  return p;
}

// Every word over `letters` with length in [1, n].
std::vector<Word> all_words(const std::vector<Letter>& letters, int n) {
  std::vector<Word> out;
  std::function<void(Word&)> grow = [&](Word& w) {
    if (!w.empty()) out.push_back(w);
    if (static_cast<int>(w.size()) == n) return;
    for (Letter a : letters) {
      w.push_back(a);
      grow(w);
      w.pop_back();
    }
  };
  Word w;
  grow(w);
  return out;
}

// Lyndon by definition: strictly smaller than every proper rotation.
bool lyndon_by_rotation(const Alphabet& a, const Word& w) {
  for (std::size_t r = 1; r < w.size(); ++r) {
    Word rot(w.begin() + static_cast<std::ptrdiff_t>(r), w.end());
    rot.insert(rot.end(), w.begin(), w.begin() + static_cast<std::ptrdiff_t>(r));
    if (compare_words(a, w, rot) >= 0) return false;
  }
  return true;
}

// All factorizations into nonincreasing Lyndon words.
void factorizations(const Alphabet& a, const Word& w, std::size_t from, std::vector<Word>& current,
                    std::vector<std::vector<Word>>& out) {
  if (from == w.size()) {
    out.push_back(current);
    return;
  }
  for (std::size_t end = from + 1; end <= w.size(); ++end) {
    Word piece(w.begin() + static_cast<std::ptrdiff_t>(from), w.begin() + static_cast<std::ptrdiff_t>(end));
    if (!lyndon_by_rotation(a, piece)) continue;
    if (!current.empty() && compare_words(a, current.back(), piece) < 0) continue;
    current.push_back(piece);
    factorizations(a, w, end, current, out);
    current.pop_back();
  }
}

// Rank of a family of word polynomials by exact elimination.
std::size_t rank(std::vector<WordPolynomial> rows) {
  std::size_t r = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].empty()) continue;
    auto [pivot, c] = *rows[i].begin();
    ++r;
    for (std::size_t j = i + 1; j < rows.size(); ++j) {
      auto it = rows[j].find(pivot);
      if (it == rows[j].end()) continue;
      Rational f = it->second / c;
      for (const auto& [w, d] : rows[i]) add_to(rows[j], w, -f * d);
    }
  }
  return r;
}

}  // namespace

TEST_CASE("alphabets") {
  Alphabet sets = Alphabet::sets();
  CHECK(sets.less(kX0, set_letter({1})));
  // {2} > {1, ...} because its largest element is larger.
  CHECK(sets.less(set_letter({1}), set_letter({2})));
  CHECK(sets.less(set_letter({1, 3}), set_letter({1, 2, 3})));
  CHECK(sets.less(set_letter({3}), set_letter({1, 3})));
  CHECK(sets.less(set_letter({1, 3}), set_letter({2, 3})));
  CHECK(sets.local(set_letter({1, 3}), set_letter({2})));
  CHECK_FALSE(sets.local(set_letter({1, 3}), set_letter({3})));
  CHECK(sets.name(set_letter({1, 3})) == "x{1,3}");
  CHECK(parse_word(sets, "x{1,3}x0x{2}") == Word{set_letter({1, 3}), kX0, set_letter({2})});
  CHECK_THROWS_AS(parse_word(sets, "x2"), ParseError);
  CHECK_THROWS_AS(parse_word(kInts, "x1y"), ParseError);

  Alphabet t = Alphabet::table({7, 3, 5}, {{7, 5}});
  CHECK(t.less(7, 3));
  CHECK(t.local(5, 7));
  CHECK_FALSE(t.local(3, 7));
  CHECK_THROWS_AS(Alphabet::table({1, 1}, {}), InvalidArgument);
  CHECK_THROWS_AS(Alphabet::table({1, 2}, {{1, 1}}), InvalidArgument);
  CHECK_THROWS_AS(parse_word(t, "x4"), ParseError);
}

TEST_CASE("shuffle examples") {
  CHECK(shuffle(W("x1"), W("x2")) == poly({{"x1x2", 1}, {"x2x1", 1}}));
  CHECK(shuffle(Word{}, W("x0x3")) == poly({{"x0x3", 1}}));
  CHECK(shuffle(W("x0x1"), W("x0x2")) ==
        poly({{"x0x1x0x2", 1}, {"x0x0x1x2", 2}, {"x0x0x2x1", 2}, {"x0x2x0x1", 1}}));
  CHECK(to_string(kInts, shuffle(W("x0"), W("x0"))) == "2*x0x0");
}

TEST_CASE("shuffle is commutative and associative with binomial mass") {
  std::mt19937 rng(4);
  auto random_word = [&] {
    Word w(std::uniform_int_distribution<int>(0, 5)(rng));
    for (auto& a : w) a = std::uniform_int_distribution<Letter>(0, 3)(rng);
    return w;
  };
  auto binomial = [](std::size_t n, std::size_t k) {
    Integer b = 1;
    for (std::size_t i = 1; i <= k; ++i) b = b * (n - k + i) / i;
    return Rational(b);
  };
  for (int trial = 0; trial < 60; ++trial) {
    Word a = random_word(), b = random_word(), c = random_word();
    auto ab = shuffle(a, b);
    REQUIRE(ab == shuffle(b, a));
    Rational mass = 0;
    for (const auto& [w, k] : ab) {
      REQUIRE(w.size() == a.size() + b.size());
      mass += k;
    }
    REQUIRE(mass == binomial(a.size() + b.size(), a.size()));
    if (trial % 3 == 0) {
      WordPolynomial pa{{a, 1}}, pb{{b, 1}}, pc{{c, 1}};
      REQUIRE(shuffle(shuffle(pa, pb), pc) == shuffle(pa, shuffle(pb, pc)));
    }
  }
}

TEST_CASE("lyndon words and factorization") {
  CHECK(is_lyndon(kInts, W("x0x1")));
  CHECK_FALSE(is_lyndon(kInts, W("x1x0")));
  CHECK(is_lyndon(kInts, W("x0x1x1")));
  CHECK_THROWS_AS(is_lyndon(kInts, Word{}), EmptyWord);

  using F = std::vector<std::pair<Word, int>>;
  CHECK(cfl(kInts, W("x1x0x1")) == F{{W("x1"), 1}, {W("x0x1"), 1}});
  CHECK(cfl(kInts, W("x0x0")) == F{{W("x0"), 2}});
  CHECK(cfl(kInts, W("x0x1")) == F{{W("x0x1"), 1}});
  CHECK_THROWS_AS(cfl(kInts, Word{}), EmptyWord);
}

TEST_CASE("Duval matches the unique brute-force factorization") {
  for (const auto& w : all_words({0, 1, 2}, 6)) {
    std::vector<std::vector<Word>> all;
    std::vector<Word> current;
    factorizations(kInts, w, 0, current, all);
    REQUIRE(all.size() == 1);
    std::vector<Word> flat;
    for (const auto& [f, k] : cfl(kInts, w)) {
      for (int i = 0; i < k; ++i) flat.push_back(f);
    }
    REQUIRE(flat == all[0]);
    REQUIRE(is_lyndon(kInts, w) == lyndon_by_rotation(kInts, w));
  }
}

TEST_CASE("lyndon_rewrite examples") {
  CHECK(lyndon_rewrite(kInts, W("x0x1")) == LyndonPolynomial{{{W("x0x1")}, 1}});
  LyndonPolynomial expected{{{W("x0"), W("x1")}, 1}, {{W("x0x1")}, -1}};
  CHECK(lyndon_rewrite(kInts, W("x1x0")) == expected);
  CHECK(lyndon_rewrite(kInts, W("x0x0")) == LyndonPolynomial{{{W("x0"), W("x0")}, Rational(1, 2)}});
  CHECK(to_string(kInts, lyndon_rewrite(kInts, W("x1x0"))) == "[x0]·[x1] - [x0x1]");
  CHECK_THROWS_AS(lyndon_rewrite(kInts, Word{}), EmptyWord);
}

TEST_CASE("lyndon_rewrite round trip") {
  LyndonRewriter rewriter(kInts);
  for (const auto& w : all_words({1, 2}, 5)) {
    const auto& p = rewriter.rewrite(w);
    for (const auto& [monomial, c] : p) {
      for (const auto& factor : monomial) REQUIRE(is_lyndon(kInts, factor));
    }
    REQUIRE(expand(p) == WordPolynomial{{w, 1}});
  }
  for (const auto& w : all_words({0, 1, 2}, 4)) REQUIRE(expand(rewriter.rewrite(w)) == WordPolynomial{{w, 1}});
}

TEST_CASE("locality of words") {
  CHECK(is_local_word(kInts, W("x0x1x0x2")));
  CHECK_FALSE(is_local_word(kInts, W("x1x1")));
  CHECK(is_local_pair(kInts, W("x1"), W("x2")));
  CHECK_FALSE(is_local_pair(kInts, W("x0x1"), W("x2x1")));
}

TEST_CASE("locality_cfl") {
  auto f = locality_cfl(kInts, W("x1x2"));
  CHECK(f.factors == std::vector<Word>{W("x1x2")});
  CHECK(f.x0_power == 0);
  f = locality_cfl(kInts, W("x0x0"));
  CHECK(f.factors.empty());
  CHECK(f.x0_power == 2);
  f = locality_cfl(kInts, W("x2x0x1"));
  CHECK(f.factors == std::vector<Word>{W("x2"), W("x0x1")});
  CHECK(f.x0_power == 0);
  CHECK_THROWS_AS(locality_cfl(kInts, W("x1x1")), NotLocal);

  // Brute force over local words of length <= 4.
  for (const auto& w : all_words({0, 1, 2, 3}, 4)) {
    if (!is_local_word(kInts, w)) continue;
    auto g = locality_cfl(kInts, w);
    Word joined;
    for (std::size_t i = 0; i < g.factors.size(); ++i) {
      const Word& u = g.factors[i];
      REQUIRE(is_lyndon(kInts, u));
      REQUIRE(compare_words(kInts, u, Word{kX0}) > 0);
      if (i > 0) REQUIRE(compare_words(kInts, g.factors[i - 1], u) > 0);
      for (std::size_t j = 0; j < i; ++j) REQUIRE(is_local_pair(kInts, g.factors[j], u));
      joined.insert(joined.end(), u.begin(), u.end());
    }
    joined.insert(joined.end(), static_cast<std::size_t>(g.x0_power), kX0);
    REQUIRE(joined == w);
  }
}

TEST_CASE("locality Lyndon generators") {
  CHECK(locality_lyndon_generators(kInts, {1}, 2) == std::vector<Word>{W("x1"), W("x0x1")});
  CHECK(locality_lyndon_generators(kInts, {1, 2}, 1) == std::vector<Word>{W("x1"), W("x2")});
  CHECK(locality_lyndon_generators(kInts, {1, 2}, 2) ==
        std::vector<Word>{W("x1"), W("x2"), W("x0x1"), W("x0x2"), W("x1x2")});
  CHECK_THROWS_AS(locality_lyndon_generators(kInts, {1}, 0), InvalidArgument);
}

TEST_CASE("locality closure of shuffles") {
  auto local = [](const Word& w) { return is_local_word(kInts, w); };
  auto words = all_words({0, 1, 2, 3, 4}, 3);
  std::mt19937 rng(12);
  for (int trial = 0; trial < 400; ++trial) {
    const Word& a = words[rng() % words.size()];
    const Word& b = words[rng() % words.size()];
    if (!local(a) || !local(b) || !is_local_pair(kInts, a, b)) continue;
    for (const auto& [w, c] : shuffle(a, b)) REQUIRE(local(w));
  }
}

TEST_CASE("locality monomials in Lyndon generators are independent") {
  // All monomials of total length <= 4 in pairwise local generators.
  auto gens = locality_lyndon_generators(kInts, {1, 2, 3}, 3);
  gens.insert(gens.begin(), Word{kX0});
  std::vector<std::vector<Word>> monomials;
  std::function<void(std::size_t, std::vector<Word>&, std::size_t)> build =
      [&](std::size_t from, std::vector<Word>& current, std::size_t length) {
        if (!current.empty()) monomials.push_back(current);
        for (std::size_t i = from; i < gens.size(); ++i) {
          if (length + gens[i].size() > 4) continue;
          bool ok = true;
          for (const auto& u : current) ok = ok && is_local_pair(kInts, u, gens[i]);
          if (!ok) continue;
          current.push_back(gens[i]);
          build(i, current, length + gens[i].size());
          current.pop_back();
        }
      };
  std::vector<Word> current;
  build(0, current, 0);
  std::vector<WordPolynomial> rows;
  for (const auto& m : monomials) rows.push_back(expand(LyndonPolynomial{{m, 1}}));
  CHECK(monomials.size() > 30);
  CHECK(rank(rows) == rows.size());
}
