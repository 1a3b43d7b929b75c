#include "mero/fracmap.hpp"

#include <algorithm>
#include <cctype>

#include "mero/errors.hpp"

namespace mero {

std::shared_ptr<const LMap> LMap::weak_chen() {
  static const auto instance = std::shared_ptr<const LMap>(new LMap(Kind::WeakChen, Alphabet::integers()));
  return instance;
}

std::shared_ptr<const LMap> LMap::chen() {
  static const auto instance = std::shared_ptr<const LMap>(new LMap(Kind::Chen, Alphabet::integers()));
  return instance;
}

std::shared_ptr<const LMap> LMap::speer() {
  static const auto instance = std::shared_ptr<const LMap>(new LMap(Kind::Speer, Alphabet::sets()));
  return instance;
}

std::shared_ptr<const LMap> LMap::custom(Alphabet alphabet, std::map<Letter, LinearForm> forms, InnerProduct q) {
  if (alphabet.kind() != Alphabet::Kind::Table) {
    throw InvalidArgument("custom L-maps need an explicit letter table");
  }
  std::vector<Letter> letters;
  for (const auto& [u, form] : forms) {
    if (!alphabet.contains(u) || u == kX0) throw InvalidArgument("form assigned to a letter outside the alphabet");
    if (form.is_zero()) throw InvalidArgument("letters must map to nonzero forms");
    letters.push_back(u);
  }
  for (std::size_t i = 0; i < letters.size(); ++i) {
    for (std::size_t j = i + 1; j < letters.size(); ++j) {
      if (alphabet.local(letters[i], letters[j]) &&
          inner(q, forms.at(letters[i]), forms.at(letters[j])) != 0) {
        throw NotLocal("local letters " + alphabet.name(letters[i]) + " and " + alphabet.name(letters[j]) +
                       " map to non-orthogonal forms");
      }
    }
  }
  auto map = std::shared_ptr<LMap>(new LMap(Kind::Custom, std::move(alphabet)));
  map->forms_ = std::move(forms);
  map->q_ = std::move(q);
  return map;
}

LinearForm LMap::form(Letter u) const {
  if (u == kX0) throw InvalidArgument("x0 carries no linear form");
  switch (kind_) {
    case Kind::WeakChen:
    case Kind::Chen:
      if (u > static_cast<Letter>(INT32_MAX)) throw InvalidArgument("letter index too large");
      return LinearForm::variable(static_cast<int>(u));
    case Kind::Speer: {
      std::vector<int> elements = set_elements(u);
      return LinearForm::sum_of(elements);
    }
    case Kind::Custom: {
      auto it = forms_.find(u);
      if (it == forms_.end()) throw InvalidArgument("no form assigned to " + alphabet_.name(u));
      return it->second;
    }
  }
  return {};
}

int FractionSpec::weight() const {
  int w = 0;
  for (int s : exponents) w += s;
  return w;
}

std::strong_ordering operator<=>(const FractionSpec& a, const FractionSpec& b) {
  if (auto c = a.letters <=> b.letters; c != 0) return c;
  return a.exponents <=> b.exponents;
}

namespace {

void check_shape(const FractionSpec& spec) {
  if (!spec.lmap) throw InvalidArgument("fraction spec without an L-map");
  if (spec.exponents.size() != spec.letters.size()) {
    throw InvalidArgument("fraction spec needs one exponent per letter");
  }
  for (int s : spec.exponents) {
    if (s < 1) throw InvalidArgument("fraction exponents must be positive");
  }
  for (Letter u : spec.letters) {
    if (u == kX0 || !spec.lmap->alphabet().contains(u)) throw InvalidArgument("invalid letter in fraction spec");
  }
}

const std::shared_ptr<const LMap>& common_map(const FractionSpec& a, const FractionSpec& b) {
  if (!a.lmap || !b.lmap) throw InvalidArgument("fraction spec without an L-map");
  if (a.lmap != b.lmap) throw InvalidArgument("fraction specs use different L-maps");
  return a.lmap;
}

}  // namespace

RationalGerm fraction_germ(const FractionSpec& spec) {
  check_shape(spec);
  std::vector<std::pair<LinearForm, int>> den;
  LinearForm cumulative;
  for (std::size_t i = 0; i < spec.letters.size(); ++i) {
    cumulative += spec.lmap->form(spec.letters[i]);
    if (cumulative.is_zero()) throw ZeroCumulativeForm("cumulative form " + std::to_string(i + 1) + " vanishes");
    den.emplace_back(cumulative, spec.exponents[i]);
  }
  return RationalGerm::fraction(Polynomial(1), den);
}

bool is_local_spec(const FractionSpec& spec) {
  return !spec.lmap->has_locality() || is_local_word(spec.lmap->alphabet(), spec.letters);
}

FractionSpec spec_of_word(const Word& w, std::shared_ptr<const LMap> lmap) {
  if (!w.empty() && w.back() == kX0) throw WordEndsInX0("word ends in x0: " + to_string(lmap->alphabet(), w));
  FractionSpec spec;
  spec.lmap = std::move(lmap);
  int run = 1;
  for (Letter a : w) {
    if (a == kX0) {
      ++run;
      continue;
    }
    spec.exponents.push_back(run);
    spec.letters.push_back(a);
    run = 1;
  }
  // The first block of the word is the outermost factor of the fraction.
  std::reverse(spec.exponents.begin(), spec.exponents.end());
  std::reverse(spec.letters.begin(), spec.letters.end());
  check_shape(spec);
  return spec;
}

Word word_of_fraction(const FractionSpec& spec) {
  check_shape(spec);
  if (!is_local_spec(spec)) throw NotLocalSpec("fraction letters are not pairwise local: " + to_string(spec));
  Word w;
  for (std::size_t i = spec.letters.size(); i-- > 0;) {
    w.insert(w.end(), static_cast<std::size_t>(spec.exponents[i] - 1), kX0);
    w.push_back(spec.letters[i]);
  }
  return w;
}

RationalGerm phi(const Word& w, const std::shared_ptr<const LMap>& lmap) {
  return fraction_germ(spec_of_word(w, lmap));
}

namespace {

// The word of a spec without locality checks; phi of it is the spec.
Word raw_word(const FractionSpec& spec) {
  check_shape(spec);
  Word w;
  for (std::size_t i = spec.letters.size(); i-- > 0;) {
    w.insert(w.end(), static_cast<std::size_t>(spec.exponents[i] - 1), kX0);
    w.push_back(spec.letters[i]);
  }
  return w;
}

FractionCombo combo_of_words(const WordPolynomial& p, const std::shared_ptr<const LMap>& lmap) {
  FractionCombo out;
  for (const auto& [w, c] : p) out[spec_of_word(w, lmap)] += c;
  std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
  return out;
}

}  // namespace

FractionCombo expand_product(const FractionSpec& a, const FractionSpec& b) {
  const auto& lmap = common_map(a, b);
  Word wa = raw_word(a), wb = raw_word(b);
  if (lmap->has_locality() && !is_local_pair(lmap->alphabet(), wa, wb)) {
    throw NotLocal("fractions are not local: " + to_string(a) + " and " + to_string(b));
  }
  return combo_of_words(shuffle(wa, wb), lmap);
}

FractionCombo expand_product(const std::vector<FractionSpec>& factors) {
  if (factors.empty()) throw InvalidArgument("empty product needs an L-map");
  const auto& lmap = factors.front().lmap;
  WordPolynomial product{{Word{}, Rational(1)}};
  std::vector<Word> seen;
  for (const auto& f : factors) {
    common_map(factors.front(), f);
    Word w = raw_word(f);
    if (lmap->has_locality()) {
      for (const auto& v : seen) {
        if (!is_local_pair(lmap->alphabet(), v, w)) {
          throw NotLocal("fractions in a product are not pairwise local");
        }
      }
    }
    product = shuffle(product, WordPolynomial{{w, Rational(1)}});
    seen.push_back(std::move(w));
  }
  return combo_of_words(product, lmap);
}

FractionPolynomial lyndon_decompose(const FractionCombo& combo) {
  FractionPolynomial out;
  if (combo.empty()) return out;
  const auto lmap = combo.begin()->first.lmap;
  LyndonRewriter rewriter(lmap->alphabet());
  for (const auto& [spec, c] : combo) {
    common_map(combo.begin()->first, spec);
    for (const auto& [monomial, d] : rewriter.rewrite(word_of_fraction(spec))) {
      std::vector<FractionSpec> key;
      for (const auto& w : monomial) key.push_back(spec_of_word(w, lmap));
      std::sort(key.begin(), key.end());
      Rational& slot = out[key];
      slot += c * d;
      if (slot == 0) out.erase(key);
    }
  }
  return out;
}

FractionCombo expand(const FractionPolynomial& p) {
  FractionCombo out;
  for (const auto& [monomial, c] : p) {
    if (monomial.empty()) throw InvalidArgument("constant monomials have no fraction form");
    FractionCombo term = monomial.size() == 1 ? FractionCombo{{monomial[0], Rational(1)}} : expand_product(monomial);
    for (const auto& [spec, d] : term) out[spec] += c * d;
  }
  std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
  return out;
}

namespace {

using WordTerms = std::vector<std::pair<Word, Rational>>;

// sum_w c_w phi(w) for words sharing the letter multiset whose forms add up to
// `total`. phi(w) = prod_i 1 / F(w[i..]) with F the sum of the letters' forms,
// so the sum is (1 / total) * sum_x (the same sum over the tails of the words
// starting with x). Summing along this trie keeps partial results close to the
// size of the final one, unlike a flat common denominator.
RationalGerm sum_words(const WordTerms& terms, const LinearForm& total, const LMap& lmap) {
  RationalGerm sum;
  std::map<Letter, WordTerms> by_head;
  for (const auto& [w, c] : terms) {
    if (w.empty()) {
      sum = sum + RationalGerm(c);
      continue;
    }
    by_head[w.front()].emplace_back(Word(w.begin() + 1, w.end()), c);
  }
  if (by_head.empty()) return sum;
  if (total.is_zero()) throw ZeroCumulativeForm("cumulative form vanishes");
  RationalGerm inner_sum;
  for (const auto& [head, tails] : by_head) {
    LinearForm rest = head == kX0 ? total : total - lmap.form(head);
    inner_sum = inner_sum + sum_words(tails, rest, lmap);
  }
  return sum + inner_sum * RationalGerm::pole(total);
}

}  // namespace

RationalGerm combo_germ(const FractionCombo& combo) {
  // Group by the multiset of letters; each group shares its total form.
  std::map<std::vector<Letter>, WordTerms> groups;
  std::map<std::vector<Letter>, LinearForm> totals;
  for (const auto& [spec, c] : combo) {
    check_shape(spec);
    std::vector<Letter> letters = spec.letters;
    std::sort(letters.begin(), letters.end());
    LinearForm total;
    for (Letter u : letters) total += spec.lmap->form(u);
    totals[letters] = total;
    groups[letters].emplace_back(raw_word(spec), c);
  }
  RationalGerm sum;
  for (const auto& [letters, terms] : groups) {
    sum = sum + sum_words(terms, totals.at(letters), *combo.begin()->first.lmap);
  }
  return sum;
}

namespace {

std::string letter_text(const LMap& lmap, Letter u) {
  if (lmap.alphabet().kind() != Alphabet::Kind::Sets) return std::to_string(u);
  std::string out = "{";
  bool first = true;
  for (int e : set_elements(u)) {
    if (!first) out += ",";
    out += std::to_string(e);
    first = false;
  }
  return out + "}";
}

std::string scaled(const Rational& c, const std::string& body, bool first) {
  std::string out;
  Rational magnitude = c;
  if (c < 0) {
    out = first ? "-" : " - ";
    magnitude = -c;
  } else if (!first) {
    out = " + ";
  }
  if (magnitude != 1) out += to_string(magnitude) + "*";
  return out + body;
}

}  // namespace

std::string to_string(const FractionSpec& spec) {
  std::string out = "f[";
  for (std::size_t i = 0; i < spec.exponents.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(spec.exponents[i]);
  }
  out += "; ";
  for (std::size_t i = 0; i < spec.letters.size(); ++i) {
    if (i) out += ",";
    out += spec.lmap ? letter_text(*spec.lmap, spec.letters[i]) : std::to_string(spec.letters[i]);
  }
  return out + "]";
}

std::string to_string(const FractionCombo& combo) {
  if (combo.empty()) return "0";
  std::string out;
  for (const auto& [spec, c] : combo) out += scaled(c, to_string(spec), out.empty());
  return out;
}

std::string to_string(const FractionPolynomial& p) {
  if (p.empty()) return "0";
  std::string out;
  for (const auto& [monomial, c] : p) {
    std::string body;
    for (const auto& spec : monomial) body += (body.empty() ? "" : "·") + to_string(spec);
    out += scaled(c, body.empty() ? "1" : body, out.empty());
  }
  return out;
}

FractionSpec parse_fraction_spec(std::string_view text, std::shared_ptr<const LMap> lmap) {
  std::size_t i = 0;
  auto skip = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  auto expect = [&](char c) {
    skip();
    if (i >= text.size() || text[i] != c) throw ParseError(std::string("expected '") + c + "'", i);
    ++i;
  };
  auto peek = [&](char c) {
    skip();
    return i < text.size() && text[i] == c;
  };
  auto number = [&]() -> std::uint64_t {
    skip();
    std::size_t start = i;
    std::uint64_t v = 0;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      if (v > 1'000'000'000'000ULL) throw ParseError("number too large", start);
      v = v * 10 + static_cast<std::uint64_t>(text[i++] - '0');
    }
    if (i == start) throw ParseError("expected a number", start);
    return v;
  };

  FractionSpec spec;
  spec.lmap = lmap;
  expect('f');
  expect('[');
  if (!peek(';')) {
    do {
      std::size_t at = i;
      std::uint64_t s = number();
      if (s < 1 || s > 10000) throw ParseError("exponents must be positive", at);
      spec.exponents.push_back(static_cast<int>(s));
    } while (peek(',') && (++i, true));
  }
  expect(';');
  if (!peek(']')) {
    do {
      skip();
      std::size_t at = i;
      Letter u;
      if (peek('{')) {
        ++i;
        std::vector<int> elements;
        do {
          std::uint64_t e = number();
          if (e < 1 || e > 64) throw ParseError("set elements must lie in 1..64", at);
          elements.push_back(static_cast<int>(e));
        } while (peek(',') && (++i, true));
        expect('}');
        if (lmap->alphabet().kind() != Alphabet::Kind::Sets) throw ParseError("set letter for a non-set L-map", at);
        u = set_letter(elements);
      } else {
        u = number();
        if (lmap->alphabet().kind() == Alphabet::Kind::Sets) throw ParseError("set letters are written {...}", at);
      }
      if (u == kX0 || !lmap->alphabet().contains(u)) throw ParseError("letter not in the alphabet", at);
      spec.letters.push_back(u);
    } while (peek(',') && (++i, true));
  }
  expect(']');
  skip();
  if (i != text.size()) throw ParseError("trailing input after fraction spec", i);
  if (spec.exponents.size() != spec.letters.size()) throw ParseError("one exponent per letter expected", 0);
  return spec;
}

// --- forests ---------------------------------------------------------------

namespace {

Letter mask_of(const std::vector<int>& set) { return set_letter(set); }

void validate_siblings(const std::vector<ForestNode>& nodes, Letter parent, bool has_parent) {
  Letter used = 0;
  for (const auto& node : nodes) {
    if (node.set.empty()) throw InvalidArgument("forest node " + std::to_string(node.id) + " has an empty set");
    if (node.exponent < 1) throw InvalidArgument("forest exponents must be positive");
    Letter mask = mask_of(node.set);
    if (has_parent && (mask & ~parent) != 0) {
      throw InvalidArgument("forest node " + std::to_string(node.id) + " is not inside its parent");
    }
    if (mask & used) throw InvalidArgument("forest node " + std::to_string(node.id) + " overlaps a sibling");
    used |= mask;
    validate_siblings(node.children, mask, true);
  }
}

void collect_factors(const std::vector<ForestNode>& nodes, std::vector<std::pair<LinearForm, int>>& den) {
  for (const auto& node : nodes) {
    den.emplace_back(LinearForm::sum_of(node.set), node.exponent);
    collect_factors(node.children, den);
  }
}

WordPolynomial flatten_nodes(const std::vector<ForestNode>& nodes);

// Ladder words of one subtree over the set alphabet. Every word's letters
// partition the node's set, and the first block of a word carries the
// outermost cumulative form, which is z_I.
WordPolynomial flatten_node(const ForestNode& node) {
  const Letter mask = mask_of(node.set);
  WordPolynomial below = flatten_nodes(node.children);
  WordPolynomial out;
  for (const auto& [w, c] : below) {
    Letter covered = 0;
    for (Letter a : w) covered |= a;
    Word next;
    next.insert(next.end(), static_cast<std::size_t>(covered == mask ? node.exponent : node.exponent - 1), kX0);
    // Children already cover I: only the outer exponent rises.
    if (covered != mask) next.push_back(mask & ~covered);
    next.insert(next.end(), w.begin(), w.end());
    add_to(out, next, c);
  }
  return out;
}

WordPolynomial flatten_nodes(const std::vector<ForestNode>& nodes) {
  WordPolynomial product{{Word{}, Rational(1)}};
  for (const auto& node : nodes) product = shuffle(product, flatten_node(node));
  return product;
}

}  // namespace

void validate(const Forest& forest) { validate_siblings(forest, 0, false); }

RationalGerm forest_fraction(const Forest& forest) {
  validate(forest);
  std::vector<std::pair<LinearForm, int>> den;
  collect_factors(forest, den);
  return RationalGerm::fraction(Polynomial(1), den);
}

FractionCombo flatten_forest(const Forest& forest) {
  validate(forest);
  return combo_of_words(flatten_nodes(forest), LMap::speer());
}

}  // namespace mero
