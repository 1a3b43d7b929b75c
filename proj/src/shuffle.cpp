#include "mero/shuffle.hpp"

#include <algorithm>
#include <bit>
#include <cctype>

#include "mero/errors.hpp"

namespace mero {

Alphabet Alphabet::integers() { return Alphabet(Kind::Integers); }

Alphabet Alphabet::sets() { return Alphabet(Kind::Sets); }

Alphabet Alphabet::table(std::vector<Letter> order, const std::vector<std::pair<Letter, Letter>>& local_pairs) {
  Alphabet a(Kind::Table);
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (order[i] == kX0) throw InvalidArgument("x0 cannot be listed as a letter");
    if (!a.rank_.emplace(order[i], i + 1).second) throw InvalidArgument("duplicate letter in alphabet");
  }
  for (auto [u, v] : local_pairs) {
    if (u == v) throw InvalidArgument("locality must be irreflexive");
    if (!a.contains(u) || !a.contains(v)) throw InvalidArgument("locality pair names an unknown letter");
    a.local_pairs_.emplace(std::min(u, v), std::max(u, v));
  }
  return a;
}

bool Alphabet::contains(Letter a) const {
  if (a == kX0) return true;
  if (kind_ == Kind::Table) return rank_.contains(a);
  return true;
}

std::strong_ordering Alphabet::compare(Letter a, Letter b) const {
  if (a == b) return std::strong_ordering::equal;
  if (a == kX0) return std::strong_ordering::less;
  if (b == kX0) return std::strong_ordering::greater;
  switch (kind_) {
    case Kind::Integers:
      return a <=> b;
    case Kind::Sets: {
      // Largest elements first; a set that is a prefix of the other is smaller.
      Letter x = a, y = b;
      while (x != 0 && y != 0) {
        int hx = std::bit_width(x), hy = std::bit_width(y);
        if (hx != hy) return hx <=> hy;
        x &= ~(Letter(1) << (hx - 1));
        y &= ~(Letter(1) << (hy - 1));
      }
      return std::popcount(a) <=> std::popcount(b);
    }
    case Kind::Table:
      return rank_.at(a) <=> rank_.at(b);
  }
  return std::strong_ordering::equal;
}

bool Alphabet::local(Letter a, Letter b) const {
  if (a == kX0 || b == kX0) return true;
  switch (kind_) {
    case Kind::Integers:
      return a != b;
    case Kind::Sets:
      return (a & b) == 0;
    case Kind::Table:
      return local_pairs_.contains({std::min(a, b), std::max(a, b)});
  }
  return false;
}

std::string Alphabet::name(Letter a) const {
  if (a == kX0) return "x0";
  if (kind_ != Kind::Sets) return "x" + std::to_string(a);
  std::string out = "x{";
  bool first = true;
  for (int e : set_elements(a)) {
    if (!first) out += ",";
    out += std::to_string(e);
    first = false;
  }
  return out + "}";
}

Letter set_letter(const std::vector<int>& elements) {
  Letter mask = 0;
  for (int e : elements) {
    if (e < 1 || e > 64) throw InvalidArgument("set elements must lie in 1..64");
    mask |= Letter(1) << (e - 1);
  }
  if (mask == 0) throw InvalidArgument("set letters must be nonempty");
  return mask;
}

Letter set_letter(std::initializer_list<int> elements) { return set_letter(std::vector<int>(elements)); }

std::vector<int> set_elements(Letter mask) {
  std::vector<int> out;
  for (int i = 0; i < 64; ++i) {
    if (mask & (Letter(1) << i)) out.push_back(i + 1);
  }
  return out;
}

std::strong_ordering compare_words(const Alphabet& alphabet, const Word& a, const Word& b) {
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (auto c = alphabet.compare(a[i], b[i]); c != 0) return c;
  }
  return a.size() <=> b.size();
}

Word parse_word(const Alphabet& alphabet, std::string_view text) {
  Word w;
  std::size_t i = 0;
  auto skip_space = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  auto number = [&]() -> std::uint64_t {
    std::size_t start = i;
    std::uint64_t value = 0;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      if (value > (UINT64_MAX - 9) / 10) throw ParseError("letter index too large", start);
      value = value * 10 + static_cast<std::uint64_t>(text[i] - '0');
      ++i;
    }
    if (i == start) throw ParseError("expected a letter index", start);
    return value;
  };
  skip_space();
  while (i < text.size()) {
    const std::size_t start = i;
    if (text[i] != 'x') throw ParseError("expected 'x'", i);
    ++i;
    Letter letter;
    if (i < text.size() && text[i] == '{') {
      ++i;
      std::vector<int> elements;
      for (;;) {
        skip_space();
        std::uint64_t e = number();
        if (alphabet.kind() == Alphabet::Kind::Sets && (e < 1 || e > 64)) {
          throw ParseError("set elements must lie in 1..64", start);
        }
        elements.push_back(static_cast<int>(std::min<std::uint64_t>(e, 65)));
        skip_space();
        if (i < text.size() && text[i] == ',') {
          ++i;
          continue;
        }
        if (i < text.size() && text[i] == '}') {
          ++i;
          break;
        }
        throw ParseError("expected ',' or '}'", i);
      }
      if (alphabet.kind() == Alphabet::Kind::Sets) {
        letter = set_letter(elements);
      } else {
        if (elements.size() != 1) throw ParseError("only set alphabets take x{a,b,...}", start);
        letter = static_cast<Letter>(elements[0]);
      }
    } else {
      letter = number();
      if (letter != kX0 && alphabet.kind() == Alphabet::Kind::Sets) {
        throw ParseError("set letters are written x{...}", start);
      }
    }
    if (!alphabet.contains(letter)) throw ParseError("letter not in the alphabet", start);
    w.push_back(letter);
    skip_space();
  }
  return w;
}

std::string to_string(const Alphabet& alphabet, const Word& w) {
  if (w.empty()) return "1";
  std::string out;
  for (Letter a : w) out += alphabet.name(a);
  return out;
}

namespace {

std::string coefficient_prefix(const Rational& c, bool first) {
  std::string out;
  Rational magnitude = c;
  if (c < 0) {
    out = first ? "-" : " - ";
    magnitude = -c;
  } else if (!first) {
    out = " + ";
  }
  if (magnitude != 1) out += to_string(magnitude) + "*";
  return out;
}

}  // namespace

std::string to_string(const Alphabet& alphabet, const WordPolynomial& p) {
  if (p.empty()) return "0";
  std::vector<std::pair<Word, Rational>> terms(p.begin(), p.end());
  std::sort(terms.begin(), terms.end(), [&](const auto& x, const auto& y) {
    if (x.first.size() != y.first.size()) return x.first.size() < y.first.size();
    return compare_words(alphabet, x.first, y.first) < 0;
  });
  std::string out;
  for (const auto& [w, c] : terms) {
    out += coefficient_prefix(c, out.empty()) + to_string(alphabet, w);
  }
  return out;
}

void add_to(WordPolynomial& p, const Word& w, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = p.try_emplace(w, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) p.erase(it);
  }
}

WordPolynomial shuffle(const Word& a, const Word& b) {
  const std::size_t n = a.size(), m = b.size();
  // cell[i][j] = a[i..] sh b[j..], filled from the back.
  std::vector<std::vector<WordPolynomial>> cell(n + 1, std::vector<WordPolynomial>(m + 1));
  for (std::size_t i = n + 1; i-- > 0;) {
    for (std::size_t j = m + 1; j-- > 0;) {
      WordPolynomial& out = cell[i][j];
      if (i == n) {
        out[Word(b.begin() + static_cast<std::ptrdiff_t>(j), b.end())] = 1;
        continue;
      }
      if (j == m) {
        out[Word(a.begin() + static_cast<std::ptrdiff_t>(i), a.end())] = 1;
        continue;
      }
      for (const auto& [w, c] : cell[i + 1][j]) {
        Word x;
        x.reserve(w.size() + 1);
        x.push_back(a[i]);
        x.insert(x.end(), w.begin(), w.end());
        add_to(out, x, c);
      }
      for (const auto& [w, c] : cell[i][j + 1]) {
        Word x;
        x.reserve(w.size() + 1);
        x.push_back(b[j]);
        x.insert(x.end(), w.begin(), w.end());
        add_to(out, x, c);
      }
    }
    if (i + 1 <= n) cell[i + 1].clear();
  }
  return std::move(cell[0][0]);
}

WordPolynomial shuffle(const WordPolynomial& a, const WordPolynomial& b) {
  WordPolynomial out;
  for (const auto& [u, c] : a) {
    for (const auto& [v, d] : b) {
      for (const auto& [w, e] : shuffle(u, v)) add_to(out, w, c * d * e);
    }
  }
  return out;
}

std::vector<std::pair<Word, int>> cfl(const Alphabet& alphabet, const Word& w) {
  if (w.empty()) throw EmptyWord("factorization of the empty word");
  std::vector<std::pair<Word, int>> out;
  const std::size_t n = w.size();
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i + 1, k = i;
    while (j < n && !alphabet.less(w[j], w[k])) {
      k = alphabet.less(w[k], w[j]) ? i : k + 1;
      ++j;
    }
    while (i <= k) {
      Word factor(w.begin() + static_cast<std::ptrdiff_t>(i), w.begin() + static_cast<std::ptrdiff_t>(i + j - k));
      if (!out.empty() && out.back().first == factor) {
        ++out.back().second;
      } else {
        out.emplace_back(std::move(factor), 1);
      }
      i += j - k;
    }
  }
  return out;
}

bool is_lyndon(const Alphabet& alphabet, const Word& w) {
  auto f = cfl(alphabet, w);
  return f.size() == 1 && f[0].second == 1;
}

const LyndonPolynomial& LyndonRewriter::rewrite(const Word& w) {
  if (auto it = cache_.find(w); it != cache_.end()) return it->second;
  auto factors = cfl(alphabet_, w);
  LyndonPolynomial result;
  if (factors.size() == 1 && factors[0].second == 1) {
    result[{w}] = 1;
  } else {
    LyndonMonomial monomial;
    Integer factorials = 1;
    for (const auto& [factor, count] : factors) {
      for (int k = 1; k <= count; ++k) {
        monomial.push_back(factor);
        factorials *= k;
      }
    }
    std::sort(monomial.begin(), monomial.end());
    WordPolynomial leading = expand(LyndonPolynomial{{monomial, Rational(1)}});
    const Rational scale = Rational(1) / Rational(factorials);
    if (leading.at(w) * scale != 1) throw std::logic_error("shuffle leading term mismatch");
    result[monomial] = scale;
    for (const auto& [v, c] : leading) {
      if (v == w) continue;
      // v is a lexicographically smaller anagram of w.
      for (const auto& [m, d] : rewrite(v)) {
        Rational& slot = result[m];
        slot -= scale * c * d;
        if (slot == 0) result.erase(m);
      }
    }
  }
  return cache_.emplace(w, std::move(result)).first->second;
}

LyndonPolynomial lyndon_rewrite(const Alphabet& alphabet, const Word& w) {
  LyndonRewriter rewriter(alphabet);
  return rewriter.rewrite(w);
}

WordPolynomial expand(const LyndonPolynomial& p) {
  WordPolynomial out;
  for (const auto& [monomial, c] : p) {
    WordPolynomial product{{Word{}, Rational(1)}};
    for (const auto& factor : monomial) product = shuffle(product, WordPolynomial{{factor, Rational(1)}});
    for (const auto& [w, d] : product) add_to(out, w, c * d);
  }
  return out;
}

std::string to_string(const Alphabet& alphabet, const LyndonPolynomial& p) {
  if (p.empty()) return "0";
  std::string out;
  for (const auto& [monomial, c] : p) {
    std::string body;
    // Repeated factors print as powers.
    for (std::size_t i = 0; i < monomial.size();) {
      std::size_t j = i;
      while (j < monomial.size() && monomial[j] == monomial[i]) ++j;
      if (!body.empty()) body += "·";
      body += "[" + to_string(alphabet, monomial[i]) + "]";
      if (j - i > 1) body += "^" + std::to_string(j - i);
      i = j;
    }
    if (body.empty()) body = "1";
    out += coefficient_prefix(c, out.empty()) + body;
  }
  return out;
}

bool is_local_word(const Alphabet& alphabet, const Word& w) {
  for (std::size_t i = 0; i < w.size(); ++i) {
    for (std::size_t j = i + 1; j < w.size(); ++j) {
      if (!alphabet.local(w[i], w[j])) return false;
    }
  }
  return true;
}

bool is_local_pair(const Alphabet& alphabet, const Word& a, const Word& b) {
  for (Letter x : a) {
    for (Letter y : b) {
      if (!alphabet.local(x, y)) return false;
    }
  }
  return true;
}

LocalityFactorization locality_cfl(const Alphabet& alphabet, const Word& w) {
  if (w.empty()) throw EmptyWord("factorization of the empty word");
  if (!is_local_word(alphabet, w)) throw NotLocal("word is not local: " + to_string(alphabet, w));
  LocalityFactorization out;
  for (const auto& [factor, count] : cfl(alphabet, w)) {
    if (factor == Word{kX0}) {
      out.x0_power = count;
    } else {
      // A repeated factor would repeat a letter other than x0, which no
      // local word does.
      for (int k = 0; k < count; ++k) out.factors.push_back(factor);
    }
  }
  return out;
}

std::vector<Word> locality_lyndon_generators(const Alphabet& alphabet, const std::vector<Letter>& letters,
                                             int max_length) {
  if (max_length < 1) throw InvalidArgument("max_length must be at least 1");
  std::vector<Letter> sorted{kX0};
  for (Letter a : letters) {
    if (a == kX0 || !alphabet.contains(a)) throw InvalidArgument("invalid generator letter");
    sorted.push_back(a);
  }
  std::sort(sorted.begin(), sorted.end(), [&](Letter a, Letter b) { return alphabet.less(a, b); });
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

  // Duval's generation of all Lyndon words up to max_length, over letter ranks.
  const int m = static_cast<int>(sorted.size());
  std::vector<Word> out;
  std::vector<int> ranks{-1};
  while (!ranks.empty()) {
    ++ranks.back();
    Word w;
    for (int r : ranks) w.push_back(sorted[static_cast<std::size_t>(r)]);
    if (w.back() != kX0 && is_local_word(alphabet, w)) out.push_back(w);
    const std::size_t period = ranks.size();
    while (ranks.size() < static_cast<std::size_t>(max_length)) ranks.push_back(ranks[ranks.size() - period]);
    while (!ranks.empty() && ranks.back() == m - 1) ranks.pop_back();
  }
  std::sort(out.begin(), out.end(), [&](const Word& a, const Word& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return compare_words(alphabet, a, b) < 0;
  });
  return out;
}

}  // namespace mero
