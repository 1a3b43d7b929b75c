#include "mero/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>

#include "mero/errors.hpp"

namespace mero::cli {

namespace {

// ---------------------------------------------------------------------------
// Germ expressions

class GermParser {
 public:
  explicit GermParser(std::string_view text) : text_(text) {}

  RationalGerm parse() {
    Value v = expr();
    skip();
    if (pos_ < text_.size()) throw ParseError("unexpected '" + std::string(1, text_[pos_]) + "'", pos_);
    return v.germ;
  }

 private:
  // germ = constant * prod form^exponent when that shape is known; exponents
  // may be negative. Affine marks a factor like 1 + z1 somewhere in it.
  struct Value {
    RationalGerm germ;
    std::optional<std::pair<Rational, std::vector<std::pair<LinearForm, int>>>> factored;
    bool affine = false;
  };

  static Value classify(RationalGerm germ) {
    Value v{std::move(germ), std::nullopt, false};
    if (!v.germ.is_polynomial()) return v;
    const Polynomial& p = v.germ.numerator();
    if (p.is_constant()) {
      v.factored.emplace(p.constant_term(), std::vector<std::pair<LinearForm, int>>{});
    } else if (p.total_degree() == 1) {
      if (p.constant_term() != 0) {
        v.affine = true;
      } else {
        std::vector<LinearForm::Term> terms;
        for (const auto& [m, c] : p.terms()) terms.emplace_back(m.powers().front().first, c);
        v.factored.emplace(Rational(1), std::vector<std::pair<LinearForm, int>>{{LinearForm(terms), 1}});
      }
    }
    return v;
  }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  // Consumes '+' or '-' (including U+2212) and returns it, or 0.
  char sign() {
    skip();
    if (pos_ >= text_.size()) return 0;
    if (text_[pos_] == '+' || text_[pos_] == '-') return text_[pos_++];
    if (text_.substr(pos_, 3) == "\xE2\x88\x92") {
      pos_ += 3;
      return '-';
    }
    return 0;
  }

  bool accept(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  std::string digits() {
    skip();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ == start) throw ParseError("expected a number", start);
    return std::string(text_.substr(start, pos_ - start));
  }

  int small_positive(const std::string& d, std::size_t at, const char* what) {
    if (d.size() > 6 || std::stoi(d) == 0) throw ParseError(std::string(what) + " must lie in 1..999999", at);
    return std::stoi(d);
  }

  Value expr() {
    Value acc;
    char s = sign();
    acc = term();
    if (s == '-') acc = negate(acc);
    while ((s = sign())) {
      Value rhs = term();
      if (s == '-') rhs = negate(rhs);
      acc = classify(acc.germ + rhs.germ);
    }
    return acc;
  }

  static Value negate(Value v) {
    v.germ = -v.germ;
    if (v.factored) v.factored->first = -v.factored->first;
    return v;
  }

  Value term() {
    Value acc = factor();
    while (true) {
      skip();
      const std::size_t at = pos_;
      if (accept('*')) {
        acc = multiply(std::move(acc), factor());
      } else if (accept('/')) {
        acc = divide(std::move(acc), factor(), at);
      } else {
        return acc;
      }
    }
  }

  static Value multiply(Value a, Value b) {
    Value out;
    out.germ = a.germ * b.germ;
    out.affine = a.affine || b.affine;
    if (a.factored && b.factored) {
      auto forms = a.factored->second;
      forms.insert(forms.end(), b.factored->second.begin(), b.factored->second.end());
      out.factored.emplace(Rational(a.factored->first * b.factored->first), std::move(forms));
    }
    return out;
  }

  static Value divide(Value a, const Value& b, std::size_t at) {
    if (b.affine) throw NonHomogeneousPole("divisor is not homogeneous (position " + std::to_string(at) + ")");
    if (!b.factored) throw ParseError("divisor must be a product of linear forms", at);
    if (b.factored->first == 0) throw ParseError("division by zero", at);
    RationalGerm inverse(Rational(1) / b.factored->first);
    for (const auto& [form, e] : b.factored->second) {
      inverse = inverse * (e > 0 ? RationalGerm::pole(form, e) : RationalGerm(Polynomial(form).pow(-e)));
    }
    Value out;
    out.germ = a.germ * inverse;
    out.affine = a.affine;
    if (a.factored) {
      auto forms = a.factored->second;
      for (const auto& [form, e] : b.factored->second) forms.emplace_back(form, -e);
      out.factored.emplace(Rational(a.factored->first / b.factored->first), std::move(forms));
    }
    return out;
  }

  Value factor() {
    Value base = atom();
    while (accept('^')) {
      skip();
      const std::size_t at = pos_;
      const int e = small_positive(digits(), at, "exponent");
      Value out;
      out.germ = base.germ.pow(e);
      out.affine = base.affine;
      if (base.factored) {
        Rational c = 1;
        for (int k = 0; k < e; ++k) c *= base.factored->first;
        auto forms = base.factored->second;
        for (auto& [form, f] : forms) f *= e;
        out.factored.emplace(c, std::move(forms));
      }
      base = std::move(out);
    }
    return base;
  }

  Value atom() {
    skip();
    const std::size_t at = pos_;
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input", at);
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Value inner = expr();
      if (!accept(')')) throw ParseError("expected ')'", pos_);
      return inner;
    }
    if (c == 'z') {
      ++pos_;
      if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        throw ParseError("expected a variable index", pos_);
      }
      const int index = small_positive(digits(), at + 1, "variable index");
      return classify(RationalGerm(Polynomial::variable(index)));
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      return classify(RationalGerm(Rational(Integer(digits()))));
    }
    throw ParseError("unexpected '" + std::string(1, c) + "'", at);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

RationalGerm parse_germ(std::string_view text) { return GermParser(text).parse(); }

LinearForm parse_linear_form(std::string_view text) {
  const RationalGerm g = parse_germ(text);
  const Polynomial& p = g.numerator();
  if (!g.is_polynomial() || p.is_zero() || p.total_degree() != 1 || p.constant_term() != 0) {
    throw ParseError("expected a homogeneous linear form", 0);
  }
  std::vector<LinearForm::Term> terms;
  for (const auto& [m, c] : p.terms()) terms.emplace_back(m.powers().front().first, c);
  return LinearForm(terms);
}

namespace {

bool opens(char c) { return c == '(' || c == '[' || c == '{'; }
bool closes(char c) { return c == ')' || c == ']' || c == '}'; }

struct Piece {
  std::string_view text;
  std::size_t offset;
};

Piece trim(std::string_view text, std::size_t offset) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) {
    text.remove_prefix(1);
    ++offset;
  }
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  return {text, offset};
}

// Splits at top-level occurrences of the separators.
std::vector<std::pair<char, Piece>> split_top(std::string_view text, std::size_t offset, std::string_view separators,
                                              bool leading_sign) {
  std::vector<std::pair<char, Piece>> out;
  int depth = 0;
  std::size_t start = 0;
  char pending = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (opens(c)) ++depth;
    if (closes(c)) {
      if (--depth < 0) throw ParseError("unbalanced brackets", offset + i);
    }
    if (depth != 0 || separators.find(c) == std::string_view::npos) continue;
    Piece before = trim(text.substr(start, i - start), offset + start);
    if (before.text.empty() && leading_sign && out.empty() && pending == 0) {
      pending = c;
    } else {
      if (before.text.empty()) throw ParseError("missing operand", offset + i);
      out.emplace_back(pending, before);
      pending = c;
    }
    start = i + 1;
  }
  if (depth != 0) throw ParseError("unbalanced brackets", offset + text.size());
  Piece last = trim(text.substr(start), offset + start);
  if (last.text.empty()) throw ParseError("missing operand", offset + text.size());
  out.emplace_back(pending, last);
  return out;
}

template <typename F>
auto at_offset(std::size_t offset, F&& parse) {
  try {
    return parse();
  } catch (const ParseError& e) {
    throw ParseError(e.message(), offset + e.position());
  }
}

}  // namespace

LocalityCombo parse_combo(std::string_view text, const std::shared_ptr<const LMap>& lmap) {
  LocalityCombo out;
  for (const auto& [sign, term] : split_top(text, 0, "+-", true)) {
    LocalityMonomial m;
    Rational weight = sign == '-' ? -1 : 1;
    for (const auto& [op, factor] : split_top(term.text, term.offset, "*", false)) {
      if (factor.text.starts_with("f[")) {
        m.factors.push_back(at_offset(factor.offset, [&] { return parse_fraction_spec(factor.text, lmap); }));
        continue;
      }
      const RationalGerm g = at_offset(factor.offset, [&] { return parse_germ(factor.text); });
      if (!g.is_polynomial()) {
        throw InvalidArgument("factor '" + std::string(factor.text) + "' is not a polynomial; write fractions as f[...]");
      }
      m.holo *= g.numerator();
    }
    if (m.holo.is_zero()) continue;
    add_to(out, std::move(m), Real(weight));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Command line

namespace {

using Json = nlohmann::ordered_json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string error_kind(const Error& e) {
#define MERO_KIND(Name) \
  if (dynamic_cast<const Name*>(&e)) return #Name
  MERO_KIND(ParseError);
  MERO_KIND(NotLocal);
  MERO_KIND(NonHomogeneousPole);
  MERO_KIND(EmptyWord);
  MERO_KIND(WordEndsInX0);
  MERO_KIND(ZeroCumulativeForm);
  MERO_KIND(NotLocalSpec);
  MERO_KIND(TooManyVariables);
  MERO_KIND(DependenceEscapesVars);
  MERO_KIND(DivergentIndex);
  MERO_KIND(NotChen);
  MERO_KIND(EvaluatorDomain);
  MERO_KIND(IncompatibleGenerators);
  MERO_KIND(PrecisionUnattainable);
  MERO_KIND(InvalidArgument);
#undef MERO_KIND
  return "Error";
}

struct Settings {
  InnerProduct q;
  int precision = 10;
  int perm_cap = 8;
  bool json = false;
  std::istream* in = nullptr;
};

std::string read_stream(std::istream& in) {
  std::ostringstream buffer;
  buffer << in.rdbuf();
  std::string s = buffer.str();
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  return s;
}

// An inline argument, or all of stdin for "-".
std::string input_text(const std::string& arg, const Settings& settings) {
  return arg == "-" ? read_stream(*settings.in) : arg;
}

std::string file_text(const std::string& path, const Settings& settings) {
  if (path == "-") return read_stream(*settings.in);
  std::ifstream file(path);
  if (!file) throw UsageError("cannot read " + path);
  return read_stream(file);
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("invalid JSON: " + std::string(e.what()), e.byte > 0 ? e.byte - 1 : 0);
  }
}

Rational json_rational(const Json& value) {
  if (value.is_string()) return parse_rational(value.get<std::string>());
  if (value.is_number_integer()) return Rational(Integer(std::to_string(value.get<long long>())));
  throw ParseError("expected a rational as \"p/q\"", 0);
}

InnerProduct read_gram(const std::string& path, const Settings& settings) {
  const Json doc = parse_json(file_text(path, settings));
  if (!doc.is_object() || !doc.contains("gram") || !doc["gram"].is_array()) {
    throw ParseError("expected {\"gram\": [[...]]}", 0);
  }
  std::vector<std::vector<Rational>> gram;
  for (const auto& row : doc["gram"]) {
    if (!row.is_array()) throw ParseError("Gram rows must be arrays", 0);
    std::vector<Rational> r;
    for (const auto& x : row) r.push_back(json_rational(x));
    gram.push_back(std::move(r));
  }
  return InnerProduct(std::move(gram));
}

std::shared_ptr<const LMap> lmap_named(const std::string& name) {
  if (name == "chen") return LMap::chen();
  if (name == "weak-chen") return LMap::weak_chen();
  return LMap::speer();
}

Alphabet alphabet_named(const std::string& name) {
  return name == "sets" ? Alphabet::sets() : Alphabet::integers();
}

// "1,2,3" or a word literal such as "x1x2" or "x{1}x{2,3}".
std::vector<Letter> parse_letters(const std::string& text, const Alphabet& alphabet) {
  if (text.starts_with("x")) return parse_word(alphabet, text);
  std::vector<Letter> out;
  std::stringstream stream(text);
  std::string item;
  std::size_t offset = 0;
  while (std::getline(stream, item, ',')) {
    Piece p = trim(item, offset);
    if (p.text.empty() || !std::all_of(p.text.begin(), p.text.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
      throw ParseError("expected a comma separated list of positive integers", p.offset);
    }
    if (p.text.size() > 18) throw ParseError("letter too large", p.offset);
    const auto v = std::stoull(std::string(p.text));
    if (v == 0) throw ParseError("letters start at 1", p.offset);
    out.push_back(v);
    offset += item.size() + 1;
  }
  return out;
}

std::vector<int> parse_vars(const std::string& text) {
  std::vector<int> out;
  for (Letter u : parse_letters(text, Alphabet::integers())) {
    if (u > 1'000'000) throw ParseError("variable index too large", 0);
    out.push_back(static_cast<int>(u));
  }
  return out;
}

std::vector<int> germ_variables(const RationalGerm& f) {
  std::set<int> vars;
  for (int v : f.numerator().variables()) vars.insert(v);
  for (const auto& [form, e] : f.denominator()) {
    for (int v : form.support()) vars.insert(v);
  }
  return {vars.begin(), vars.end()};
}

// ---- JSON and text renderings ----

Json form_json(const LinearForm& f) {
  Json out = Json::object();
  for (const auto& [i, c] : f.terms()) out["z" + std::to_string(i)] = to_string(c);
  return out;
}

Json decomposition_json(const Decomposition& d) {
  Json terms = Json::array();
  for (const auto& t : d.terms) {
    Json den = Json::array();
    for (const auto& [form, e] : t.denominator.factors()) den.push_back({{"form", form_json(form)}, {"exp", e}});
    terms.push_back({{"num", to_string(t.numerator)}, {"den", den}});
  }
  return {{"terms", terms}, {"holo", to_string(d.holomorphic)}};
}

std::string decomposition_text(const Decomposition& d) {
  std::string out;
  for (const auto& t : d.terms) out += to_string(t.germ()) + "\n";
  return out + "holo: " + to_string(d.holomorphic);
}

long double bound_of(const Real& x) { return x.is_exact() ? 0 : x.radius(); }

Json real_json(const Real& x, int precision) {
  return {{"value", to_string(x, precision)}, {"error_bound", static_cast<double>(bound_of(x))}};
}

std::string real_text(const Real& x, int precision) {
  if (x.is_exact()) return to_string(x);
  char bound[64];
  std::snprintf(bound, sizeof bound, "%.3Le", x.radius());
  return to_string(x, precision) + " +- " + bound;
}

Json combo_json(const LocalityCombo& c, int precision) {
  Json terms = Json::array();
  for (const auto& [m, w] : c) {
    Json factors = Json::array();
    for (const auto& f : m.factors) factors.push_back(to_string(f));
    Json weight = real_json(w, precision);
    terms.push_back({{"weight", weight["value"]},
                     {"error_bound", weight["error_bound"]},
                     {"holo", to_string(m.holo)},
                     {"factors", factors}});
  }
  return {{"terms", terms}};
}

Json fraction_combo_json(const FractionCombo& c) {
  Json out = Json::array();
  for (const auto& [spec, coeff] : c) out.push_back({{"spec", to_string(spec)}, {"coeff", to_string(coeff)}});
  return out;
}

Json transform_json(const GaloisTransform& t, int precision) {
  Json shifts = Json::array();
  for (const auto& s : t.generators()) {
    const auto c = t.shift(s);
    if (!c) throw InvalidArgument("only shift transforms can be written out");
    Json value = real_json(*c, precision);
    shifts.push_back({{"generator", to_string(s)}, {"value", value["value"]}, {"error_bound", value["error_bound"]}});
  }
  return {{"shifts", shifts}};
}

std::string transform_text(const GaloisTransform& t, int precision) {
  std::string out;
  for (const auto& s : t.generators()) {
    const std::string c = real_text(*t.shift(s), precision);
    out += (out.empty() ? "" : "\n") + to_string(s) + " -> " + to_string(s) +
           (c.starts_with("-") ? " - " + c.substr(1) : " + " + c);
  }
  return out.empty() ? "identity" : out;
}

GaloisTransform read_transform(const std::string& path, const Settings& settings) {
  const Json doc = parse_json(file_text(path, settings));
  if (!doc.is_object() || !doc.contains("shifts") || !doc["shifts"].is_array()) {
    throw ParseError("expected {\"shifts\": [...]}", 0);
  }
  std::map<FractionSpec, Real> shifts;
  for (const auto& entry : doc["shifts"]) {
    if (!entry.is_object() || !entry.contains("generator") || !entry.contains("value")) {
      throw ParseError("shift entries need \"generator\" and \"value\"", 0);
    }
    const FractionSpec s = parse_fraction_spec(entry["generator"].get<std::string>(), LMap::chen());
    const std::string value = entry["value"].get<std::string>();
    if (value.find_first_of(".eE") == std::string::npos) {
      shifts[s] = parse_rational(value);
    } else {
      char* end = nullptr;
      const long double mid = std::strtold(value.c_str(), &end);
      if (end == value.c_str() || *end != '\0') throw ParseError("invalid decimal '" + value + "'", 0);
      const long double bound = entry.contains("error_bound") ? entry["error_bound"].get<double>() : 0;
      // The printed midpoint is rounded to the decimals written.
      const auto dot = value.find('.');
      const int decimals = dot == std::string::npos ? 0 : static_cast<int>(value.size() - dot - 1);
      shifts[s] = Real::approx(mid, bound + 0.5L * std::pow(10.0L, -decimals));
    }
  }
  return GaloisTransform::shifts(shifts);
}

Forest read_forest(const Json& nodes);

ForestNode read_node(const Json& j) {
  if (!j.is_object() || !j.contains("id") || !j.contains("set")) throw ParseError("forest nodes need \"id\" and \"set\"", 0);
  ForestNode node;
  node.id = j["id"].get<int>();
  node.set = j["set"].get<std::vector<int>>();
  node.exponent = j.value("exp", 1);
  if (j.contains("children")) node.children = read_forest(j["children"]);
  return node;
}

Forest read_forest(const Json& nodes) {
  if (!nodes.is_array()) throw ParseError("expected an array of forest nodes", 0);
  Forest out;
  for (const auto& n : nodes) out.push_back(read_node(n));
  return out;
}

Evaluator make_evaluator(const std::string& name, const Settings& s, const std::vector<int>& vars) {
  if (name == "ms") return ms_evaluator(s.q);
  if (name == "iter") return iter_evaluator(vars, s.perm_cap);
  return zeta_evaluator(s.precision);
}

std::vector<int> combo_variables(const LocalityCombo& c) {
  std::set<int> vars;
  for (const auto& [m, w] : c) {
    for (int v : germ_variables(m.germ())) vars.insert(v);
  }
  return {vars.begin(), vars.end()};
}

struct Output {
  Json json;
  std::string text;
};

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Meromorphic germs with linear poles: decompositions, evaluators and Galois transforms", "mero"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string gram_file;
  std::string format = "text";
  Settings settings;
  settings.in = &in;
  app.add_option("--gram", gram_file, "JSON file {\"gram\": [[\"p/q\", ...], ...]} with the inner product");
  app.add_option("--precision", settings.precision, "decimal digits for zeta values")->check(CLI::Range(0, 18));
  app.add_option("--perm-cap", settings.perm_cap, "largest variable count for iter")->check(CLI::PositiveNumber);
  app.add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));

  std::string input;
  std::vector<std::string> inputs;
  std::string evaluator = "ms";
  std::string vars;
  std::string kind = "p";
  std::string onto;
  std::string locality = "strict";
  std::string alphabet = "integers";
  std::string lmap = "chen";
  std::string letters;
  std::string transform_file;
  int max_length = 4;
  int max_weight = 4;
  bool local_factor = false;
  double tol = -1;

  const auto evaluators = CLI::IsMember({"ms", "iter", "zeta"});
  const auto lmaps = CLI::IsMember({"chen", "weak-chen", "speer"});
  const auto alphabets = CLI::IsMember({"integers", "sets"});

  auto* decompose_cmd = app.add_subcommand("decompose", "canonical polar decomposition");
  decompose_cmd->add_option("germ", input)->required();
  auto* pi_plus = app.add_subcommand("pi-plus", "holomorphic part of the decomposition");
  pi_plus->add_option("germ", input)->required();
  auto* eval = app.add_subcommand("eval", "evaluate a germ or a combination of fractions");
  eval->add_option("--evaluator", evaluator)->check(evaluators);
  eval->add_option("--vars", vars, "variables for iter, e.g. 1,2");
  eval->add_option("--lmap", lmap)->check(lmaps);
  eval->add_option("input", input)->required();
  auto* residue = app.add_subcommand("residue", "p- or d-residue");
  residue->add_option("--kind", kind)->check(CLI::IsMember({"p", "d"}));
  residue->add_option("germ", input)->required();
  auto* dep = app.add_subcommand("dep", "dependence subspace");
  dep->add_option("germ", input)->required();
  auto* orth = app.add_subcommand("orth", "split a linear form along a subspace");
  orth->add_option("--onto", onto, "comma separated linear forms spanning the subspace")->required();
  orth->add_option("form", input)->required();
  auto* mul = app.add_subcommand("mul", "product of two germs");
  mul->add_option("--locality", locality)->check(CLI::IsMember({"strict", "raw"}));
  mul->add_option("germs", inputs)->required()->expected(2);
  auto* shuffle_cmd = app.add_subcommand("shuffle", "shuffle product of two words");
  shuffle_cmd->add_option("--alphabet", alphabet)->check(alphabets);
  shuffle_cmd->add_option("words", inputs)->required()->expected(2);
  auto* lyndon = app.add_subcommand("lyndon", "Lyndon factorization, rewriting and generators");
  lyndon->require_subcommand(1);
  auto* factor = lyndon->add_subcommand("factor", "Chen-Fox-Lyndon factorization");
  factor->add_option("--alphabet", alphabet)->check(alphabets);
  factor->add_flag("--locality", local_factor, "locality factorization");
  factor->add_option("word", input)->required();
  auto* rewrite = lyndon->add_subcommand("rewrite", "the word as a polynomial in Lyndon words");
  rewrite->add_option("--alphabet", alphabet)->check(alphabets);
  rewrite->add_option("word", input)->required();
  auto* generators = lyndon->add_subcommand("generators", "local Lyndon words not ending in x0");
  generators->add_option("--alphabet", alphabet)->check(alphabets);
  generators->add_option("--letters", letters, "e.g. 1,2 or x1x2")->required();
  generators->add_option("--max-length", max_length)->check(CLI::PositiveNumber);
  auto* phi_cmd = app.add_subcommand("phi", "fraction of a word");
  phi_cmd->add_option("--lmap", lmap)->check(lmaps);
  phi_cmd->add_option("word", input)->required();
  auto* unphi = app.add_subcommand("unphi", "word of a fraction spec");
  unphi->add_option("--lmap", lmap)->check(lmaps);
  unphi->add_option("spec", input)->required();
  auto* expand_cmd = app.add_subcommand("expand", "product of fraction specs as a combination");
  expand_cmd->add_option("--lmap", lmap)->check(lmaps);
  expand_cmd->add_option("specs", inputs)->required();
  auto* flatten = app.add_subcommand("flatten", "Speer fractions of a forest");
  flatten->add_option("forest", input, "forest JSON file, or - for stdin")->required();
  auto* galois = app.add_subcommand("galois", "locality Galois transforms");
  galois->require_subcommand(1);
  auto* derive = galois->add_subcommand("derive", "shift transform of an evaluator");
  derive->add_option("--evaluator", evaluator)->check(evaluators);
  derive->add_option("--letters", letters, "e.g. 1,2")->required();
  derive->add_option("--max-weight", max_weight)->check(CLI::PositiveNumber);
  derive->add_option("--vars", vars, "variables for iter");
  auto* apply = galois->add_subcommand("apply", "apply a transform to a combination");
  apply->add_option("--transform", transform_file, "transform JSON file")->required();
  apply->add_option("combo", input)->required();
  auto* compose = galois->add_subcommand("compose", "composition t1 after t2");
  compose->add_option("transforms", inputs)->required()->expected(2);
  auto* invert = galois->add_subcommand("invert", "inverse transform");
  invert->add_option("transform", input)->required();
  auto* check = galois->add_subcommand("check", "compare e(x) with ms(apply(t, x))");
  check->add_option("--evaluator", evaluator)->check(evaluators);
  check->add_option("--transform", transform_file, "transform JSON file; derived from the evaluator by default");
  check->add_option("--letters", letters, "generator letters; taken from the combinations by default");
  check->add_option("--max-weight", max_weight)->check(CLI::PositiveNumber);
  check->add_option("--vars", vars, "variables for iter");
  check->add_option("--tol", tol, "tolerance; 0 for ms and iter, 1e-6 for zeta by default");
  check->add_option("combos", inputs)->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }
  settings.json = format == "json";

  try {
    if (!gram_file.empty()) settings.q = read_gram(gram_file, settings);
    const InnerProduct& q = settings.q;
    const int p = settings.precision;
    Output result;

    if (decompose_cmd->parsed()) {
      const Decomposition d = decompose(parse_germ(input_text(input, settings)), q);
      result = {decomposition_json(d), decomposition_text(d)};
    } else if (pi_plus->parsed()) {
      const Polynomial h = project_plus(parse_germ(input_text(input, settings)), q);
      result = {{{"holo", to_string(h)}}, to_string(h)};
    } else if (eval->parsed()) {
      const std::string text = input_text(input, settings);
      Real value;
      if (evaluator == "zeta" || text.find("f[") != std::string::npos) {
        const LocalityCombo c = parse_combo(text, lmap_named(lmap));
        const auto v = vars.empty() ? combo_variables(c) : parse_vars(vars);
        value = make_evaluator(evaluator, settings, v)(c);
      } else {
        const RationalGerm f = parse_germ(text);
        if (evaluator == "ms") {
          value = ms_eval(f, q);
        } else {
          value = iter_eval(f, vars.empty() ? germ_variables(f) : parse_vars(vars), settings.perm_cap);
        }
      }
      Json j = real_json(value, p);
      j["evaluator"] = evaluator;
      result = {j, real_text(value, p)};
    } else if (residue->parsed()) {
      const RationalGerm f = parse_germ(input_text(input, settings));
      const Decomposition d = kind == "p" ? p_residue(f, q) : d_residue(f, q);
      result = {decomposition_json(d), decomposition_text(d)};
    } else if (dep->parsed()) {
      const Subspace u = dependence(parse_germ(input_text(input, settings)), q);
      Json basis = Json::array();
      for (const auto& f : u.basis()) basis.push_back(to_string(f));
      result = {{{"dep", basis}, {"dim", u.dim()}}, to_string(u)};
    } else if (orth->parsed()) {
      std::vector<LinearForm> span_forms;
      for (const auto& [sep, piece] : split_top(onto, 0, ",", false)) {
        span_forms.push_back(at_offset(piece.offset, [&] { return parse_linear_form(piece.text); }));
      }
      const auto parts = orth_decompose(q, parse_linear_form(input_text(input, settings)), Subspace::span(span_forms));
      result = {{{"parallel", to_string(parts.parallel)}, {"orthogonal", to_string(parts.perpendicular)}},
                "parallel: " + to_string(parts.parallel) + "\northogonal: " + to_string(parts.perpendicular)};
    } else if (mul->parsed()) {
      const RationalGerm f = parse_germ(input_text(inputs[0], settings));
      const RationalGerm g = parse_germ(input_text(inputs[1], settings));
      const RationalGerm h = locality == "strict" ? locality_mul(f, g, q) : germ_mul(f, g);
      result = {{{"germ", to_string(h)}}, to_string(h)};
    } else if (shuffle_cmd->parsed()) {
      const Alphabet a = alphabet_named(alphabet);
      const WordPolynomial w =
          shuffle(parse_word(a, input_text(inputs[0], settings)), parse_word(a, input_text(inputs[1], settings)));
      Json terms = Json::array();
      for (const auto& [word, c] : w) terms.push_back({{"word", to_string(a, word)}, {"coeff", to_string(c)}});
      result = {{{"terms", terms}}, to_string(a, w)};
    } else if (factor->parsed()) {
      const Alphabet a = alphabet_named(alphabet);
      const Word w = parse_word(a, input_text(input, settings));
      if (local_factor) {
        const auto f = locality_cfl(a, w);
        Json factors = Json::array();
        std::string text;
        for (const auto& u : f.factors) {
          factors.push_back(to_string(a, u));
          text += "(" + to_string(a, u) + ")";
        }
        if (f.x0_power > 0) text += "(x0)^" + std::to_string(f.x0_power);
        result = {{{"factors", factors}, {"x0_power", f.x0_power}}, text};
      } else {
        Json factors = Json::array();
        std::string text;
        for (const auto& [u, k] : cfl(a, w)) {
          factors.push_back({{"word", to_string(a, u)}, {"power", k}});
          text += "(" + to_string(a, u) + ")" + (k > 1 ? "^" + std::to_string(k) : "");
        }
        result = {{{"factors", factors}}, text};
      }
    } else if (rewrite->parsed()) {
      const Alphabet a = alphabet_named(alphabet);
      const LyndonPolynomial lp = lyndon_rewrite(a, parse_word(a, input_text(input, settings)));
      Json terms = Json::array();
      for (const auto& [monomial, c] : lp) {
        Json words = Json::array();
        for (const auto& u : monomial) words.push_back(to_string(a, u));
        terms.push_back({{"lyndon", words}, {"coeff", to_string(c)}});
      }
      result = {{{"terms", terms}}, to_string(a, lp)};
    } else if (generators->parsed()) {
      const Alphabet a = alphabet_named(alphabet);
      Json words = Json::array();
      std::string text;
      for (const auto& w : locality_lyndon_generators(a, parse_letters(letters, a), max_length)) {
        words.push_back(to_string(a, w));
        text += (text.empty() ? "" : "\n") + to_string(a, w);
      }
      result = {{{"generators", words}}, text};
    } else if (phi_cmd->parsed()) {
      const auto m = lmap_named(lmap);
      const RationalGerm g = phi(parse_word(m->alphabet(), input_text(input, settings)), m);
      result = {{{"germ", to_string(g)}}, to_string(g)};
    } else if (unphi->parsed()) {
      const auto m = lmap_named(lmap);
      const Word w = word_of_fraction(parse_fraction_spec(input_text(input, settings), m));
      result = {{{"word", to_string(m->alphabet(), w)}}, to_string(m->alphabet(), w)};
    } else if (expand_cmd->parsed()) {
      const auto m = lmap_named(lmap);
      std::vector<FractionSpec> specs;
      for (const auto& s : inputs) specs.push_back(parse_fraction_spec(input_text(s, settings), m));
      const FractionCombo c = specs.size() == 1 ? FractionCombo{{specs[0], Rational(1)}} : expand_product(specs);
      result = {{{"combo", fraction_combo_json(c)}}, to_string(c)};
    } else if (flatten->parsed()) {
      const std::string text = input.starts_with("{") ? input : file_text(input, settings);
      const Json doc = parse_json(text);
      if (!doc.is_object() || !doc.contains("nodes")) throw ParseError("expected {\"nodes\": [...]}", 0);
      const Forest forest = read_forest(doc["nodes"]);
      validate(forest);
      const FractionCombo c = flatten_forest(forest);
      const RationalGerm g = forest_fraction(forest);
      result = {{{"combo", fraction_combo_json(c)}, {"germ", to_string(g)}}, to_string(c) + "\ngerm: " + to_string(g)};
    } else if (derive->parsed()) {
      const auto letter_list = parse_letters(letters, Alphabet::integers());
      std::vector<int> v = vars.empty() ? std::vector<int>(letter_list.begin(), letter_list.end()) : parse_vars(vars);
      const auto t = galois_from_evaluator(make_evaluator(evaluator, settings, v),
                                           lyndon_generators(LMap::chen(), letter_list, max_weight));
      result = {transform_json(t, p), transform_text(t, p)};
    } else if (apply->parsed()) {
      const auto t = read_transform(transform_file, settings);
      const LocalityCombo image = apply_transform(t, parse_combo(input_text(input, settings), LMap::chen()));
      result = {combo_json(image, p), to_string(image, p)};
    } else if (compose->parsed()) {
      const auto t = compose_transforms(read_transform(inputs[0], settings), read_transform(inputs[1], settings));
      result = {transform_json(t, p), transform_text(t, p)};
    } else if (invert->parsed()) {
      const auto t = invert_transform(read_transform(input, settings));
      result = {transform_json(t, p), transform_text(t, p)};
    } else if (check->parsed()) {
      std::vector<LocalityCombo> tests;
      for (const auto& s : inputs) tests.push_back(parse_combo(input_text(s, settings), LMap::chen()));
      std::set<Letter> used;
      int weight = 1;
      std::set<int> all_vars;
      for (const auto& x : tests) {
        for (const auto& [m, w] : x) {
          for (const auto& f : m.factors) {
            used.insert(f.letters.begin(), f.letters.end());
            weight = std::max(weight, f.weight());
          }
        }
        for (int v : combo_variables(x)) all_vars.insert(v);
      }
      std::vector<Letter> letter_list =
          letters.empty() ? std::vector<Letter>(used.begin(), used.end()) : parse_letters(letters, Alphabet::integers());
      if (check->count("--max-weight") == 0) max_weight = weight;
      for (Letter u : letter_list) all_vars.insert(static_cast<int>(u));
      const std::vector<int> v = vars.empty() ? std::vector<int>(all_vars.begin(), all_vars.end()) : parse_vars(vars);
      const Evaluator e = make_evaluator(evaluator, settings, v);
      const GaloisTransform t =
          transform_file.empty()
              ? galois_from_evaluator(e, lyndon_generators(LMap::chen(), letter_list, max_weight))
              : read_transform(transform_file, settings);
      const long double tolerance = tol >= 0 ? static_cast<long double>(tol) : (evaluator == "zeta" ? 1e-6L : 0.0L);
      const auto report = check_factorization(e, t, tests, tolerance, q);
      Json cases = Json::array();
      std::string text;
      for (const auto& c : report.cases) {
        cases.push_back({{"combo", to_string(c.combo, p)},
                         {"expected", real_json(c.expected, p)},
                         {"actual", real_json(c.actual, p)},
                         {"pass", c.pass}});
        text += std::string(c.pass ? "pass" : "FAIL") + ": " + to_string(c.combo, p) + ": " + real_text(c.expected, p) +
                " vs " + real_text(c.actual, p) + "\n";
      }
      text += report.all_pass() ? "all pass" : "some cases fail";
      result = {{{"cases", cases}, {"all_pass", report.all_pass()}}, text};
    }

    if (settings.json) {
      out << result.json.dump(2) << "\n";
    } else {
      out << result.text << "\n";
    }
    return 0;
  } catch (const ParseError& e) {
    if (settings.json) {
      err << Json{{"error", "ParseError"}, {"message", e.what()}}.dump() << "\n";
    } else {
      err << "parse error: " << e.what() << "\n";
    }
    return 2;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    err << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    if (settings.json) {
      err << Json{{"error", error_kind(e)}, {"message", e.what()}}.dump() << "\n";
    } else {
      err << "error: " << error_kind(e) << ": " << e.what() << "\n";
    }
    return 1;
  }
}

}  // namespace mero::cli
