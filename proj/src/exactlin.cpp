#include "mero/exactlin.hpp"

#include <algorithm>

#include "mero/errors.hpp"

namespace mero {

namespace {

Rational determinant(std::vector<std::vector<Rational>> m) {
  const std::size_t n = m.size();
  Rational det = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && m[pivot][col] == 0) ++pivot;
    if (pivot == n) return 0;
    if (pivot != col) {
      std::swap(m[pivot], m[col]);
      det = -det;
    }
    det *= m[col][col];
    for (std::size_t r = col + 1; r < n; ++r) {
      if (m[r][col] == 0) continue;
      Rational factor = m[r][col] / m[col][col];
      for (std::size_t c = col; c < n; ++c) m[r][c] -= factor * m[col][c];
    }
  }
  return det;
}

// Solves the square system a x = b exactly; a must be nonsingular.
std::vector<Rational> solve(std::vector<std::vector<Rational>> a, std::vector<Rational> b) {
  const std::size_t n = a.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a[pivot][col] == 0) ++pivot;
    if (pivot == n) throw InvalidArgument("singular linear system");
    std::swap(a[pivot], a[col]);
    std::swap(b[pivot], b[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col] == 0) continue;
      Rational factor = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= factor * a[col][c];
      b[r] -= factor * b[col];
    }
  }
  for (std::size_t i = 0; i < n; ++i) b[i] /= a[i][i];
  return b;
}

}  // namespace

InnerProduct::InnerProduct(std::vector<std::vector<Rational>> gram) : gram_(std::move(gram)) {
  const std::size_t n = gram_.size();
  for (const auto& row : gram_) {
    if (row.size() != n) throw InvalidArgument("Gram block must be square");
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (gram_[i][j] != gram_[j][i]) throw InvalidArgument("Gram block must be symmetric");
    }
  }
  for (std::size_t k = 1; k <= n; ++k) {
    std::vector<std::vector<Rational>> minor(k, std::vector<Rational>(k));
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) minor[i][j] = gram_[i][j];
    }
    if (determinant(std::move(minor)) <= 0) {
      throw InvalidArgument("Gram block must be positive definite");
    }
  }
}

Rational InnerProduct::operator()(const LinearForm& a, const LinearForm& b) const {
  if (gram_.empty()) return dot(a, b);
  const auto n = static_cast<int>(gram_.size());
  Rational sum = 0;
  for (const auto& [i, ai] : a.terms()) {
    for (const auto& [j, bj] : b.terms()) {
      if (i <= n && j <= n) {
        sum += ai * bj * gram_[i - 1][j - 1];
      } else if (i == j) {
        sum += ai * bj;
      }
    }
  }
  return sum;
}

Subspace Subspace::span(std::span<const LinearForm> forms) {
  Subspace out;
  for (const auto& f : forms) {
    LinearForm r = out.reduce(f);
    if (r.is_zero()) continue;
    const int pivot = r.min_variable();
    r *= Rational(1) / r.terms().front().second;
    for (auto& row : out.basis_) {
      Rational c = row.coefficient(pivot);
      if (c != 0) row -= r * c;
    }
    auto pos = std::lower_bound(out.basis_.begin(), out.basis_.end(), pivot,
                                [](const LinearForm& row, int p) { return row.min_variable() < p; });
    out.basis_.insert(pos, std::move(r));
  }
  return out;
}

Subspace span(std::span<const LinearForm> forms) { return Subspace::span(forms); }

LinearForm Subspace::reduce(const LinearForm& f) const {
  LinearForm r = f;
  for (const auto& row : basis_) {
    Rational c = r.coefficient(row.min_variable());
    if (c != 0) r -= row * c;
  }
  return r;
}

bool Subspace::contains(const Subspace& other) const {
  return std::all_of(other.basis_.begin(), other.basis_.end(),
                     [this](const LinearForm& f) { return contains(f); });
}

Subspace operator+(const Subspace& a, const Subspace& b) {
  std::vector<LinearForm> forms = a.basis_;
  forms.insert(forms.end(), b.basis_.begin(), b.basis_.end());
  return Subspace::span(forms);
}

std::strong_ordering operator<=>(const Subspace& a, const Subspace& b) {
  if (auto c = a.dim() <=> b.dim(); c != 0) return c;
  for (std::size_t i = 0; i < a.basis_.size(); ++i) {
    if (auto c = a.basis_[i] <=> b.basis_[i]; c != 0) return c;
  }
  return std::strong_ordering::equal;
}

bool orthogonal(const InnerProduct& q, const Subspace& u, const Subspace& v) {
  for (const auto& a : u.basis()) {
    for (const auto& b : v.basis()) {
      if (q(a, b) != 0) return false;
    }
  }
  return true;
}

OrthogonalParts orth_decompose(const InnerProduct& q, const LinearForm& f, const Subspace& u) {
  const auto& basis = u.basis();
  const std::size_t n = basis.size();
  if (n == 0) return {LinearForm(), f};
  std::vector<std::vector<Rational>> gram(n, std::vector<Rational>(n));
  std::vector<Rational> rhs(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) gram[i][j] = q(basis[i], basis[j]);
    rhs[i] = q(basis[i], f);
  }
  std::vector<Rational> x = solve(std::move(gram), std::move(rhs));
  LinearForm parallel;
  for (std::size_t i = 0; i < n; ++i) parallel += basis[i] * x[i];
  return {parallel, f - parallel};
}

std::optional<Circuit> find_circuit(std::span<const LinearForm> forms) {
  // Incremental elimination that remembers, for every echelon row, which
  // combination of the input forms produced it.
  struct Row {
    LinearForm form;
    std::vector<Rational> combination;
  };
  std::vector<Row> rows;
  const std::size_t n = forms.size();
  for (std::size_t i = 0; i < n; ++i) {
    Row current{forms[i], std::vector<Rational>(n)};
    current.combination[i] = 1;
    for (const auto& row : rows) {
      Rational c = current.form.coefficient(row.form.min_variable());
      if (c == 0) continue;
      current.form -= row.form * c;
      for (std::size_t k = 0; k < n; ++k) current.combination[k] -= c * row.combination[k];
    }
    if (current.form.is_zero()) {
      Circuit circuit;
      std::size_t largest = n;
      for (std::size_t k = 0; k < n; ++k) {
        if (current.combination[k] == 0) continue;
        circuit.indices.push_back(k);
        circuit.coefficients.push_back(current.combination[k]);
        if (largest == n || forms[largest] < forms[k]) largest = k;
      }
      auto pos = std::find(circuit.indices.begin(), circuit.indices.end(), largest);
      Rational scale = Rational(-1) / circuit.coefficients[pos - circuit.indices.begin()];
      for (auto& c : circuit.coefficients) c *= scale;
      return circuit;
    }
    Rational lead = current.form.terms().front().second;
    current.form *= Rational(1) / lead;
    for (auto& c : current.combination) c /= lead;
    rows.push_back(std::move(current));
  }
  return std::nullopt;
}

std::optional<std::vector<Rational>> express_in(std::span<const LinearForm> independent,
                                                const LinearForm& f) {
  std::vector<LinearForm> forms(independent.begin(), independent.end());
  forms.push_back(f);
  if (f.is_zero()) return std::vector<Rational>(independent.size());
  auto circuit = find_circuit(forms);
  if (!circuit || circuit->indices.back() != independent.size()) return std::nullopt;
  // Rescale so that f has coefficient -1: f = sum c_i L_i.
  Rational scale = Rational(-1) / circuit->coefficients.back();
  std::vector<Rational> coords(independent.size());
  for (std::size_t k = 0; k + 1 < circuit->indices.size(); ++k) {
    coords[circuit->indices[k]] = circuit->coefficients[k] * scale;
  }
  return coords;
}

std::string to_string(const Subspace& u) {
  std::string out = "span[";
  for (std::size_t i = 0; i < u.basis().size(); ++i) {
    if (i) out += ", ";
    out += to_string(u.basis()[i]);
  }
  return out + "]";
}

}  // namespace mero
