#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mero/linear_form.hpp"
#include "mero/rational.hpp"

namespace mero {

// Inner product on linear forms. Optionally a symmetric positive-definite
// Gram block on z_1..z_n; the identity beyond n. The default is the standard
// dot product.
class InnerProduct {
 public:
  InnerProduct() = default;
  // Throws InvalidArgument unless the block is square, symmetric and
  // positive definite (all leading principal minors > 0).
  explicit InnerProduct(std::vector<std::vector<Rational>> gram);

  Rational operator()(const LinearForm& a, const LinearForm& b) const;

  bool is_standard() const { return gram_.empty(); }
  std::size_t block_size() const { return gram_.size(); }
  const std::vector<std::vector<Rational>>& gram() const { return gram_; }

 private:
  std::vector<std::vector<Rational>> gram_;
};

inline Rational inner(const InnerProduct& q, const LinearForm& a, const LinearForm& b) {
  return q(a, b);
}

// Finite-dimensional subspace of linear forms, stored as a reduced
// row-echelon basis: each row has a pivot variable with coefficient 1 that
// vanishes in every other row, rows sorted by pivot. Equal subspaces have
// identical bases.
class Subspace {
 public:
  Subspace() = default;

  static Subspace span(std::span<const LinearForm> forms);

  std::size_t dim() const { return basis_.size(); }
  bool is_zero() const { return basis_.empty(); }
  const std::vector<LinearForm>& basis() const { return basis_; }

  // Remainder of f after eliminating every pivot of the basis; zero iff f lies
  // in the subspace.
  LinearForm reduce(const LinearForm& f) const;
  bool contains(const LinearForm& f) const { return reduce(f).is_zero(); }
  bool contains(const Subspace& other) const;

  friend Subspace operator+(const Subspace& a, const Subspace& b);

  friend bool operator==(const Subspace&, const Subspace&) = default;
  // Dimension first, then the echelon rows.
  friend std::strong_ordering operator<=>(const Subspace& a, const Subspace& b);

 private:
  std::vector<LinearForm> basis_;
};

Subspace span(std::span<const LinearForm> forms);
inline Subspace span(std::initializer_list<LinearForm> forms) {
  return Subspace::span(std::span<const LinearForm>(forms.begin(), forms.size()));
}

bool orthogonal(const InnerProduct& q, const Subspace& u, const Subspace& v);

// f = parallel + perpendicular with parallel in u and q(perpendicular, w) = 0
// for all w in u.
struct OrthogonalParts {
  LinearForm parallel;
  LinearForm perpendicular;
};
OrthogonalParts orth_decompose(const InnerProduct& q, const LinearForm& f, const Subspace& u);

// A minimal linearly dependent subset: sum_i coefficients[i] * forms[indices[i]]
// = 0, indices ascending, and the largest form of the subset (dense
// lexicographic order) carries coefficient -1.
struct Circuit {
  std::vector<std::size_t> indices;
  std::vector<Rational> coefficients;
};
std::optional<Circuit> find_circuit(std::span<const LinearForm> forms);

// Coordinates of f in terms of the given independent forms, or nullopt if f is
// not in their span.
std::optional<std::vector<Rational>> express_in(std::span<const LinearForm> independent,
                                                const LinearForm& f);

std::string to_string(const Subspace& u);

}  // namespace mero
