#pragma once

// Graded commutative F2-algebras given by generators and homogeneous
// relations, computed one degree at a time.
//
// For each degree d the algebra keeps the list of all degree-d monomials in
// graded-lex order (declaration order of generators, larger exponent on an
// earlier generator first) and the reduced echelon form of the degree-d slice
// of the relation ideal. Basis monomials are the non-pivot columns; normal
// forms are reductions against that echelon form. Slices are built lazily,
// once, and are safe to read from several threads.

#include <cstddef>
#include <cstdint>
#include <compare>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "charclass/f2linalg.hpp"

namespace charclass {

inline constexpr int kDefaultDegreeCap = 16;

struct Generator {
  std::string name;
  int degree = 1;

  friend bool operator==(const Generator&, const Generator&) = default;
};

struct Monomial {
  std::vector<std::uint16_t> exps;

  bool is_unit() const;
  friend bool operator==(const Monomial&, const Monomial&) = default;
  friend auto operator<=>(const Monomial&, const Monomial&) = default;
};

Monomial operator*(const Monomial& a, const Monomial& b);

// A sum of distinct monomials; the coefficient of each is 1.
class Poly {
 public:
  Poly() = default;
  explicit Poly(Monomial m);
  // Pairs of equal monomials cancel.
  static Poly from_terms(std::vector<Monomial> terms);

  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  // Sorted in descending lexicographic order of exponent vectors.
  const std::vector<Monomial>& terms() const { return terms_; }
  bool contains(const Monomial& m) const;

  Poly& operator+=(const Poly& other);
  friend Poly operator+(Poly lhs, const Poly& rhs) { return lhs += rhs; }
  friend bool operator==(const Poly&, const Poly&) = default;

 private:
  std::vector<Monomial> terms_;
};

// Product without reduction modulo any relations.
Poly raw_product(const Poly& a, const Poly& b);

class Presentation;
using PresentationPtr = std::shared_ptr<const Presentation>;

class Presentation {
 public:
  static PresentationPtr create(std::vector<Generator> generators, std::vector<Poly> relations,
                                int degree_cap = kDefaultDegreeCap);
  // Relations given in the expression grammar, e.g. "a1*lambda".
  static PresentationPtr create(std::vector<Generator> generators, const std::vector<std::string>& relations,
                                int degree_cap = kDefaultDegreeCap);
  static PresentationPtr free(std::vector<Generator> generators, int degree_cap = kDefaultDegreeCap) {
    return create(std::move(generators), std::vector<Poly>{}, degree_cap);
  }

  Presentation(const Presentation&) = delete;
  Presentation& operator=(const Presentation&) = delete;

  const std::vector<Generator>& generators() const { return generators_; }
  std::size_t arity() const { return generators_.size(); }
  const std::vector<Poly>& relations() const { return relations_; }
  int degree_cap() const { return cap_; }
  std::optional<std::size_t> index_of(std::string_view name) const;

  Monomial unit_monomial() const { return Monomial{std::vector<std::uint16_t>(arity(), 0)}; }
  Poly one() const { return Poly(unit_monomial()); }
  Poly generator(std::size_t index) const;
  // Throws ContractViolation for an unknown name.
  Poly generator(std::string_view name) const;

  int degree(const Monomial& m) const;
  bool is_homogeneous(const Poly& p) const;
  // nullopt for the zero polynomial; ContractViolation if inhomogeneous.
  std::optional<int> degree_of(const Poly& p) const;

  // All degree-d monomials in graded-lex order; empty for d < 0.
  const std::vector<Monomial>& monomials(int d) const;
  // Normal-form monomials spanning the degree-d part.
  const std::vector<Monomial>& basis(int d) const;
  std::size_t dim(int d) const { return basis(d).size(); }
  // [dim H^0, ..., dim H^cap]
  std::vector<std::size_t> poincare_series(int cap) const;

  Poly normal_form(const Poly& p) const;
  // Coordinates of the normal form of p over basis(d). p must be zero or
  // homogeneous of degree d.
  F2Vector coordinates(const Poly& p, int d) const;
  Poly from_coordinates(int d, const F2Vector& v) const;

  Poly multiply(const Poly& p, const Poly& q) const;
  Poly power(const Poly& p, unsigned exponent) const;

  // Parse an expression over this algebra's generator names. The result is
  // not reduced.
  Poly parse(std::string_view expr) const;
  std::string format(const Monomial& m) const;
  std::string format(const Poly& p) const;

 private:
  struct Slice {
    std::vector<Monomial> monomials;
    F2Echelon ideal;
    std::vector<Monomial> basis;
    std::vector<std::ptrdiff_t> basis_index;  // per monomial column, -1 if pivot
  };

  Presentation(std::vector<Generator> generators, int cap);
  void check_cap(int d) const;
  const Slice& slice(int d) const;
  std::unique_ptr<Slice> build_slice(int d) const;
  std::size_t column_of(const Slice& s, const Monomial& m) const;
  F2Vector monomial_vector(const Slice& s, const Poly& p) const;

  std::vector<Generator> generators_;
  std::vector<Poly> relations_;
  std::vector<int> relation_degrees_;
  int cap_;

  mutable std::vector<std::once_flag> slice_once_;
  mutable std::vector<std::unique_ptr<Slice>> slices_;
};

// Parse with an explicit name table; used by Presentation::parse and by
// loaders that parse before an algebra exists.
Poly parse_poly(std::string_view expr, const std::vector<Generator>& generators);

// Generators and relations of both factors; clashing names from b get a
// "_2" suffix (repeated until unique). Cap is the smaller of the two.
PresentationPtr tensor(const PresentationPtr& a, const PresentationPtr& b);
// Same algebra with some generators renamed.
PresentationPtr rename(const PresentationPtr& a, const std::map<std::string, std::string>& names);

// Inclusions of a factor into a tensor product (pad exponent vectors).
Poly embed_left(const Poly& p, std::size_t right_arity);
Poly embed_right(const Poly& p, std::size_t left_arity);

// Cauchy product of two Poincare series (the series of a tensor product).
std::vector<std::size_t> convolve_series(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b);

// Degree-preserving algebra map given by images of the source generators.
class AlgebraMorphism {
 public:
  // Certifies that every source relation maps to zero; throws
  // ContractViolation naming the first violated relation otherwise.
  static AlgebraMorphism create(PresentationPtr source, PresentationPtr target, std::vector<Poly> images);
  // Degree checks only; use check_well_defined() for the relations.
  static AlgebraMorphism unchecked(PresentationPtr source, PresentationPtr target, std::vector<Poly> images);
  static AlgebraMorphism identity(const PresentationPtr& a);

  const PresentationPtr& source() const { return source_; }
  const PresentationPtr& target() const { return target_; }
  const std::vector<Poly>& images() const { return images_; }
  const Poly& image(std::size_t generator) const { return images_.at(generator); }

  Poly apply(const Poly& p) const;
  // Columns: source basis(d); rows: target basis(d).
  F2Matrix matrix(int d) const;

 private:
  AlgebraMorphism(PresentationPtr source, PresentationPtr target, std::vector<Poly> images);

  PresentationPtr source_;
  PresentationPtr target_;
  std::vector<Poly> images_;
};

// after ∘ before
AlgebraMorphism compose(const AlgebraMorphism& after, const AlgebraMorphism& before);

// Source relations that do not map to zero; empty means well defined.
std::vector<Poly> check_well_defined(const AlgebraMorphism& f);

// Matrix of an arbitrary F2-linear map between homogeneous pieces, built by
// evaluating `map` on each source basis monomial.
template <class Map>
F2Matrix linear_map_matrix(const Presentation& source, int source_degree, const Presentation& target,
                           int target_degree, Map&& map) {
  const auto& src = source.basis(source_degree);
  const std::size_t rows = target_degree < 0 ? 0 : target.dim(target_degree);
  F2Matrix m(rows, src.size());
  for (std::size_t c = 0; c < src.size(); ++c) {
    if (rows == 0) continue;
    m.set_column(c, target.coordinates(map(Poly(src[c])), target_degree));
  }
  return m;
}

}  // namespace charclass
