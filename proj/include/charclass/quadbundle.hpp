#pragma once

// Quadratic triples on the local model of a regular pair: X the local scheme
// of k[t] at t = 0, Y = V(t). Bundles are trivialized, so a triple is a
// symmetric n x n matrix b over k[t], and equivalence is congruence by
// matrices invertible at t = 0 together with scaling by units.
//
// The coefficient field is Q or F_p with p an odd prime. Scalars are GMP
// rationals; over F_p they are kept as integers in [0, p).

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "charclass/errors.hpp"
#include "charclass/gralg.hpp"

namespace charclass {

class DeltaMap;

using Scalar = mpq_class;

class Field {
 public:
  enum class Kind { Rationals, Prime };

  static Field rationals() { return Field(Kind::Rationals, 0); }
  // Throws ContractViolation unless p is an odd prime.
  static Field prime(long p);

  Kind kind() const { return kind_; }
  long characteristic() const { return p_; }
  bool operator==(const Field&) const = default;
  std::string to_string() const;

  Scalar from(const Scalar& x) const;  // reduce into the field
  Scalar add(const Scalar& a, const Scalar& b) const { return from(a + b); }
  Scalar sub(const Scalar& a, const Scalar& b) const { return from(a - b); }
  Scalar mul(const Scalar& a, const Scalar& b) const { return from(a * b); }
  Scalar neg(const Scalar& a) const { return from(-a); }
  Scalar inv(const Scalar& a) const;
  Scalar div(const Scalar& a, const Scalar& b) const { return mul(a, inv(b)); }
  bool is_square(const Scalar& a) const;
  // Smallest non-square of F_p.
  Scalar non_square() const;

 private:
  Field(Kind kind, long p) : kind_(kind), p_(p) {}

  Kind kind_;
  long p_;
};

// Polynomial in t, constant term first, no trailing zeros.
class TPoly {
 public:
  TPoly() = default;
  explicit TPoly(std::vector<Scalar> coeffs);
  static TPoly constant(const Scalar& c) { return TPoly({c}); }
  static TPoly monomial(const Scalar& c, int degree);

  bool is_zero() const { return c_.empty(); }
  int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
  const std::vector<Scalar>& coeffs() const { return c_; }
  Scalar coeff(int i) const;
  Scalar at_zero() const { return coeff(0); }
  // t-adic valuation; ContractViolation for the zero polynomial.
  int valuation() const;
  bool operator==(const TPoly&) const = default;
  std::string to_string(std::string_view var = "t") const;

 private:
  std::vector<Scalar> c_;
};

TPoly poly_add(const Field& k, const TPoly& a, const TPoly& b);
TPoly poly_sub(const Field& k, const TPoly& a, const TPoly& b);
TPoly poly_mul(const Field& k, const TPoly& a, const TPoly& b);
// Exact division; ContractViolation if b does not divide a.
TPoly poly_exact_div(const Field& k, const TPoly& a, const TPoly& b);
// a(u(s) * s^m)
TPoly poly_substitute(const Field& k, const TPoly& a, const TPoly& u, int m);

using TMatrix = std::vector<std::vector<TPoly>>;
using KMatrix = std::vector<std::vector<Scalar>>;

class LocalTriple {
 public:
  // Checks squareness and symmetry and reduces coefficients into the field.
  // The zero-dimensional triple and forms vanishing at t = 0 (such as the
  // summand (t) of the model triple) are allowed.
  static LocalTriple create(Field field, TMatrix b);
  static LocalTriple diagonal(Field field, const std::vector<TPoly>& entries);

  const Field& field() const { return field_; }
  int n() const { return static_cast<int>(b_.size()); }
  const TMatrix& b() const { return b_; }
  const TPoly& entry(int i, int j) const { return b_[i][j]; }
  KMatrix special_fiber() const;
  bool operator==(const LocalTriple&) const = default;

 private:
  LocalTriple(Field field, TMatrix b) : field_(field), b_(std::move(b)) {}

  Field field_;
  TMatrix b_;
};

// {"field":"Q"|"Fp","p":int,"n":int,"entries":[[[c0,c1,...],...],...]};
// coefficients are integers or strings "a/b".
LocalTriple parse_triple_json(std::string_view text);
std::string triple_to_json(const LocalTriple& t);

struct RankProfile {
  int generic_rank = 0;
  int special_rank = 0;
};

RankProfile rank_profile(const LocalTriple& t);
TPoly discriminant(const LocalTriple& t);
// t-adic valuation of the discriminant; ContractViolation if it vanishes.
int multiplicity(const LocalTriple& t);

struct Diagnosis {
  bool ok = false;
  std::string reason;
};
// Nondegenerate generically and of rank n - 1 on the special fiber.
Diagnosis is_mildly_degenerating(const LocalTriple& t);

// Special-fiber form on E / ker(b(0)), diagonalized and normalized.
//   F_p: diag(1, ..., 1, delta) with delta 1 or the least non-square.
//   Q:   diagonal entries made squarefree integers and sorted.
// disc is the product of the diagonal.
struct ReducedTriple {
  Field field = Field::rationals();
  int m = 0;
  std::vector<Scalar> diagonal;
  Scalar disc;
  int positive = 0;  // signature over Q; unused over F_p
  int negative = 0;
};

ReducedTriple reduced_triple(const LocalTriple& t);
// Any nondegenerate symmetric form over k, same normalization.
ReducedTriple reduce_form(const Field& field, const KMatrix& q);

// Equivalence up to congruence and unit scaling. Over F_p this is decided by
// rank and discriminant class; over Q only invariants are compared (rank,
// discriminant class, signature), so agreeing invariants give Undecided
// unless the normal forms coincide after scaling by +-1 or the discriminant
// ratio.
enum class Equivalence { Equivalent, Inequivalent, Undecided };
Equivalence compare(const ReducedTriple& a, const ReducedTriple& b);
std::string to_string(Equivalence e);

LocalTriple twist_by_unit(const LocalTriple& t, const TPoly& u);
LocalTriple orthogonal_sum(const LocalTriple& a, const LocalTriple& b);
LocalTriple congruence(const LocalTriple& t, const TMatrix& g);  // g b g^T
// diag(t) (+) q for a nondegenerate symmetric q over k.
LocalTriple model_triple(const Field& field, const KMatrix& q);
// t -> u(s) s^m, m >= 1, u(0) != 0.
LocalTriple base_change(const LocalTriple& t, int m, const TPoly& u);

struct BoundaryOutcome {
  int nu = 0;
  int parity = 0;
  Poly delta;      // delta(alpha) in H*(BGO_{n-1})
  Poly evaluated;  // parity * delta(alpha)
  ReducedTriple reduced;
};

// Right-hand side nu * delta(alpha)(T^Q) of the degeneration formula, with
// F2 coefficients. T must be mildly degenerating of dimension delta.rank().
BoundaryOutcome degeneration_boundary(const DeltaMap& delta, const Poly& alpha, const LocalTriple& t);

}  // namespace charclass
