#pragma once

// Gysin pairs (L, BG) with L the total space of the line bundle whose
// complement of the zero section is BO-like:
//
//   ... -> A^{i-2} --e--> A^i --res--> B^i --d--> A^{i-1} --e--> A^{i+1} -> ...
//
// A is the base ring, e the Euler class, B the complement ring. The boundary
// d is stored as a finite table d(t_k) and extended by the projection
// formula d(res(y) * t) = y * d(t). Values that the table cannot reach are
// reported as underdetermined, never as zero.

#include <algorithm>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "charclass/gralg.hpp"
#include "charclass/primitive.hpp"
#include "charclass/rings.hpp"

namespace charclass {

class UnderdeterminedBoundary : public std::runtime_error {
 public:
  UnderdeterminedBoundary(const std::string& what, int degree, std::vector<std::string> monomials)
      : std::runtime_error(what), degree_(degree), monomials_(std::move(monomials)) {}
  // Degree in the complement ring where the table runs out.
  int degree() const { return degree_; }
  const std::vector<std::string>& monomials() const { return monomials_; }

 private:
  int degree_;
  std::vector<std::string> monomials_;
};

struct GysinDatum {
  PresentationPtr base;
  Poly euler;
  PresentationPtr complement;
  AlgebraMorphism res;
  std::vector<DTableEntry> d_table;

  // Validates shapes: euler of degree 2 (or zero), res from base to
  // complement, table sources single monomials and values one degree lower.
  static GysinDatum create(PresentationPtr base, Poly euler, PresentationPtr complement, AlgebraMorphism res,
                           std::vector<DTableEntry> d_table);
  int cap() const { return std::min(base->degree_cap(), complement->degree_cap()); }
};

struct BoundaryResult {
  std::optional<Poly> value;
  std::vector<Monomial> unresolved;  // complement monomials outside the table's reach

  bool determined() const { return value.has_value(); }
};

BoundaryResult gysin_d(const GysinDatum& g, const Poly& x);

// Matrices of the three maps around degree i.
F2Matrix euler_matrix(const GysinDatum& g, int i);     // A^{i-2} -> A^i
F2Matrix boundary_matrix(const GysinDatum& g, int i);  // B^i -> A^{i-1}; throws UnderdeterminedBoundary

struct ExactnessFailure {
  int degree = 0;        // i of the segment A^{i-2} -> A^i -> B^i -> A^{i-1} -> A^{i+1}
  std::string node;      // which equality failed
  std::string witness;   // element on the wrong side of it
};

struct ExactnessReport {
  int cap = 0;
  std::vector<ExactnessFailure> failures;
  bool exact() const { return failures.empty(); }
};

// Checks at every i <= cap that ker(res) = im(e) on A^i, ker(d) = im(res) on
// B^i, ker(e) = im(d) on A^{i-1} (when A^{i+1} is within cap), and that the
// projection-formula extension of d is single valued. Throws
// UnderdeterminedBoundary if d is not determined somewhere in range.
ExactnessReport check_exactness(const GysinDatum& g, int cap);

// Splitting principle: Stiefel-Whitney (or Chern) classes of E (x) D from
// those of E (rank m = classes.size()) and t = w1(D) (or c1(D)):
//   w'_k = sum_j binom(m - j, k - j) w_j t^(k - j),  k = 1..m.
std::vector<Poly> tensor_by_line(const Presentation& algebra, const std::vector<Poly>& classes, const Poly& t);

// BO_n -> BO_{n-1}, w_n -> 0 (restriction along O_{n-1} = 1 (+) O_{n-1}).
AlgebraMorphism truncation(int n, int cap = kDefaultDegreeCap);
// Odd n: BGO_n -> BO_n. O_n -> Gm x SO_n sends g to (det g, det(g) g), so
// c -> w1^2 and w_i -> w_i(F (x) det F).
AlgebraMorphism odd_restriction(int n, int cap = kDefaultDegreeCap);

// B(v)*: H*(BGO_n) -> H*(BO_{n-1}) for v: O_{n-1} -> GO_n, g -> diag(1, g).
// Odd n: c -> w1^2, w_i -> w_i((1 (+) F) (x) D) with w1(D) = w1.
AlgebraMorphism bv_star_odd(int n, int cap = kDefaultDegreeCap);
// Even n: truncation composed with the datum's restriction map.
AlgebraMorphism bv_star_even(const EvenGODatum& datum);

// Pair (L_n, BGO_n) for odd n: Euler class c1(L) = 2c = 0.
GysinDatum odd_gysin_datum(int n, const std::vector<std::pair<std::string, std::string>>& d_table,
                           int cap = kDefaultDegreeCap);
// Pair file {"family":"BGO_odd","n":<odd>,"d_table":{...},"provenance":str}.
GysinDatum load_odd_pair(const std::filesystem::path& path, int cap = kDefaultDegreeCap);
GysinDatum parse_odd_pair(std::string_view json_text, int cap = kDefaultDegreeCap,
                          std::string_view origin = "<input>");
// Pair (L_n, BGO_n) for even n with Euler class lambda.
GysinDatum even_gysin_datum(const EvenGODatum& datum);

// delta = d_{n-1} o B(v)* on primitive classes of H*(BGO_n).
class DeltaMap {
 public:
  // Odd n >= 3; the target BGO_{n-1} comes from its even datum.
  static DeltaMap from_odd(int n, const EvenGODatum& target, int cap = kDefaultDegreeCap);
  // Even n >= 2; the target is the odd pair datum for n - 1.
  static DeltaMap from_even(const EvenGODatum& source, GysinDatum target);

  int rank() const { return rank_; }
  const TwistStructure& twist() const { return twist_; }
  const AlgebraMorphism& bv() const { return bv_; }
  const GysinDatum& target() const { return target_; }

  // Throws ContractViolation for a non-primitive or inhomogeneous alpha and
  // UnderdeterminedBoundary if the target table does not reach B(v)*(alpha).
  Poly operator()(const Poly& alpha) const;

 private:
  DeltaMap(int rank, TwistStructure twist, AlgebraMorphism bv, GysinDatum target);

  int rank_;
  TwistStructure twist_;
  AlgebraMorphism bv_;
  GysinDatum target_;
};

struct CommutationFailure {
  int degree = 0;
  std::string alpha;
  std::string lhs;
  std::string rhs;
};

// For odd n and every primitive basis element a of degree <= cap:
// (B(v)* (x) id)(mu*(a)) = B(v)*(a) (x) 1 in H*(BO_{n-1}) (x) H*(BGm).
std::vector<CommutationFailure> bv_commutation_check(int n, int cap);

// Developer tool: search for relations in a candidate presentation so that
// the Gysin sequence against a known complement becomes exact. Works degree
// by degree: relations forced by e * im(d) are always added, then subsets of
// a kernel basis of res are tried smallest first until the local exactness
// checks pass. The result is accepted only if check_exactness passes to cap.
struct CompletionProblem {
  std::vector<Generator> generators;
  std::string euler;
  PresentationPtr complement;
  std::vector<std::string> res;  // one expression per generator, in the complement
  std::vector<std::pair<std::string, std::string>> d_table;
  int cap = 12;
  std::size_t max_candidates_per_degree = 4096;
};

struct CompletionResult {
  bool found = false;
  PresentationPtr presentation;
  std::vector<Poly> relations;
  std::vector<std::string> log;
};

CompletionResult complete_presentation(const CompletionProblem& problem);

}  // namespace charclass
