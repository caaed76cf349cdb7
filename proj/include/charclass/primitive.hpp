#pragma once

// Twist coproduct mu*: H*(BGO_n) -> H*(BGO_n) (x) H*(BGm), induced by
// (T, K) -> T (x) K, and the primitive classes mu*(a) = a (x) 1.

#include <string>
#include <vector>

#include "charclass/gralg.hpp"
#include "charclass/rings.hpp"

namespace charclass {

struct TwistStructure {
  RingId ring;
  PresentationPtr algebra;   // A
  PresentationPtr twisted;   // A (x) F2[cK]
  AlgebraMorphism mu;        // A -> A (x) F2[cK]
};

// Odd rank: BGO_n = BGm x BSO_n and twisting by K shifts the BGm factor, so
// c -> c + cK and every w_i is fixed.
TwistStructure builtin_mu_odd(int n, int cap = kDefaultDegreeCap);
TwistStructure twist_from_even(const EvenGODatum& datum);

// mu*(a) - a (x) 1, in normal form.
Poly primitive_residue(const TwistStructure& t, const Poly& alpha);
bool is_primitive(const TwistStructure& t, const Poly& alpha);

// Basis of PH^d: kernel of the matrix of mu* - p1* on the degree-d basis.
std::vector<Poly> primitive_basis(const TwistStructure& t, int d);

// Generators g for which cK -> 0 does not send mu*(g) back to g.
std::vector<std::string> counit_violations(const TwistStructure& t);

}  // namespace charclass
