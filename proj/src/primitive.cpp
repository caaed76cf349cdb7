#include "charclass/primitive.hpp"

namespace charclass {

namespace {

std::size_t twist_index(const Presentation& twisted) {
  return twisted.arity() - 1;
}

// A (x) F2[cK] -> A, cK -> 0.
AlgebraMorphism counit(const TwistStructure& t) {
  std::vector<Poly> images;
  for (std::size_t i = 0; i < t.algebra->arity(); ++i) images.push_back(t.algebra->generator(i));
  images.emplace_back();
  return AlgebraMorphism::unchecked(t.twisted, t.algebra, std::move(images));
}

}  // namespace

TwistStructure builtin_mu_odd(int n, int cap) {
  auto a = make_BGO_odd(n, cap);
  auto twisted = twisted_algebra(a);
  std::vector<Poly> images;
  const std::size_t k = twist_index(*twisted);
  for (std::size_t i = 0; i < a->arity(); ++i) {
    Poly img = embed_left(a->generator(i), 1);
    if (a->generators()[i].name == "c") img += twisted->generator(k);
    images.push_back(std::move(img));
  }
  AlgebraMorphism mu = AlgebraMorphism::create(a, twisted, std::move(images));
  return TwistStructure{RingId{RingFamily::BGO_odd, n}, std::move(a), std::move(twisted), std::move(mu)};
}

TwistStructure twist_from_even(const EvenGODatum& datum) {
  return TwistStructure{RingId{RingFamily::BGO_even, datum.n}, datum.presentation, datum.twisted, datum.mu};
}

Poly primitive_residue(const TwistStructure& t, const Poly& alpha) {
  if (!t.algebra->is_homogeneous(alpha)) throw ContractViolation("primitivity needs a homogeneous class");
  return t.twisted->normal_form(t.mu.apply(alpha) + embed_left(alpha, 1));
}

bool is_primitive(const TwistStructure& t, const Poly& alpha) { return primitive_residue(t, alpha).is_zero(); }

std::vector<Poly> primitive_basis(const TwistStructure& t, int d) {
  const F2Matrix m = linear_map_matrix(*t.algebra, d, *t.twisted, d, [&](const Poly& p) {
    return t.mu.apply(p) + embed_left(p, 1);
  });
  std::vector<Poly> out;
  for (const auto& v : kernel_basis(m)) out.push_back(t.algebra->from_coordinates(d, v));
  return out;
}

std::vector<std::string> counit_violations(const TwistStructure& t) {
  const AlgebraMorphism eps = counit(t);
  std::vector<std::string> bad;
  for (std::size_t i = 0; i < t.algebra->arity(); ++i) {
    const Generator& g = t.algebra->generators()[i];
    if (g.degree > t.twisted->degree_cap()) continue;
    if (eps.apply(t.mu.image(i)) != t.algebra->normal_form(t.algebra->generator(i))) bad.push_back(g.name);
  }
  return bad;
}

}  // namespace charclass
