#include "charclass/quadbundle.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "charclass/gysin.hpp"
#include "quad_support.hpp"

using namespace charclass;
using namespace charclass::testing;

namespace {

const Field kQ = Field::rationals();

TPoly tp(std::vector<long> c) {
  std::vector<Scalar> s;
  for (long x : c) s.emplace_back(x);
  return TPoly(std::move(s));
}

LocalTriple diag(const Field& k, std::vector<TPoly> entries) { return LocalTriple::diagonal(k, entries); }

// Leibniz expansion over all permutations.
TPoly leibniz_det(const Field& k, const TMatrix& b) {
  const std::size_t n = b.size();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  TPoly det;
  do {
    int inversions = 0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) inversions += perm[i] > perm[j] ? 1 : 0;
    }
    TPoly term = TPoly::constant(1);
    for (std::size_t i = 0; i < n; ++i) term = poly_mul(k, term, b[i][perm[i]]);
    det = inversions % 2 == 0 ? poly_add(k, det, term) : poly_sub(k, det, term);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return det;
}

std::vector<std::string> diag_strings(const ReducedTriple& r) {
  std::vector<std::string> out;
  for (const auto& d : r.diagonal) out.push_back(d.get_str());
  return out;
}

// Brute force over GL_2(F_3) and F_3^*: is g q1 g^T = u q2 for some g, u?
bool brute_equivalent_f3(const KMatrix& q1, const KMatrix& q2) {
  const Field k = Field::prime(3);
  for (int code = 0; code < 81; ++code) {
    const int a = code % 3, b = code / 3 % 3, c = code / 9 % 3, d = code / 27;
    if ((a * d - b * c) % 3 == 0) continue;
    const Scalar g[2][2] = {{a, b}, {c, d}};
    for (int u : {1, 2}) {
      bool ok = true;
      for (int i = 0; i < 2 && ok; ++i) {
        for (int j = 0; j < 2 && ok; ++j) {
          Scalar s(0);
          for (int l = 0; l < 2; ++l) {
            for (int m = 0; m < 2; ++m) s += g[i][l] * q1[l][m] * g[j][m];
          }
          ok = k.from(s) == k.from(u * q2[i][j]);
        }
      }
      if (ok) return true;
    }
  }
  return false;
}

}  // namespace

TEST(Quad, FieldBasics) {
  EXPECT_THROW(Field::prime(2), ContractViolation);
  EXPECT_THROW(Field::prime(9), ContractViolation);
  const Field f7 = Field::prime(7);
  EXPECT_EQ(f7.inv(Scalar(3)), Scalar(5));
  EXPECT_EQ(f7.from(Scalar(1, 2)), Scalar(4));
  EXPECT_TRUE(f7.is_square(Scalar(2)));
  EXPECT_FALSE(f7.is_square(Scalar(3)));
  EXPECT_EQ(f7.non_square(), Scalar(3));
  EXPECT_EQ(Field::prime(5).non_square(), Scalar(2));
  EXPECT_TRUE(kQ.is_square(Scalar(9, 4)));
  EXPECT_FALSE(kQ.is_square(Scalar(-1)));
  EXPECT_THROW(f7.from(Scalar(1, 7)), ContractViolation);
}

TEST(Quad, PolynomialArithmetic) {
  const Field f5 = Field::prime(5);
  EXPECT_EQ(poly_mul(kQ, tp({1, 1}), tp({-1, 1})), tp({-1, 0, 1}));
  EXPECT_EQ(poly_exact_div(kQ, tp({-1, 0, 1}), tp({1, 1})), tp({-1, 1}));
  EXPECT_THROW(poly_exact_div(kQ, tp({1, 0, 1}), tp({1, 1})), ContractViolation);
  EXPECT_EQ(poly_mul(f5, tp({2}), tp({3})), tp({1}));
  EXPECT_EQ(poly_substitute(kQ, tp({0, 1}), tp({1, 1}), 2), tp({0, 0, 1, 1}));
  EXPECT_EQ(tp({0, 3, 0, -1}).valuation(), 1);
  EXPECT_EQ(tp({0, 3, 0, -1}).to_string(), "-t^3 + 3*t");
  EXPECT_THROW(TPoly().valuation(), ContractViolation);
}

TEST(Quad, TripleValidation) {
  EXPECT_THROW(LocalTriple::create(kQ, {{tp({1}), tp({0, 1})}, {tp({1}), tp({1})}}), ContractViolation);
  EXPECT_THROW(LocalTriple::create(kQ, {{tp({1}), tp({1})}}), ContractViolation);
  EXPECT_NO_THROW(LocalTriple::create(kQ, {}));
}

TEST(Quad, RankProfileExamples) {
  auto profile = [](const LocalTriple& t) {
    const RankProfile r = rank_profile(t);
    return std::make_pair(r.generic_rank, r.special_rank);
  };
  EXPECT_EQ(profile(diag(kQ, {tp({0, 1}), tp({1}), tp({1})})), std::make_pair(3, 2));
  EXPECT_EQ(profile(diag(kQ, {tp({0, 1}), tp({0, 1}), tp({1})})), std::make_pair(3, 1));
  EXPECT_EQ(profile(LocalTriple::create(kQ, {{tp({0, 1}), tp({1})}, {tp({1}), tp({1})}})), std::make_pair(2, 2));
  EXPECT_EQ(profile(LocalTriple::create(kQ, {{tp({0, 1}), tp({0, 1})}, {tp({0, 1}), tp({0, 1})}})),
            std::make_pair(1, 0));
}

TEST(Quad, DiscriminantExamples) {
  EXPECT_EQ(discriminant(diag(kQ, {tp({0, 1}), tp({1}), tp({1}), tp({1})})), tp({0, 1}));
  EXPECT_EQ(discriminant(diag(kQ, {tp({0, 0, 1}), tp({1})})), tp({0, 0, 1}));
  EXPECT_EQ(discriminant(LocalTriple::create(kQ, {{tp({0}), tp({0, 1})}, {tp({0, 1}), tp({1})}})), tp({0, 0, -1}));
  EXPECT_EQ(discriminant(LocalTriple::create(kQ, {{tp({0, 1}), tp({1})}, {tp({1}), tp({1})}})), tp({-1, 1}));
}

TEST(Quad, DiscriminantMatchesLeibniz) {
  for (const Field& k : {kQ, Field::prime(5), Field::prime(7)}) {
    for (int trial = 0; trial < 40; ++trial) {
      const int n = uniform(1, 4);
      TMatrix b(static_cast<std::size_t>(n), std::vector<TPoly>(static_cast<std::size_t>(n)));
      for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
          // sparse-ish so that singular and low-rank cases occur
          b[i][j] = b[j][i] = coin() ? random_tpoly(k, 2) : TPoly();
        }
      }
      const LocalTriple t = LocalTriple::create(k, b);
      const TPoly det = leibniz_det(k, t.b());
      EXPECT_EQ(discriminant(t), det);
      EXPECT_EQ(rank_profile(t).generic_rank == n, !det.is_zero());
    }
  }
}

TEST(Quad, MultiplicityExamples) {
  EXPECT_EQ(multiplicity(diag(kQ, {tp({0, 1}), tp({1}), tp({1})})), 1);
  EXPECT_EQ(multiplicity(diag(kQ, {tp({0, 0, 1}), tp({1})})), 2);
  EXPECT_EQ(multiplicity(diag(kQ, {tp({1}), tp({1})})), 0);
  EXPECT_THROW(multiplicity(diag(kQ, {tp({0}), tp({1})})), ContractViolation);
}

TEST(Quad, MultiplicityIsCongruenceAndTwistInvariant) {
  for (const Field& k : {kQ, Field::prime(5)}) {
    for (int trial = 0; trial < 40; ++trial) {
      const int n = uniform(1, 4);
      const int nu = uniform(1, 3);
      const LocalTriple t = random_mild(k, n, nu);
      EXPECT_EQ(multiplicity(t), nu);
      EXPECT_EQ(multiplicity(congruence(t, random_unimodular(k, n, 2))), nu);
      EXPECT_EQ(multiplicity(twist_by_unit(t, random_unit(k, 2))), nu);
    }
  }
}

TEST(Quad, MildDegeneration) {
  EXPECT_TRUE(is_mildly_degenerating(diag(kQ, {tp({0, 1}), tp({1}), tp({1})})).ok);
  const Diagnosis two = is_mildly_degenerating(diag(kQ, {tp({0, 1}), tp({0, 1}), tp({1})}));
  EXPECT_FALSE(two.ok);
  EXPECT_NE(two.reason.find("n-2"), std::string::npos) << two.reason;
  EXPECT_FALSE(is_mildly_degenerating(diag(kQ, {tp({1}), tp({1})})).ok);
  EXPECT_FALSE(is_mildly_degenerating(diag(kQ, {tp({0}), tp({1})})).ok);
}

TEST(Quad, ReducedTripleExamples) {
  const ReducedTriple id = reduced_triple(diag(kQ, {tp({0, 1}), tp({1}), tp({1})}));
  EXPECT_EQ(id.m, 2);
  EXPECT_EQ(diag_strings(id), (std::vector<std::string>{"1", "1"}));

  const ReducedTriple d = reduced_triple(diag(kQ, {tp({0, 1}), tp({3}), tp({-2})}));
  EXPECT_EQ(diag_strings(d), (std::vector<std::string>{"-2", "3"}));
  EXPECT_EQ(d.positive, 1);
  EXPECT_EQ(d.negative, 1);

  // kernel of b(0) is spanned by e1 - e3; on the quotient b(0) is the identity
  const LocalTriple t = LocalTriple::create(
      kQ, {{tp({1}), tp({0}), tp({1})}, {tp({0}), tp({1}), tp({0})}, {tp({1}), tp({0}), tp({1, 1})}});
  EXPECT_EQ(multiplicity(t), 1);
  const ReducedTriple r = reduced_triple(t);
  EXPECT_EQ(compare(r, reduce_form(kQ, {{1, 0}, {0, 1}})), Equivalence::Equivalent);

  EXPECT_THROW(reduced_triple(diag(kQ, {tp({0, 1}), tp({0, 1}), tp({1})})), ContractViolation);

  // with t in the corner instead, b(0) has det -1 and nothing degenerates
  const LocalTriple corner = LocalTriple::create(
      kQ, {{tp({0, 1}), tp({0}), tp({1})}, {tp({0}), tp({1}), tp({0})}, {tp({1}), tp({0}), tp({1})}});
  EXPECT_EQ(rank_profile(corner).special_rank, 3);
  EXPECT_THROW(reduced_triple(corner), ContractViolation);
}

TEST(Quad, ReduceFormOverFp) {
  const Field f5 = Field::prime(5);
  const ReducedTriple a = reduce_form(f5, {{0, 1}, {1, 0}});  // hyperbolic plane, disc -1 = 4 square
  EXPECT_EQ(diag_strings(a), (std::vector<std::string>{"1", "1"}));
  const ReducedTriple b = reduce_form(f5, {{1, 0}, {0, 2}});
  EXPECT_EQ(diag_strings(b), (std::vector<std::string>{"1", "2"}));
  EXPECT_EQ(compare(a, b), Equivalence::Inequivalent);
  EXPECT_THROW(reduce_form(f5, {{1, 2}, {2, 4}}), ContractViolation);
}

TEST(Quad, CompareMatchesBruteForceOverF3) {
  const Field f3 = Field::prime(3);
  std::vector<KMatrix> forms;
  for (int code = 0; code < 27; ++code) {
    const KMatrix q{{code % 3, code / 3 % 3}, {code / 3 % 3, code / 9}};
    try {
      reduce_form(f3, q);
      forms.push_back(q);
    } catch (const ContractViolation&) {
    }
  }
  ASSERT_FALSE(forms.empty());
  for (const auto& q1 : forms) {
    for (const auto& q2 : forms) {
      const bool expected = brute_equivalent_f3(q1, q2);
      EXPECT_EQ(compare(reduce_form(f3, q1), reduce_form(f3, q2)),
                expected ? Equivalence::Equivalent : Equivalence::Inequivalent);
    }
  }
}

TEST(Quad, CompareOverRationals) {
  auto r = [](KMatrix q) { return reduce_form(kQ, q); };
  EXPECT_EQ(compare(r({{1, 0}, {0, 1}}), r({{1, 0}, {0, -1}})), Equivalence::Inequivalent);
  EXPECT_EQ(compare(r({{1, 0}, {0, 2}}), r({{2, 0}, {0, 1}})), Equivalence::Equivalent);
  EXPECT_EQ(compare(r({{1, 0}, {0, 1}}), r({{1, 0}, {0, 2}})), Equivalence::Inequivalent);
  EXPECT_EQ(compare(r({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}), r({{-1, 0, 0}, {0, -1, 0}, {0, 0, -1}})),
            Equivalence::Equivalent);
  EXPECT_EQ(compare(r({{1, 0}, {0, 1}}), r({{3, 0}, {0, 3}})), Equivalence::Undecided);
  EXPECT_EQ(compare(r({{5}}), r({{-7}})), Equivalence::Equivalent);
}

TEST(Quad, TwistExamples) {
  const LocalTriple t = diag(kQ, {tp({0, 1}), tp({1})});
  EXPECT_EQ(twist_by_unit(t, tp({1})), t);
  EXPECT_EQ(multiplicity(twist_by_unit(t, tp({1, 1}))), 1);
  EXPECT_THROW(twist_by_unit(t, tp({0, 1})), ContractViolation);

  const Field f5 = Field::prime(5);
  const LocalTriple s = diag(f5, {tp({0, 1}), tp({1})});
  const ReducedTriple before = reduced_triple(s);
  const ReducedTriple after = reduced_triple(twist_by_unit(s, tp({2})));
  EXPECT_EQ(diag_strings(before), (std::vector<std::string>{"1"}));
  EXPECT_EQ(diag_strings(after), (std::vector<std::string>{"2"}));
  EXPECT_EQ(compare(before, after), Equivalence::Equivalent);
}

TEST(Quad, OrthogonalSum) {
  const LocalTriple t = diag(kQ, {tp({0, 1}), tp({1})});
  EXPECT_EQ(orthogonal_sum(t, LocalTriple::create(kQ, {})), t);
  EXPECT_EQ(orthogonal_sum(diag(kQ, {tp({0, 1})}), diag(kQ, {tp({1}), tp({1})})),
            diag(kQ, {tp({0, 1}), tp({1}), tp({1})}));
  EXPECT_THROW(orthogonal_sum(t, diag(Field::prime(5), {tp({1})})), ContractViolation);
  for (int trial = 0; trial < 30; ++trial) {
    const Field& k = trial % 2 == 0 ? kQ : Field::prime(7);
    const int nu1 = uniform(1, 3), nu2 = uniform(1, 3);
    const LocalTriple a = random_mild(k, uniform(1, 3), nu1);
    const LocalTriple b = random_mild(k, uniform(1, 3), nu2);
    const LocalTriple s = orthogonal_sum(a, b);
    EXPECT_EQ(multiplicity(s), nu1 + nu2);
    EXPECT_EQ(discriminant(s), poly_mul(k, discriminant(a), discriminant(b)));
  }
}

TEST(Quad, ModelTriple) {
  EXPECT_EQ(model_triple(kQ, {{1, 0}, {0, 1}}), diag(kQ, {tp({0, 1}), tp({1}), tp({1})}));
  EXPECT_THROW(model_triple(kQ, {{1, 1}, {1, 1}}), ContractViolation);
  const Field f7 = Field::prime(7);
  for (int trial = 0; trial < 50; ++trial) {
    const KMatrix q = random_nondegenerate(f7, uniform(1, 4));
    const LocalTriple t = model_triple(f7, q);
    EXPECT_EQ(multiplicity(t), 1);
    EXPECT_EQ(compare(reduced_triple(t), reduce_form(f7, q)), Equivalence::Equivalent);
  }
}

TEST(Quad, BaseChange) {
  const LocalTriple t = diag(kQ, {tp({0, 1}), tp({1})});
  EXPECT_EQ(base_change(t, 1, tp({1})), t);
  EXPECT_EQ(multiplicity(base_change(t, 3, tp({1}))), 3);
  EXPECT_THROW(base_change(t, 0, tp({1})), ContractViolation);
  EXPECT_THROW(base_change(t, 2, tp({0, 1})), ContractViolation);
  const Field f5 = Field::prime(5);
  for (int trial = 0; trial < 30; ++trial) {
    const int nu = uniform(1, 3);
    const LocalTriple m = random_mild(f5, uniform(1, 4), nu);
    EXPECT_EQ(multiplicity(base_change(m, 2, tp({1, 1}))), 2 * nu);
  }
}

TEST(Quad, ReducedTripleIsWellDefined) {
  const Field f7 = Field::prime(7);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = uniform(1, 4);
    const LocalTriple t = random_mild(f7, n, uniform(1, 3));
    const ReducedTriple r = reduced_triple(t);
    EXPECT_EQ(r.m, n - 1);
    const LocalTriple moved = twist_by_unit(congruence(t, random_unimodular(f7, n, 2)), random_unit(f7, 2));
    EXPECT_EQ(compare(r, reduced_triple(moved)), Equivalence::Equivalent);
  }
}

TEST(Quad, JsonRoundTrip) {
  const LocalTriple t = parse_triple_json(R"({"field":"Fp","p":5,"n":2,"entries":[[[0,1],[2]],[[2],["1/2",3]]]})");
  EXPECT_EQ(t.field(), Field::prime(5));
  EXPECT_EQ(t.entry(1, 1), tp({3, 3}));
  EXPECT_EQ(parse_triple_json(triple_to_json(t)), t);

  const LocalTriple q = parse_triple_json(R"({"field":"Q","entries":[[["1/2",0,1]]]})");
  EXPECT_EQ(q.entry(0, 0).coeff(0), Scalar(1, 2));
  EXPECT_EQ(parse_triple_json(triple_to_json(q)), q);

  EXPECT_THROW(parse_triple_json(R"({"field":"R","entries":[]})"), ParseError);
  EXPECT_THROW(parse_triple_json(R"({"field":"Fp","entries":[]})"), ParseError);
  EXPECT_THROW(parse_triple_json(R"({"field":"Q","n":2,"entries":[[[1]]]})"), ParseError);
  EXPECT_THROW(parse_triple_json(R"({"field":"Q","entries":[[["x"]]]})"), ParseError);
  EXPECT_THROW(parse_triple_json(R"({"field":"Q","entries":[[["1/0"]]]})"), ParseError);
  EXPECT_THROW(parse_triple_json(R"({"field":"Q","entries":[[[1],[0]],[[1],[1]]]})"), ContractViolation);
}

TEST(Quad, DegenerationBoundary) {
  const DeltaMap delta =
      DeltaMap::from_odd(3, load_even_presentation(std::string(CHARCLASS_DATA_DIR) + "/bgo2.json"));
  const Presentation& a = *delta.twist().algebra;
  const Presentation& target = *delta.target().base;
  const Field f5 = Field::prime(5);

  const BoundaryOutcome model = degeneration_boundary(delta, a.parse("w2"), model_triple(f5, {{1, 0}, {0, 1}}));
  EXPECT_EQ(model.nu, 1);
  EXPECT_EQ(model.parity, 1);
  EXPECT_EQ(target.format(model.delta), "a1");
  EXPECT_EQ(model.evaluated, model.delta);
  EXPECT_EQ(model.reduced.m, 2);

  const BoundaryOutcome even = degeneration_boundary(delta, a.parse("w3"), diag(f5, {tp({0, 0, 1}), tp({1}), tp({1})}));
  EXPECT_EQ(even.nu, 2);
  EXPECT_EQ(even.parity, 0);
  EXPECT_EQ(target.format(even.delta), "a1^2");
  EXPECT_TRUE(even.evaluated.is_zero());

  const BoundaryOutcome unit = degeneration_boundary(delta, a.one(), model_triple(f5, {{1, 0}, {0, 1}}));
  EXPECT_TRUE(unit.delta.is_zero());

  EXPECT_THROW(degeneration_boundary(delta, a.parse("c"), model_triple(f5, {{1, 0}, {0, 1}})), ContractViolation);
  EXPECT_THROW(degeneration_boundary(delta, a.parse("w2"), model_triple(f5, {{1}})), ContractViolation);
  EXPECT_THROW(degeneration_boundary(delta, a.parse("w2"), diag(f5, {tp({0, 1}), tp({0, 1}), tp({1})})),
               ContractViolation);
}
