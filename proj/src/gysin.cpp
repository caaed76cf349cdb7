#include "charclass/gysin.hpp"

#include <bit>

#include <json.hpp>

namespace charclass {

namespace {

using nlohmann::json;

// Spanning set {res(y) * t} of B^i with the matching values {y * d(t)} in
// A^{i-1}. The unit is always a table source: d(1) lies in degree -1.
struct BoundarySlice {
  F2Matrix span;    // B^i x k
  F2Matrix values;  // A^{i-1} x k
  std::vector<std::string> labels;  // "y*[t]" per column, for witnesses
};

BoundarySlice boundary_slice(const GysinDatum& g, int i) {
  const Presentation& a = *g.base;
  const Presentation& b = *g.complement;
  std::vector<F2Vector> span_cols;
  std::vector<F2Vector> value_cols;
  std::vector<std::string> labels;
  const std::size_t rows_b = b.dim(i);
  const std::size_t rows_a = i >= 1 ? a.dim(i - 1) : 0;

  std::vector<DTableEntry> table = g.d_table;
  bool has_unit = false;
  for (const auto& e : table) has_unit = has_unit || e.source == b.one();
  if (!has_unit) table.push_back({b.one(), Poly{}});

  for (const auto& e : table) {
    const int j = b.degree(e.source.terms().front());
    if (j > i) continue;
    for (const auto& y : a.basis(i - j)) {
      const Poly yp(y);
      span_cols.push_back(b.coordinates(b.multiply(g.res.apply(yp), e.source), i));
      if (rows_a > 0) {
        value_cols.push_back(a.coordinates(e.value.is_zero() ? Poly{} : a.multiply(yp, e.value), i - 1));
      } else {
        value_cols.emplace_back(0);
      }
      labels.push_back(a.format(yp) + "*[" + b.format(e.source) + "]");
    }
  }
  return {F2Matrix::from_columns(rows_b, span_cols), F2Matrix::from_columns(rows_a, value_cols), std::move(labels)};
}

std::string format_vector(const Presentation& p, int d, const F2Vector& v) {
  return p.format(p.from_coordinates(d, v));
}

// Some vector of ker(m) outside the column space of `image`; nullopt if
// ker(m) is contained in it.
std::optional<F2Vector> kernel_outside(const F2Matrix& m, const F2Matrix& image) {
  const F2Echelon im = echelon(transpose(image));
  for (const auto& v : kernel_basis(m)) {
    if (!im.in_row_space(v)) return v;
  }
  return std::nullopt;
}

// Some column of `image` not killed by m.
std::optional<F2Vector> image_not_killed(const F2Matrix& m, const F2Matrix& image) {
  for (std::size_t c = 0; c < image.cols(); ++c) {
    const F2Vector col = image.column(c);
    if (!multiply(m, col).is_zero()) return col;
  }
  return std::nullopt;
}

void check_node(ExactnessReport& report, int degree, const std::string& node, const Presentation& space, int d,
                const F2Matrix& out_map, const F2Matrix& in_map) {
  if (auto w = image_not_killed(out_map, in_map)) {
    report.failures.push_back({degree, node + ": image not in kernel", format_vector(space, d, *w)});
  } else if (auto v = kernel_outside(out_map, in_map)) {
    report.failures.push_back({degree, node + ": kernel larger than image", format_vector(space, d, *v)});
  }
}

unsigned binom_mod2(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  return (k & ~n) == 0 ? 1U : 0U;
}

std::vector<DTableEntry> parse_table(const std::vector<std::pair<std::string, std::string>>& pairs,
                                     const Presentation& base, const Presentation& complement) {
  std::vector<DTableEntry> table;
  for (const auto& [src, val] : pairs) table.push_back({complement.parse(src), base.parse(val)});
  return table;
}

AlgebraMorphism retarget(const AlgebraMorphism& f, const PresentationPtr& target) {
  if (f.target()->generators() != target->generators()) {
    throw ContractViolation("B(v)* lands in a ring with different generators than the target pair");
  }
  return AlgebraMorphism::unchecked(f.source(), target, f.images());
}

}  // namespace

GysinDatum GysinDatum::create(PresentationPtr base, Poly euler, PresentationPtr complement, AlgebraMorphism res,
                              std::vector<DTableEntry> d_table) {
  if (res.source()->generators() != base->generators() || res.target()->generators() != complement->generators()) {
    throw ContractViolation("res must map the base ring to the complement ring");
  }
  const auto ed = base->degree_of(euler);
  if (ed && *ed != 2) throw ContractViolation("Euler class must have degree 2");
  euler = base->normal_form(euler);
  for (auto& e : d_table) {
    if (e.source.size() != 1) throw ContractViolation("d-table sources must be single monomials");
    const int j = complement->degree(e.source.terms().front());
    const auto vd = base->degree_of(e.value);
    if (vd && *vd != j - 1) {
      throw ContractViolation("d(" + complement->format(e.source) + ") must have degree " + std::to_string(j - 1));
    }
    if (vd && *vd <= base->degree_cap()) e.value = base->normal_form(e.value);
  }
  return GysinDatum{std::move(base), std::move(euler), std::move(complement), std::move(res), std::move(d_table)};
}

BoundaryResult gysin_d(const GysinDatum& g, const Poly& x) {
  const Presentation& b = *g.complement;
  if (x.is_zero()) return {Poly{}, {}};
  const int i = *b.degree_of(x);
  if (i > g.cap()) throw CapExceeded(i, g.cap());
  const BoundarySlice s = boundary_slice(g, i);
  const auto z = solve(s.span, b.coordinates(x, i));
  if (!z) {
    BoundaryResult r;
    const F2Echelon reach = echelon(transpose(s.span));
    const auto& basis = b.basis(i);
    for (std::size_t k : b.coordinates(x, i).support()) {
      if (!reach.in_row_space(F2Vector::unit(basis.size(), k))) r.unresolved.push_back(basis[k]);
    }
    return r;
  }
  if (i == 0) return {Poly{}, {}};
  return {g.base->from_coordinates(i - 1, multiply(s.values, *z)), {}};
}

F2Matrix euler_matrix(const GysinDatum& g, int i) {
  const Presentation& a = *g.base;
  if (i - 2 < 0) return F2Matrix(i >= 0 ? a.dim(i) : 0, 0);
  return linear_map_matrix(a, i - 2, a, i, [&](const Poly& p) { return a.multiply(p, g.euler); });
}

F2Matrix boundary_matrix(const GysinDatum& g, int i) {
  const Presentation& a = *g.base;
  const Presentation& b = *g.complement;
  const std::size_t rows = i >= 1 ? a.dim(i - 1) : 0;
  const auto& basis = b.basis(i);
  const BoundarySlice s = boundary_slice(g, i);
  std::vector<F2Vector> rhs;
  for (std::size_t k = 0; k < basis.size(); ++k) rhs.push_back(F2Vector::unit(basis.size(), k));
  const auto sols = solve_columns(s.span, rhs);
  F2Matrix m(rows, basis.size());
  std::vector<std::string> missing;
  for (std::size_t k = 0; k < basis.size(); ++k) {
    if (!sols[k]) {
      missing.push_back(b.format(basis[k]));
      continue;
    }
    if (rows > 0) m.set_column(k, multiply(s.values, *sols[k]));
  }
  if (!missing.empty()) {
    std::string list;
    for (const auto& mono : missing) list += (list.empty() ? "" : ", ") + mono;
    const std::string what = "d is not determined by the table in degree " + std::to_string(i) + ": " + list;
    throw UnderdeterminedBoundary(what, i, std::move(missing));
  }
  return m;
}

ExactnessReport check_exactness(const GysinDatum& g, int cap) {
  if (cap > g.cap()) throw CapExceeded(cap, g.cap());
  const Presentation& a = *g.base;
  const Presentation& b = *g.complement;
  ExactnessReport report;
  report.cap = cap;
  for (int i = 0; i <= cap; ++i) {
    const F2Matrix e_in = euler_matrix(g, i);
    const F2Matrix r = g.res.matrix(i);
    const F2Matrix d = boundary_matrix(g, i);
    const std::string at = " in degree " + std::to_string(i);

    // d must not depend on how an element is written in the spanning set.
    const BoundarySlice s = boundary_slice(g, i);
    for (const auto& z : kernel_basis(s.span)) {
      if (!multiply(s.values, z).is_zero()) {
        std::string combo;
        for (std::size_t c : z.support()) combo += (combo.empty() ? "" : " + ") + s.labels[c];
        report.failures.push_back({i, "d single-valued" + at + ": relation in B with nonzero d", combo});
        break;
      }
    }

    check_node(report, i, "ker(res) = im(e) on A" + at, a, i, r, e_in);
    check_node(report, i, "ker(d) = im(res) on B" + at, b, i, d, r);
    if (i >= 1 && i + 1 <= cap) {
      const F2Matrix e_out = euler_matrix(g, i + 1);
      check_node(report, i, "ker(e) = im(d) on A" + std::string(" in degree ") + std::to_string(i - 1), a, i - 1,
                 e_out, d);
    }
  }
  return report;
}

std::vector<Poly> tensor_by_line(const Presentation& algebra, const std::vector<Poly>& classes, const Poly& t) {
  const int m = static_cast<int>(classes.size());
  std::vector<Poly> out;
  for (int k = 1; k <= m; ++k) {
    Poly wk;
    for (int j = 0; j <= k; ++j) {
      if (binom_mod2(m - j, k - j) == 0) continue;
      const Poly wj = j == 0 ? algebra.one() : classes[static_cast<std::size_t>(j - 1)];
      wk += algebra.multiply(wj, algebra.power(t, static_cast<unsigned>(k - j)));
    }
    out.push_back(algebra.normal_form(wk));
  }
  return out;
}

AlgebraMorphism truncation(int n, int cap) {
  if (n < 2) throw ContractViolation("truncation BO_n -> BO_{n-1} needs n >= 2");
  auto src = make_BO(n, cap);
  auto dst = make_BO(n - 1, cap);
  std::vector<Poly> images;
  for (int i = 0; i < n - 1; ++i) images.push_back(dst->generator(static_cast<std::size_t>(i)));
  images.emplace_back();
  return AlgebraMorphism::create(src, dst, std::move(images));
}

AlgebraMorphism odd_restriction(int n, int cap) {
  auto src = make_BGO_odd(n, cap);
  auto bo = make_BO(n, cap);
  std::vector<Poly> w;
  for (int i = 0; i < n; ++i) w.push_back(bo->generator(static_cast<std::size_t>(i)));
  const Poly w1 = w[0];
  const auto twisted = tensor_by_line(*bo, w, w1);
  std::vector<Poly> images{bo->multiply(w1, w1)};
  for (int i = 2; i <= n; ++i) images.push_back(twisted[static_cast<std::size_t>(i - 1)]);
  return AlgebraMorphism::create(src, bo, std::move(images));
}

AlgebraMorphism bv_star_odd(int n, int cap) {
  if (n < 3 || n % 2 == 0) throw ContractViolation("bv_star_odd needs odd n >= 3");
  auto src = make_BGO_odd(n, cap);
  auto bo = make_BO(n - 1, cap);
  std::vector<Poly> w;
  for (int i = 0; i < n - 1; ++i) w.push_back(bo->generator(static_cast<std::size_t>(i)));
  w.emplace_back();  // w_n(1 (+) F) = 0
  const Poly w1 = w[0];
  const auto twisted = tensor_by_line(*bo, w, w1);
  std::vector<Poly> images{bo->multiply(w1, w1)};
  for (int i = 2; i <= n; ++i) images.push_back(twisted[static_cast<std::size_t>(i - 1)]);
  return AlgebraMorphism::create(src, bo, std::move(images));
}

AlgebraMorphism bv_star_even(const EvenGODatum& datum) {
  auto trunc = truncation(datum.n, datum.bo->degree_cap());
  return compose(trunc, datum.res);
}

GysinDatum odd_gysin_datum(int n, const std::vector<std::pair<std::string, std::string>>& d_table, int cap) {
  auto base = make_BGO_odd(n, cap);
  auto bo = make_BO(n, cap);
  auto table = parse_table(d_table, *base, *bo);
  return GysinDatum::create(base, Poly{}, bo, odd_restriction(n, cap), std::move(table));
}

GysinDatum parse_odd_pair(std::string_view json_text, int cap, std::string_view origin) {
  const std::string org(origin);
  auto fail = [&](const std::string& where, const std::string& what) -> void {
    throw DataFileError(DataFileError::Kind::Schema, where.empty() ? org : org + ": " + where, what);
  };
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    fail("", std::string("invalid JSON: ") + e.what());
  }
  if (!root.is_object()) fail("", "top level must be an object");
  if (!root.contains("family") || root["family"] != "BGO_odd") fail("family", "expected \"BGO_odd\"");
  if (!root.contains("n") || !root["n"].is_number_integer()) fail("n", "expected an integer");
  const int n = root["n"].get<int>();
  if (n < 1 || n % 2 == 0) fail("n", "expected an odd rank >= 1");
  if (!root.contains("provenance") || !root["provenance"].is_string()) fail("provenance", "missing field");
  if (!root.contains("d_table") || !root["d_table"].is_object()) fail("d_table", "expected an object");
  std::vector<std::pair<std::string, std::string>> pairs;
  for (auto it = root["d_table"].begin(); it != root["d_table"].end(); ++it) {
    if (!it.value().is_string()) fail("d_table." + it.key(), "expected a polynomial string");
    pairs.emplace_back(it.key(), it.value().get<std::string>());
  }
  try {
    return odd_gysin_datum(n, pairs, cap);
  } catch (const ParseError& e) {
    throw DataFileError(DataFileError::Kind::Schema, org + ": d_table", e.what());
  } catch (const ContractViolation& e) {
    throw DataFileError(DataFileError::Kind::Degree, org + ": d_table", e.what());
  }
}

GysinDatum load_odd_pair(const std::filesystem::path& path, int cap) {
  return parse_odd_pair(read_text_file(path), cap, path.filename().string());
}

GysinDatum even_gysin_datum(const EvenGODatum& datum) {
  return GysinDatum::create(datum.presentation, datum.presentation->generator("lambda"), datum.bo, datum.res,
                            datum.d_table);
}

DeltaMap::DeltaMap(int rank, TwistStructure twist, AlgebraMorphism bv, GysinDatum target)
    : rank_(rank), twist_(std::move(twist)), bv_(std::move(bv)), target_(std::move(target)) {}

DeltaMap DeltaMap::from_odd(int n, const EvenGODatum& target, int cap) {
  if (n < 3 || n % 2 == 0) throw ContractViolation("from_odd needs odd n >= 3");
  if (target.n != n - 1) {
    throw ContractViolation("target datum has rank " + std::to_string(target.n) + ", expected " +
                            std::to_string(n - 1));
  }
  GysinDatum pair = even_gysin_datum(target);
  AlgebraMorphism bv = retarget(bv_star_odd(n, cap), pair.complement);
  return DeltaMap(n, builtin_mu_odd(n, cap), std::move(bv), std::move(pair));
}

DeltaMap DeltaMap::from_even(const EvenGODatum& source, GysinDatum target) {
  AlgebraMorphism bv = retarget(bv_star_even(source), target.complement);
  return DeltaMap(source.n, twist_from_even(source), std::move(bv), std::move(target));
}

Poly DeltaMap::operator()(const Poly& alpha) const {
  const Presentation& a = *twist_.algebra;
  if (!a.is_homogeneous(alpha)) throw ContractViolation("delta needs a homogeneous class");
  const Poly residue = primitive_residue(twist_, alpha);
  if (!residue.is_zero()) {
    throw ContractViolation("class " + a.format(alpha) + " is not primitive: mu*(a) - a(x)1 = " +
                            twist_.twisted->format(residue));
  }
  const BoundaryResult r = gysin_d(target_, bv_.apply(alpha));
  if (!r.determined()) {
    std::vector<std::string> monos;
    for (const auto& m : r.unresolved) monos.push_back(target_.complement->format(m));
    std::string list;
    for (const auto& m : monos) list += (list.empty() ? "" : ", ") + m;
    const int degree = *target_.complement->degree_of(bv_.apply(alpha));
    throw UnderdeterminedBoundary("d is not determined on " + list, degree, std::move(monos));
  }
  return *r.value;
}

std::vector<CommutationFailure> bv_commutation_check(int n, int cap) {
  const TwistStructure t = builtin_mu_odd(n, cap);
  const AlgebraMorphism bv = bv_star_odd(n, cap);
  const auto bo_twisted = twisted_algebra(bv.target());
  std::vector<Poly> images;
  for (const auto& img : bv.images()) images.push_back(embed_left(img, 1));
  images.push_back(bo_twisted->generator(bo_twisted->arity() - 1));
  const AlgebraMorphism bv_id = AlgebraMorphism::create(t.twisted, bo_twisted, std::move(images));

  std::vector<CommutationFailure> failures;
  for (int d = 0; d <= cap; ++d) {
    for (const auto& alpha : primitive_basis(t, d)) {
      const Poly lhs = bo_twisted->normal_form(bv_id.apply(t.mu.apply(alpha)));
      const Poly rhs = bo_twisted->normal_form(embed_left(bv.apply(alpha), 1));
      if (lhs != rhs) {
        failures.push_back({d, t.algebra->format(alpha), bo_twisted->format(lhs), bo_twisted->format(rhs)});
      }
    }
  }
  return failures;
}

// ---------------------------------------------------------------------------
// Completion search

namespace {

struct Attempt {
  PresentationPtr presentation;
  GysinDatum datum;
};

// Slices are lazy, so building at the full cap costs only what is used.
Attempt build_attempt(const CompletionProblem& p, const std::vector<Poly>& relations) {
  auto a = Presentation::create(p.generators, relations, p.cap);
  std::vector<Poly> images;
  for (const auto& expr : p.res) images.push_back(p.complement->parse(expr));
  auto res = AlgebraMorphism::unchecked(a, p.complement, std::move(images));
  auto table = parse_table(p.d_table, *a, *p.complement);
  auto g = GysinDatum::create(a, a->parse(p.euler), p.complement, std::move(res), std::move(table));
  return {a, std::move(g)};
}

bool locally_exact(const GysinDatum& g, int cap) {
  if (!check_well_defined(g.res).empty()) return false;
  return check_exactness(g, cap).exact();
}

// Extends `relations` so that the sequence is exact through degree d.
bool extend_to_degree(const CompletionProblem& problem, std::vector<Poly>& relations, int d,
                      std::vector<std::string>& log) {
  const std::string at = "degree " + std::to_string(d) + ": ";
  Attempt cur = build_attempt(problem, relations);

  // e * d(z) = 0 is forced by exactness at A^{d-2}.
  if (d >= 3) {
    const F2Matrix dm = boundary_matrix(cur.datum, d - 1);
    const F2Matrix em = euler_matrix(cur.datum, d);
    const auto forced = column_space_basis(multiply(em, dm));
    for (const auto& col : forced) {
      relations.push_back(cur.presentation->from_coordinates(d, col));
      log.push_back(at + "forced " + cur.presentation->format(relations.back()));
    }
    if (!forced.empty()) cur = build_attempt(problem, relations);
  }
  if (locally_exact(cur.datum, d)) return true;

  // Candidates: a basis of ker(res) on A^d modulo im(e).
  const Presentation& a = *cur.presentation;
  const F2Echelon im_e = echelon(transpose(euler_matrix(cur.datum, d)));
  std::vector<F2Vector> reduced;
  for (const auto& v : kernel_basis(cur.datum.res.matrix(d))) {
    F2Vector r = im_e.reduce(v);
    if (!r.is_zero()) reduced.push_back(std::move(r));
  }
  std::vector<Poly> candidates;
  if (!reduced.empty()) {
    for (const auto& v : column_space_basis(F2Matrix::from_columns(a.dim(d), reduced))) {
      candidates.push_back(a.from_coordinates(d, v));
    }
  }

  const std::size_t k = candidates.size();
  if (k >= 63) {
    log.push_back(at + std::to_string(k) + " candidates, too many to search");
    return false;
  }
  std::size_t tried = 0;
  for (std::size_t size = 1; size <= k; ++size) {
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << k); ++mask) {
      if (static_cast<std::size_t>(std::popcount(mask)) != size) continue;
      if (++tried > problem.max_candidates_per_degree) {
        log.push_back(at + "candidate limit reached");
        return false;
      }
      std::vector<Poly> trial = relations;
      for (std::size_t c = 0; c < k; ++c) {
        if (mask & (std::uint64_t{1} << c)) trial.push_back(candidates[c]);
      }
      try {
        if (!locally_exact(build_attempt(problem, trial).datum, d)) continue;
      } catch (const UnderdeterminedBoundary&) {
        continue;
      }
      for (std::size_t c = relations.size(); c < trial.size(); ++c) log.push_back(at + "chose " + a.format(trial[c]));
      relations = std::move(trial);
      return true;
    }
  }
  log.push_back(at + "no relation set among " + std::to_string(k) + " candidates makes the sequence exact");
  return false;
}

}  // namespace

CompletionResult complete_presentation(const CompletionProblem& problem) {
  CompletionResult out;
  if (problem.res.size() != problem.generators.size()) {
    throw ContractViolation("completion needs one res image per generator");
  }
  if (problem.cap > problem.complement->degree_cap()) throw CapExceeded(problem.cap, problem.complement->degree_cap());
  std::vector<Poly> relations;
  for (int d = 1; d <= problem.cap; ++d) {
    try {
      if (!extend_to_degree(problem, relations, d, out.log)) return out;
    } catch (const UnderdeterminedBoundary& e) {
      out.log.push_back("degree " + std::to_string(d) + ": " + e.what());
      return out;
    }
  }

  Attempt final_attempt = build_attempt(problem, relations);
  if (!locally_exact(final_attempt.datum, problem.cap)) {
    out.log.push_back("final exactness check failed");
    return out;
  }
  out.found = true;
  out.presentation = final_attempt.presentation;
  out.relations = std::move(relations);
  return out;
}

}  // namespace charclass
