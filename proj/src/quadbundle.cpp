#include "charclass/quadbundle.hpp"

#include <algorithm>

#include <json.hpp>

#include "charclass/gysin.hpp"

namespace charclass {

namespace {

bool zero_scalar(const Scalar& x) { return sgn(x) == 0; }

bool is_odd_prime(long p) {
  if (p < 3 || p % 2 == 0) return false;
  for (long d = 3; d * d <= p; d += 2) {
    if (p % d == 0) return false;
  }
  return true;
}

std::string scalar_string(const Scalar& x) { return x.get_str(); }

// Square factors removed from an integer by trial division up to a bound; the
// result is squarefree whenever |x| has no prime factor above the bound
// appearing squared.
mpz_class strip_squares(mpz_class x) {
  if (x == 0) return x;
  for (unsigned long d = 2; d <= 100000; ++d) {
    const mpz_class dd = mpz_class(d) * d;
    if (dd > abs(x)) break;
    while (x % dd == 0) x /= dd;
  }
  return x;
}

KMatrix evaluate_at_zero(const TMatrix& b) {
  KMatrix out(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) {
    for (const auto& e : b[i]) out[i].push_back(e.at_zero());
  }
  return out;
}

// Rank over k by Gaussian elimination; also the reduced rows and pivots.
struct KEchelon {
  KMatrix rows;
  std::vector<std::size_t> pivots;
};

KEchelon k_echelon(const Field& k, KMatrix m) {
  KEchelon out;
  const std::size_t rows = m.size();
  const std::size_t cols = rows == 0 ? 0 : m[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && zero_scalar(m[p][c])) ++p;
    if (p == rows) continue;
    std::swap(m[p], m[r]);
    const Scalar inv = k.inv(m[r][c]);
    for (auto& x : m[r]) x = k.mul(x, inv);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || zero_scalar(m[i][c])) continue;
      const Scalar f = m[i][c];
      for (std::size_t j = 0; j < cols; ++j) m[i][j] = k.sub(m[i][j], k.mul(f, m[r][j]));
    }
    out.pivots.push_back(c);
    ++r;
  }
  m.resize(r);
  out.rows = std::move(m);
  return out;
}

struct BareissResult {
  int rank = 0;
  TPoly det;
};

// Fraction-free elimination over k[t] with full pivoting.
BareissResult bareiss(const Field& k, TMatrix m) {
  const std::size_t n = m.size();
  BareissResult out;
  bool negate = false;
  TPoly prev = TPoly::constant(1);
  for (std::size_t s = 0; s < n; ++s) {
    std::size_t pi = n, pj = n;
    int best = -1;
    for (std::size_t i = s; i < n; ++i) {
      for (std::size_t j = s; j < n; ++j) {
        if (m[i][j].is_zero()) continue;
        if (best < 0 || m[i][j].degree() < best) {
          best = m[i][j].degree();
          pi = i;
          pj = j;
        }
      }
    }
    if (pi == n) {
      out.rank = static_cast<int>(s);
      return out;
    }
    if (pi != s) {
      std::swap(m[pi], m[s]);
      negate = !negate;
    }
    if (pj != s) {
      for (auto& row : m) std::swap(row[pj], row[s]);
      negate = !negate;
    }
    for (std::size_t i = s + 1; i < n; ++i) {
      for (std::size_t j = s + 1; j < n; ++j) {
        const TPoly num = poly_sub(k, poly_mul(k, m[s][s], m[i][j]), poly_mul(k, m[i][s], m[s][j]));
        m[i][j] = poly_exact_div(k, num, prev);
      }
      m[i][s] = TPoly();
    }
    prev = m[s][s];
  }
  out.rank = static_cast<int>(n);
  out.det = n == 0 ? TPoly::constant(1) : m[n - 1][n - 1];
  if (negate) out.det = poly_sub(k, TPoly(), out.det);
  return out;
}

// Diagonal of a congruent diagonalization of a symmetric form over k.
std::vector<Scalar> diagonalize(const Field& k, KMatrix q) {
  const std::size_t m = q.size();
  std::vector<Scalar> diag;
  for (std::size_t s = 0; s < m; ++s) {
    if (zero_scalar(q[s][s])) {
      std::size_t j = s + 1;
      while (j < m && zero_scalar(q[j][j])) ++j;
      if (j < m) {
        std::swap(q[s], q[j]);
        for (auto& row : q) std::swap(row[s], row[j]);
      } else {
        j = s + 1;
        while (j < m && zero_scalar(q[s][j])) ++j;
        if (j == m) throw ContractViolation("form is degenerate");
        // e_s -> e_s + e_j; the new diagonal entry is 2 q[s][j] != 0
        for (std::size_t c = 0; c < m; ++c) q[s][c] = k.add(q[s][c], q[j][c]);
        for (std::size_t r = 0; r < m; ++r) q[r][s] = k.add(q[r][s], q[r][j]);
      }
    }
    const Scalar inv = k.inv(q[s][s]);
    for (std::size_t i = s + 1; i < m; ++i) {
      if (zero_scalar(q[i][s])) continue;
      const Scalar f = k.mul(q[i][s], inv);
      for (std::size_t c = 0; c < m; ++c) q[i][c] = k.sub(q[i][c], k.mul(f, q[s][c]));
      for (std::size_t r = 0; r < m; ++r) q[r][i] = k.sub(q[r][i], k.mul(f, q[r][s]));
    }
    diag.push_back(q[s][s]);
  }
  return diag;
}

void check_symmetric(const Field& k, const KMatrix& q) {
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (q[i].size() != q.size()) throw ContractViolation("form must be a square matrix");
    for (std::size_t j = 0; j < i; ++j) {
      if (k.from(q[i][j]) != k.from(q[j][i])) throw ContractViolation("form must be symmetric");
    }
  }
}

Scalar parse_scalar(const nlohmann::json& v, const std::string& where) {
  try {
    if (v.is_number_integer()) return Scalar(mpz_class(std::to_string(v.get<long long>())));
    if (v.is_string()) {
      Scalar x(v.get<std::string>());
      if (x.get_den() == 0) throw std::invalid_argument("zero denominator");
      x.canonicalize();
      return x;
    }
  } catch (const std::invalid_argument&) {
  }
  throw ParseError(where + ": coefficient must be an integer or a string \"a/b\"");
}

nlohmann::ordered_json scalar_json(const Scalar& x) {
  if (x.get_den() == 1 && x.get_num().fits_slong_p()) return x.get_num().get_si();
  return x.get_str();
}

}  // namespace

// ---------------------------------------------------------------------------
// Field

Field Field::prime(long p) {
  if (!is_odd_prime(p)) throw ContractViolation("F_p needs an odd prime p, got " + std::to_string(p));
  return Field(Kind::Prime, p);
}

std::string Field::to_string() const { return kind_ == Kind::Rationals ? "Q" : "F" + std::to_string(p_); }

Scalar Field::from(const Scalar& x) const {
  if (kind_ == Kind::Rationals) {
    Scalar y = x;
    y.canonicalize();
    return y;
  }
  const mpz_class p(p_);
  mpz_class num = x.get_num() % p;
  mpz_class den = x.get_den() % p;
  if (den == 0) throw ContractViolation("denominator " + x.get_den().get_str() + " vanishes in " + to_string());
  mpz_class den_inv;
  mpz_invert(den_inv.get_mpz_t(), den.get_mpz_t(), p.get_mpz_t());
  mpz_class r = (num * den_inv) % p;
  if (r < 0) r += p;
  return Scalar(r);
}

Scalar Field::inv(const Scalar& a) const {
  if (zero_scalar(a)) throw ContractViolation("division by zero in " + to_string());
  if (kind_ == Kind::Rationals) return Scalar(1) / a;
  return from(Scalar(mpz_class(1), from(a).get_num()));
}

bool Field::is_square(const Scalar& a) const {
  const Scalar x = from(a);
  if (zero_scalar(x)) return true;
  if (kind_ == Kind::Rationals) {
    return sgn(x) > 0 && mpz_perfect_square_p(x.get_num().get_mpz_t()) != 0 &&
           mpz_perfect_square_p(x.get_den().get_mpz_t()) != 0;
  }
  mpz_class r;
  const mpz_class e((p_ - 1) / 2);
  const mpz_class p(p_);
  mpz_powm(r.get_mpz_t(), x.get_num().get_mpz_t(), e.get_mpz_t(), p.get_mpz_t());
  return r == 1;
}

Scalar Field::non_square() const {
  if (kind_ == Kind::Rationals) return Scalar(-1);
  for (long a = 2; a < p_; ++a) {
    if (!is_square(Scalar(a))) return Scalar(a);
  }
  throw ContractViolation("no non-square found");
}

// ---------------------------------------------------------------------------
// Polynomials in t

TPoly::TPoly(std::vector<Scalar> coeffs) : c_(std::move(coeffs)) {
  while (!c_.empty() && zero_scalar(c_.back())) c_.pop_back();
}

TPoly TPoly::monomial(const Scalar& c, int degree) {
  std::vector<Scalar> v(static_cast<std::size_t>(degree) + 1, Scalar(0));
  v.back() = c;
  return TPoly(std::move(v));
}

Scalar TPoly::coeff(int i) const {
  return i >= 0 && i < static_cast<int>(c_.size()) ? c_[static_cast<std::size_t>(i)] : Scalar(0);
}

int TPoly::valuation() const {
  if (is_zero()) throw ContractViolation("valuation of the zero polynomial");
  int v = 0;
  while (zero_scalar(c_[static_cast<std::size_t>(v)])) ++v;
  return v;
}

std::string TPoly::to_string(std::string_view var) const {
  if (c_.empty()) return "0";
  std::string out;
  for (int i = degree(); i >= 0; --i) {
    const Scalar& c = c_[static_cast<std::size_t>(i)];
    if (zero_scalar(c)) continue;
    const bool negative = sgn(c) < 0;
    const Scalar a = negative ? Scalar(-c) : c;
    if (out.empty()) {
      if (negative) out += "-";
    } else {
      out += negative ? " - " : " + ";
    }
    const bool unit = a == 1;
    if (i == 0 || !unit) out += scalar_string(a);
    if (i > 0) {
      if (!unit) out += "*";
      out += var;
      if (i > 1) out += "^" + std::to_string(i);
    }
  }
  return out;
}

TPoly poly_add(const Field& k, const TPoly& a, const TPoly& b) {
  std::vector<Scalar> c(std::max(a.coeffs().size(), b.coeffs().size()));
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = k.add(a.coeff(static_cast<int>(i)), b.coeff(static_cast<int>(i)));
  return TPoly(std::move(c));
}

TPoly poly_sub(const Field& k, const TPoly& a, const TPoly& b) {
  std::vector<Scalar> c(std::max(a.coeffs().size(), b.coeffs().size()));
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = k.sub(a.coeff(static_cast<int>(i)), b.coeff(static_cast<int>(i)));
  return TPoly(std::move(c));
}

TPoly poly_mul(const Field& k, const TPoly& a, const TPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Scalar> c(a.coeffs().size() + b.coeffs().size() - 1, Scalar(0));
  for (std::size_t i = 0; i < a.coeffs().size(); ++i) {
    if (zero_scalar(a.coeffs()[i])) continue;
    for (std::size_t j = 0; j < b.coeffs().size(); ++j) c[i + j] += a.coeffs()[i] * b.coeffs()[j];
  }
  for (auto& x : c) x = k.from(x);
  return TPoly(std::move(c));
}

TPoly poly_exact_div(const Field& k, const TPoly& a, const TPoly& b) {
  if (b.is_zero()) throw ContractViolation("polynomial division by zero");
  std::vector<Scalar> rem = a.coeffs();
  const int db = b.degree();
  if (a.degree() < db) {
    if (!a.is_zero()) throw ContractViolation("inexact polynomial division");
    return {};
  }
  std::vector<Scalar> q(static_cast<std::size_t>(a.degree() - db) + 1, Scalar(0));
  const Scalar lead_inv = k.inv(b.coeffs().back());
  for (int i = a.degree() - db; i >= 0; --i) {
    const Scalar f = k.mul(rem[static_cast<std::size_t>(i + db)], lead_inv);
    q[static_cast<std::size_t>(i)] = f;
    if (zero_scalar(f)) continue;
    for (int j = 0; j <= db; ++j) {
      auto& r = rem[static_cast<std::size_t>(i + j)];
      r = k.sub(r, k.mul(f, b.coeffs()[static_cast<std::size_t>(j)]));
    }
  }
  if (!TPoly(rem).is_zero()) throw ContractViolation("inexact polynomial division");
  return TPoly(std::move(q));
}

TPoly poly_substitute(const Field& k, const TPoly& a, const TPoly& u, int m) {
  const TPoly sub = poly_mul(k, u, TPoly::monomial(Scalar(1), m));
  TPoly out;
  for (int i = a.degree(); i >= 0; --i) out = poly_add(k, poly_mul(k, out, sub), TPoly::constant(a.coeff(i)));
  return out;
}

// ---------------------------------------------------------------------------
// Triples

LocalTriple LocalTriple::create(Field field, TMatrix b) {
  const std::size_t n = b.size();
  for (auto& row : b) {
    if (row.size() != n) throw ContractViolation("triple matrix must be square");
    for (auto& e : row) {
      std::vector<Scalar> c;
      for (const auto& x : e.coeffs()) c.push_back(field.from(x));
      e = TPoly(std::move(c));
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (b[i][j] != b[j][i]) {
        throw ContractViolation("triple matrix must be symmetric: entries (" + std::to_string(i) + "," +
                                std::to_string(j) + ") and (" + std::to_string(j) + "," + std::to_string(i) +
                                ") differ");
      }
    }
  }
  return LocalTriple(field, std::move(b));
}

LocalTriple LocalTriple::diagonal(Field field, const std::vector<TPoly>& entries) {
  TMatrix b(entries.size(), std::vector<TPoly>(entries.size()));
  for (std::size_t i = 0; i < entries.size(); ++i) b[i][i] = entries[i];
  return create(field, std::move(b));
}

KMatrix LocalTriple::special_fiber() const { return evaluate_at_zero(b_); }

LocalTriple parse_triple_json(std::string_view text) {
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("triple: invalid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ParseError("triple: top level must be an object");
  if (!root.contains("field") || !root["field"].is_string()) throw ParseError("triple: field must be \"Q\" or \"Fp\"");
  const std::string kind = root["field"].get<std::string>();
  Field field = Field::rationals();
  if (kind == "Fp") {
    if (!root.contains("p") || !root["p"].is_number_integer()) throw ParseError("triple: Fp needs an integer p");
    field = Field::prime(root["p"].get<long>());
  } else if (kind != "Q") {
    throw ParseError("triple: field must be \"Q\" or \"Fp\"");
  }
  if (!root.contains("entries") || !root["entries"].is_array()) throw ParseError("triple: entries must be an array");
  const auto& rows = root["entries"];
  if (root.contains("n") && (!root["n"].is_number_integer() || root["n"].get<std::size_t>() != rows.size())) {
    throw ParseError("triple: n does not match the number of rows");
  }
  TMatrix b;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].is_array()) throw ParseError("triple: entries[" + std::to_string(i) + "] must be an array");
    std::vector<TPoly> row;
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      const std::string where = "triple: entries[" + std::to_string(i) + "][" + std::to_string(j) + "]";
      const auto& cell = rows[i][j];
      if (!cell.is_array()) throw ParseError(where + " must be a coefficient list, constant term first");
      std::vector<Scalar> c;
      for (const auto& x : cell) c.push_back(parse_scalar(x, where));
      row.emplace_back(std::move(c));
    }
    b.push_back(std::move(row));
  }
  return LocalTriple::create(field, std::move(b));
}

std::string triple_to_json(const LocalTriple& t) {
  nlohmann::ordered_json out;
  out["field"] = t.field().kind() == Field::Kind::Rationals ? "Q" : "Fp";
  if (t.field().kind() == Field::Kind::Prime) out["p"] = t.field().characteristic();
  out["n"] = t.n();
  out["entries"] = nlohmann::ordered_json::array();
  for (const auto& row : t.b()) {
    auto r = nlohmann::ordered_json::array();
    for (const auto& e : row) {
      auto c = nlohmann::ordered_json::array();
      for (const auto& x : e.coeffs()) c.push_back(scalar_json(x));
      r.push_back(std::move(c));
    }
    out["entries"].push_back(std::move(r));
  }
  return out.dump();
}

RankProfile rank_profile(const LocalTriple& t) {
  return {bareiss(t.field(), t.b()).rank, static_cast<int>(k_echelon(t.field(), t.special_fiber()).pivots.size())};
}

TPoly discriminant(const LocalTriple& t) { return bareiss(t.field(), t.b()).det; }

int multiplicity(const LocalTriple& t) {
  const TPoly det = discriminant(t);
  if (det.is_zero()) throw ContractViolation("not mildly degenerating: the discriminant vanishes identically");
  return det.valuation();
}

Diagnosis is_mildly_degenerating(const LocalTriple& t) {
  const RankProfile r = rank_profile(t);
  const int n = t.n();
  if (r.generic_rank < n) {
    return {false, "generic rank " + std::to_string(r.generic_rank) + " < n = " + std::to_string(n) +
                       ": degenerate off the divisor"};
  }
  if (r.special_rank == n) return {false, "special rank n: nondegenerate on the divisor, no degeneration"};
  if (r.special_rank < n - 1) {
    return {false, "special rank " + std::to_string(r.special_rank) + " = n-" + std::to_string(n - r.special_rank) +
                       ": not minimally degenerate"};
  }
  return {true, "generic rank n, special rank n-1"};
}

ReducedTriple reduce_form(const Field& field, const KMatrix& q) {
  check_symmetric(field, q);
  KMatrix qk = q;
  for (auto& row : qk) {
    for (auto& x : row) x = field.from(x);
  }
  std::vector<Scalar> diag = diagonalize(field, qk);

  ReducedTriple out;
  out.field = field;
  out.m = static_cast<int>(diag.size());
  if (field.kind() == Field::Kind::Prime) {
    Scalar disc(1);
    for (const auto& d : diag) disc = field.mul(disc, d);
    out.diagonal.assign(diag.size(), Scalar(1));
    if (!diag.empty() && !field.is_square(disc)) out.diagonal.back() = field.non_square();
    out.disc = diag.empty() ? Scalar(1) : out.diagonal.back();
    return out;
  }
  for (const auto& d : diag) {
    out.diagonal.emplace_back(strip_squares(d.get_num() * d.get_den()));
    (sgn(d) > 0 ? out.positive : out.negative) += 1;
  }
  std::sort(out.diagonal.begin(), out.diagonal.end());
  out.disc = Scalar(1);
  for (const auto& d : out.diagonal) out.disc *= d;
  return out;
}

ReducedTriple reduced_triple(const LocalTriple& t) {
  const Diagnosis diag = is_mildly_degenerating(t);
  if (!diag.ok) throw ContractViolation("reduced triple needs a mildly degenerating triple: " + diag.reason);
  const Field& k = t.field();
  const KMatrix b0 = t.special_fiber();
  const KEchelon e = k_echelon(k, b0);
  const std::size_t n = b0.size();

  // kernel line: the single free column f
  std::size_t f = 0;
  for (std::size_t r = 0; r < e.pivots.size() && e.pivots[r] == f; ++r) ++f;
  std::vector<Scalar> v(n, Scalar(0));
  v[f] = 1;
  for (std::size_t r = 0; r < e.pivots.size(); ++r) v[e.pivots[r]] = k.neg(e.rows[r][f]);

  // {e_i : i != j} with j the first nonzero coordinate of v spans E / ker
  std::size_t j = 0;
  while (zero_scalar(v[j])) ++j;
  KMatrix q;
  for (std::size_t r = 0; r < n; ++r) {
    if (r == j) continue;
    std::vector<Scalar> row;
    for (std::size_t c = 0; c < n; ++c) {
      if (c != j) row.push_back(b0[r][c]);
    }
    q.push_back(std::move(row));
  }
  return reduce_form(k, q);
}

Equivalence compare(const ReducedTriple& a, const ReducedTriple& b) {
  if (!(a.field == b.field)) throw ContractViolation("cannot compare forms over different fields");
  if (a.m != b.m) return Equivalence::Inequivalent;
  if (a.m == 0) return Equivalence::Equivalent;
  const Field& k = a.field;
  if (k.kind() == Field::Kind::Prime) {
    // scaling by u multiplies the discriminant by u^m
    if (a.m % 2 == 1) return Equivalence::Equivalent;
    return k.is_square(k.div(a.disc, b.disc)) ? Equivalence::Equivalent : Equivalence::Inequivalent;
  }
  if (a.m % 2 == 0) {
    if (!k.is_square(a.disc / b.disc)) return Equivalence::Inequivalent;
    const bool same = a.positive == b.positive || a.positive == b.negative;
    if (!same) return Equivalence::Inequivalent;
  } else {
    const bool flip = sgn(a.disc) != sgn(b.disc);
    if (flip ? a.positive != b.negative : a.positive != b.positive) return Equivalence::Inequivalent;
  }
  // normal forms of the scalings of b that could match a
  auto scaled = [&](const Scalar& u) {
    std::vector<Scalar> d;
    for (const auto& x : b.diagonal) {
      const Scalar y = u * x;
      d.emplace_back(strip_squares(y.get_num() * y.get_den()));
    }
    std::sort(d.begin(), d.end());
    return d;
  };
  const Scalar ratio = a.disc / b.disc;
  for (const Scalar& u : {Scalar(1), Scalar(-1), ratio, Scalar(-ratio)}) {
    if (scaled(u) == a.diagonal) return Equivalence::Equivalent;
  }
  if (a.m == 1) return Equivalence::Equivalent;
  return Equivalence::Undecided;
}

std::string to_string(Equivalence e) {
  switch (e) {
    case Equivalence::Equivalent: return "equivalent";
    case Equivalence::Inequivalent: return "inequivalent";
    case Equivalence::Undecided: return "undecided";
  }
  return "?";
}

LocalTriple twist_by_unit(const LocalTriple& t, const TPoly& u) {
  if (zero_scalar(t.field().from(u.at_zero()))) throw ContractViolation("twist needs a unit: u(0) = 0");
  TMatrix b = t.b();
  for (auto& row : b) {
    for (auto& e : row) e = poly_mul(t.field(), u, e);
  }
  return LocalTriple::create(t.field(), std::move(b));
}

LocalTriple orthogonal_sum(const LocalTriple& a, const LocalTriple& b) {
  if (!(a.field() == b.field())) throw ContractViolation("orthogonal sum needs one coefficient field");
  const std::size_t n = static_cast<std::size_t>(a.n() + b.n());
  TMatrix m(n, std::vector<TPoly>(n));
  for (int i = 0; i < a.n(); ++i) {
    for (int j = 0; j < a.n(); ++j) m[i][j] = a.entry(i, j);
  }
  for (int i = 0; i < b.n(); ++i) {
    for (int j = 0; j < b.n(); ++j) m[a.n() + i][a.n() + j] = b.entry(i, j);
  }
  return LocalTriple::create(a.field(), std::move(m));
}

LocalTriple congruence(const LocalTriple& t, const TMatrix& g) {
  const Field& k = t.field();
  const std::size_t n = static_cast<std::size_t>(t.n());
  if (g.size() != n) throw ContractViolation("congruence matrix has the wrong size");
  for (const auto& row : g) {
    if (row.size() != n) throw ContractViolation("congruence matrix has the wrong size");
  }
  if (k_echelon(k, evaluate_at_zero(g)).pivots.size() != n) {
    throw ContractViolation("congruence matrix is not invertible at t = 0");
  }
  TMatrix gb(n, std::vector<TPoly>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t l = 0; l < n; ++l) gb[i][j] = poly_add(k, gb[i][j], poly_mul(k, g[i][l], t.b()[l][j]));
    }
  }
  TMatrix out(n, std::vector<TPoly>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t l = 0; l < n; ++l) out[i][j] = poly_add(k, out[i][j], poly_mul(k, gb[i][l], g[j][l]));
    }
  }
  return LocalTriple::create(k, std::move(out));
}

LocalTriple model_triple(const Field& field, const KMatrix& q) {
  reduce_form(field, q);  // throws for a degenerate or non-symmetric q
  TMatrix b(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) {
    for (const auto& x : q[i]) b[i].push_back(TPoly::constant(x));
  }
  const LocalTriple tau = LocalTriple::diagonal(field, {TPoly::monomial(Scalar(1), 1)});
  return orthogonal_sum(tau, LocalTriple::create(field, std::move(b)));
}

LocalTriple base_change(const LocalTriple& t, int m, const TPoly& u) {
  if (m < 1) throw ContractViolation("base change needs m >= 1");
  if (zero_scalar(t.field().from(u.at_zero()))) throw ContractViolation("base change needs a unit: u(0) = 0");
  TMatrix b = t.b();
  for (auto& row : b) {
    for (auto& e : row) e = poly_substitute(t.field(), e, u, m);
  }
  return LocalTriple::create(t.field(), std::move(b));
}

BoundaryOutcome degeneration_boundary(const DeltaMap& delta, const Poly& alpha, const LocalTriple& t) {
  if (t.n() != delta.rank()) {
    throw ContractViolation("triple has dimension " + std::to_string(t.n()) + " but alpha lives on BGO_" +
                            std::to_string(delta.rank()));
  }
  const Diagnosis diag = is_mildly_degenerating(t);
  if (!diag.ok) throw ContractViolation("not mildly degenerating: " + diag.reason);
  BoundaryOutcome out;
  out.nu = multiplicity(t);
  out.parity = out.nu % 2;
  out.delta = delta(alpha);
  out.evaluated = out.parity == 1 ? out.delta : Poly{};
  out.reduced = reduced_triple(t);
  return out;
}

}  // namespace charclass
