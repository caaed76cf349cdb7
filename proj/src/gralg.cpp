#include "charclass/gralg.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>
#include <utility>

#include "charclass/errors.hpp"

namespace charclass {

// ---------------------------------------------------------------------------
// Monomial / Poly

bool Monomial::is_unit() const {
  return std::all_of(exps.begin(), exps.end(), [](std::uint16_t e) { return e == 0; });
}

Monomial operator*(const Monomial& a, const Monomial& b) {
  if (a.exps.size() != b.exps.size()) throw ContractViolation("monomial product: arity mismatch");
  Monomial out = a;
  for (std::size_t i = 0; i < out.exps.size(); ++i) {
    const unsigned e = unsigned{out.exps[i]} + unsigned{b.exps[i]};
    if (e > 0xFFFFU) throw ContractViolation("monomial product: exponent overflow");
    out.exps[i] = static_cast<std::uint16_t>(e);
  }
  return out;
}

Poly::Poly(Monomial m) { terms_.push_back(std::move(m)); }

Poly Poly::from_terms(std::vector<Monomial> terms) {
  std::sort(terms.begin(), terms.end(), std::greater<>());
  Poly p;
  for (std::size_t i = 0; i < terms.size();) {
    std::size_t j = i;
    while (j < terms.size() && terms[j] == terms[i]) ++j;
    if ((j - i) % 2 == 1) p.terms_.push_back(std::move(terms[i]));
    i = j;
  }
  return p;
}

bool Poly::contains(const Monomial& m) const {
  return std::binary_search(terms_.begin(), terms_.end(), m, std::greater<>());
}

Poly& Poly::operator+=(const Poly& other) {
  std::vector<Monomial> out;
  out.reserve(terms_.size() + other.terms_.size());
  std::set_symmetric_difference(terms_.begin(), terms_.end(), other.terms_.begin(), other.terms_.end(),
                                std::back_inserter(out), std::greater<>());
  terms_ = std::move(out);
  return *this;
}

Poly raw_product(const Poly& a, const Poly& b) {
  std::vector<Monomial> terms;
  terms.reserve(a.size() * b.size());
  for (const auto& x : a.terms()) {
    for (const auto& y : b.terms()) terms.push_back(x * y);
  }
  return Poly::from_terms(std::move(terms));
}

// ---------------------------------------------------------------------------
// Expression parser

namespace {

bool is_identifier(std::string_view s) {
  if (s.empty() || !std::isalpha(static_cast<unsigned char>(s.front()))) return false;
  return std::all_of(s.begin(), s.end(),
                     [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

class ExprParser {
 public:
  ExprParser(std::string_view text, const std::vector<Generator>& generators)
      : text_(text), generators_(generators) {}

  Poly parse() {
    Poly p = expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("expression \"" + std::string(text_) + "\" at offset " + std::to_string(pos_) + ": " + what);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Poly one() const { return Poly(Monomial{std::vector<std::uint16_t>(generators_.size(), 0)}); }

  Poly expr() {
    Poly acc = term();
    // Over F2 subtraction is addition.
    while (accept('+') || accept('-')) acc += term();
    return acc;
  }

  Poly term() {
    Poly acc = factor();
    while (accept('*')) acc = raw_product(acc, factor());
    return acc;
  }

  Poly factor() {
    Poly base = atom();
    if (!accept('^')) return base;
    skip_space();
    const unsigned long e = number();
    if (e > 0xFFFFUL) fail("exponent too large");
    Poly out = one();
    for (unsigned long i = 0; i < e; ++i) out = raw_product(out, base);
    return out;
  }

  unsigned long number() {
    const std::size_t start = pos_;
    unsigned long value = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      value = value * 10 + static_cast<unsigned long>(text_[pos_] - '0');
      if (value > 0xFFFFFFFFUL) fail("integer literal too large");
      ++pos_;
    }
    if (pos_ == start) fail("expected a nonnegative integer");
    return value;
  }

  Poly atom() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Poly inner = expr();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      return number() % 2 == 1 ? one() : Poly{};
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        ++pos_;
      }
      const std::string_view name = text_.substr(start, pos_ - start);
      for (std::size_t i = 0; i < generators_.size(); ++i) {
        if (generators_[i].name == name) {
          Monomial m{std::vector<std::uint16_t>(generators_.size(), 0)};
          m.exps[i] = 1;
          return Poly(std::move(m));
        }
      }
      pos_ = start;
      fail("unknown generator '" + std::string(name) + "'");
    }
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  std::string_view text_;
  const std::vector<Generator>& generators_;
  std::size_t pos_ = 0;
};

// Exponent vectors of total degree d in graded-lex order.
void enumerate(const std::vector<Generator>& gens, std::size_t i, int remaining, Monomial& cur,
               std::vector<Monomial>& out) {
  if (i == gens.size()) {
    if (remaining == 0) out.push_back(cur);
    return;
  }
  for (int e = remaining / gens[i].degree; e >= 0; --e) {
    cur.exps[i] = static_cast<std::uint16_t>(e);
    enumerate(gens, i + 1, remaining - e * gens[i].degree, cur, out);
  }
  cur.exps[i] = 0;
}

std::vector<Monomial> monomials_of_degree(const std::vector<Generator>& gens, int d) {
  std::vector<Monomial> out;
  if (d < 0) return out;
  Monomial cur{std::vector<std::uint16_t>(gens.size(), 0)};
  enumerate(gens, 0, d, cur, out);
  return out;
}

}  // namespace

Poly parse_poly(std::string_view expr, const std::vector<Generator>& generators) {
  return ExprParser(expr, generators).parse();
}

// ---------------------------------------------------------------------------
// Presentation

Presentation::Presentation(std::vector<Generator> generators, int cap)
    : generators_(std::move(generators)),
      cap_(cap),
      slice_once_(static_cast<std::size_t>(cap) + 1),
      slices_(static_cast<std::size_t>(cap) + 1) {}

PresentationPtr Presentation::create(std::vector<Generator> generators, std::vector<Poly> relations,
                                     int degree_cap) {
  if (degree_cap < 0) throw ContractViolation("degree cap must be nonnegative");
  std::set<std::string> seen;
  for (const auto& g : generators) {
    if (!is_identifier(g.name)) throw ContractViolation("invalid generator name '" + g.name + "'");
    if (g.degree < 1) throw ContractViolation("generator '" + g.name + "' must have degree >= 1");
    if (!seen.insert(g.name).second) throw ContractViolation("duplicate generator name '" + g.name + "'");
  }
  std::shared_ptr<Presentation> p(new Presentation(std::move(generators), degree_cap));
  for (std::size_t k = 0; k < relations.size(); ++k) {
    const Poly& r = relations[k];
    for (const auto& t : r.terms()) {
      if (t.exps.size() != p->arity()) throw ContractViolation("relation " + std::to_string(k) + ": arity mismatch");
    }
    if (r.is_zero()) throw ContractViolation("relation " + std::to_string(k) + " is zero");
    if (!p->is_homogeneous(r)) {
      throw ContractViolation("relation " + std::to_string(k) + " is not homogeneous: " + p->format(r));
    }
    p->relation_degrees_.push_back(p->degree(r.terms().front()));
  }
  p->relations_ = std::move(relations);
  return p;
}

PresentationPtr Presentation::create(std::vector<Generator> generators, const std::vector<std::string>& relations,
                                     int degree_cap) {
  std::vector<Poly> polys;
  polys.reserve(relations.size());
  for (const auto& r : relations) polys.push_back(parse_poly(r, generators));
  return create(std::move(generators), std::move(polys), degree_cap);
}

std::optional<std::size_t> Presentation::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < generators_.size(); ++i) {
    if (generators_[i].name == name) return i;
  }
  return std::nullopt;
}

Poly Presentation::generator(std::size_t index) const {
  Monomial m = unit_monomial();
  m.exps.at(index) = 1;
  return Poly(std::move(m));
}

Poly Presentation::generator(std::string_view name) const {
  const auto idx = index_of(name);
  if (!idx) throw ContractViolation("unknown generator '" + std::string(name) + "'");
  return generator(*idx);
}

int Presentation::degree(const Monomial& m) const {
  if (m.exps.size() != arity()) throw ContractViolation("monomial arity does not match presentation");
  int d = 0;
  for (std::size_t i = 0; i < arity(); ++i) d += int{m.exps[i]} * generators_[i].degree;
  return d;
}

bool Presentation::is_homogeneous(const Poly& p) const {
  if (p.is_zero()) return true;
  const int d = degree(p.terms().front());
  return std::all_of(p.terms().begin(), p.terms().end(), [&](const Monomial& m) { return degree(m) == d; });
}

std::optional<int> Presentation::degree_of(const Poly& p) const {
  if (p.is_zero()) return std::nullopt;
  if (!is_homogeneous(p)) throw ContractViolation("polynomial is not homogeneous: " + format(p));
  return degree(p.terms().front());
}

void Presentation::check_cap(int d) const {
  if (d > cap_) throw CapExceeded(d, cap_);
}

std::unique_ptr<Presentation::Slice> Presentation::build_slice(int d) const {
  auto s = std::make_unique<Slice>();
  s->monomials = monomials_of_degree(generators_, d);

  std::vector<F2Vector> rows;
  for (std::size_t k = 0; k < relations_.size(); ++k) {
    const int e = relation_degrees_[k];
    if (e > d) continue;
    for (const auto& m : monomials_of_degree(generators_, d - e)) {
      F2Vector row(s->monomials.size());
      for (const auto& t : relations_[k].terms()) row.flip(column_of(*s, t * m));
      if (!row.is_zero()) rows.push_back(std::move(row));
    }
  }
  s->ideal = echelon(F2Matrix::from_rows(s->monomials.size(), rows));

  s->basis_index.assign(s->monomials.size(), 0);
  for (std::size_t pcol : s->ideal.pivots) s->basis_index[pcol] = -1;
  for (std::size_t c = 0; c < s->monomials.size(); ++c) {
    if (s->basis_index[c] < 0) continue;
    s->basis_index[c] = static_cast<std::ptrdiff_t>(s->basis.size());
    s->basis.push_back(s->monomials[c]);
  }
  return s;
}

const Presentation::Slice& Presentation::slice(int d) const {
  check_cap(d);
  const auto idx = static_cast<std::size_t>(d);
  std::call_once(slice_once_[idx], [&] { slices_[idx] = build_slice(d); });
  return *slices_[idx];
}

std::size_t Presentation::column_of(const Slice& s, const Monomial& m) const {
  auto it = std::lower_bound(s.monomials.begin(), s.monomials.end(), m, std::greater<>());
  if (it == s.monomials.end() || *it != m) {
    throw ContractViolation("monomial " + format(m) + " does not belong to this degree");
  }
  return static_cast<std::size_t>(it - s.monomials.begin());
}

F2Vector Presentation::monomial_vector(const Slice& s, const Poly& p) const {
  F2Vector v(s.monomials.size());
  for (const auto& t : p.terms()) v.flip(column_of(s, t));
  return v;
}

const std::vector<Monomial>& Presentation::monomials(int d) const {
  static const std::vector<Monomial> kEmpty;
  if (d < 0) return kEmpty;
  return slice(d).monomials;
}

const std::vector<Monomial>& Presentation::basis(int d) const {
  static const std::vector<Monomial> kEmpty;
  if (d < 0) return kEmpty;
  return slice(d).basis;
}

std::vector<std::size_t> Presentation::poincare_series(int cap) const {
  check_cap(cap);
  std::vector<std::size_t> out;
  for (int d = 0; d <= cap; ++d) out.push_back(dim(d));
  return out;
}

F2Vector Presentation::coordinates(const Poly& p, int d) const {
  if (d < 0) {
    if (!p.is_zero()) throw ContractViolation("nonzero polynomial in negative degree");
    return F2Vector(0);
  }
  const Slice& s = slice(d);
  F2Vector out(s.basis.size());
  if (p.is_zero()) return out;
  const auto pd = degree_of(p);
  if (*pd != d) {
    throw ContractViolation("expected degree " + std::to_string(d) + ", got " + std::to_string(*pd) + ": " + format(p));
  }
  const F2Vector reduced = s.ideal.reduce(monomial_vector(s, p));
  for (std::size_t c : reduced.support()) out.set(static_cast<std::size_t>(s.basis_index[c]));
  return out;
}

Poly Presentation::from_coordinates(int d, const F2Vector& v) const {
  const auto& b = basis(d);
  if (v.size() != b.size()) throw ContractViolation("coordinate vector length differs from dimension");
  std::vector<Monomial> terms;
  for (std::size_t i : v.support()) terms.push_back(b[i]);
  return Poly::from_terms(std::move(terms));
}

Poly Presentation::normal_form(const Poly& p) const {
  const auto d = degree_of(p);
  if (!d) return p;
  return from_coordinates(*d, coordinates(p, *d));
}

Poly Presentation::multiply(const Poly& p, const Poly& q) const {
  if (p.is_zero() || q.is_zero()) return {};
  const int d = *degree_of(p) + *degree_of(q);
  check_cap(d);
  return normal_form(raw_product(p, q));
}

Poly Presentation::power(const Poly& p, unsigned exponent) const {
  Poly result = one();
  Poly base = p;
  while (exponent > 0) {
    if (exponent & 1U) result = multiply(result, base);
    exponent >>= 1U;
    if (exponent > 0) base = multiply(base, base);
  }
  return result;
}

Poly Presentation::parse(std::string_view expr) const { return parse_poly(expr, generators_); }

std::string Presentation::format(const Monomial& m) const {
  if (m.exps.size() != arity()) throw ContractViolation("monomial arity does not match presentation");
  std::string out;
  for (std::size_t i = 0; i < arity(); ++i) {
    if (m.exps[i] == 0) continue;
    if (!out.empty()) out += '*';
    out += generators_[i].name;
    if (m.exps[i] > 1) out += '^' + std::to_string(m.exps[i]);
  }
  return out.empty() ? "1" : out;
}

std::string Presentation::format(const Poly& p) const {
  if (p.is_zero()) return "0";
  std::vector<Monomial> terms = p.terms();
  std::stable_sort(terms.begin(), terms.end(),
                   [&](const Monomial& a, const Monomial& b) { return degree(a) > degree(b); });
  std::string out;
  for (const auto& t : terms) {
    if (!out.empty()) out += " + ";
    out += format(t);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Constructions

Poly embed_left(const Poly& p, std::size_t right_arity) {
  std::vector<Monomial> terms;
  for (const auto& t : p.terms()) {
    Monomial m = t;
    m.exps.resize(m.exps.size() + right_arity, 0);
    terms.push_back(std::move(m));
  }
  return Poly::from_terms(std::move(terms));
}

Poly embed_right(const Poly& p, std::size_t left_arity) {
  std::vector<Monomial> terms;
  for (const auto& t : p.terms()) {
    Monomial m{std::vector<std::uint16_t>(left_arity, 0)};
    m.exps.insert(m.exps.end(), t.exps.begin(), t.exps.end());
    terms.push_back(std::move(m));
  }
  return Poly::from_terms(std::move(terms));
}

PresentationPtr tensor(const PresentationPtr& a, const PresentationPtr& b) {
  std::vector<Generator> gens = a->generators();
  std::set<std::string> names;
  for (const auto& g : gens) names.insert(g.name);
  for (Generator g : b->generators()) {
    while (names.count(g.name) != 0) g.name += "_2";
    names.insert(g.name);
    gens.push_back(std::move(g));
  }
  std::vector<Poly> rels;
  for (const auto& r : a->relations()) rels.push_back(embed_left(r, b->arity()));
  for (const auto& r : b->relations()) rels.push_back(embed_right(r, a->arity()));
  return Presentation::create(std::move(gens), std::move(rels), std::min(a->degree_cap(), b->degree_cap()));
}

PresentationPtr rename(const PresentationPtr& a, const std::map<std::string, std::string>& names) {
  std::vector<Generator> gens = a->generators();
  for (auto& g : gens) {
    if (auto it = names.find(g.name); it != names.end()) g.name = it->second;
  }
  return Presentation::create(std::move(gens), a->relations(), a->degree_cap());
}

std::vector<std::size_t> convolve_series(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  const std::size_t n = std::min(a.size(), b.size());
  std::vector<std::size_t> out(n, 0);
  for (std::size_t d = 0; d < n; ++d) {
    for (std::size_t e = 0; e <= d; ++e) out[d] += a[e] * b[d - e];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Morphisms

AlgebraMorphism::AlgebraMorphism(PresentationPtr source, PresentationPtr target, std::vector<Poly> images)
    : source_(std::move(source)), target_(std::move(target)), images_(std::move(images)) {
  if (images_.size() != source_->arity()) {
    throw ContractViolation("morphism needs one image per source generator");
  }
  for (std::size_t i = 0; i < images_.size(); ++i) {
    const Generator& g = source_->generators()[i];
    for (const auto& t : images_[i].terms()) {
      if (t.exps.size() != target_->arity()) {
        throw ContractViolation("image of '" + g.name + "' has wrong arity for the target");
      }
    }
    const auto d = target_->degree_of(images_[i]);
    if (d && *d != g.degree) {
      throw ContractViolation("image of '" + g.name + "' has degree " + std::to_string(*d) + ", expected " +
                              std::to_string(g.degree));
    }
    if (d && *d <= target_->degree_cap()) images_[i] = target_->normal_form(images_[i]);
  }
}

AlgebraMorphism AlgebraMorphism::unchecked(PresentationPtr source, PresentationPtr target, std::vector<Poly> images) {
  return AlgebraMorphism(std::move(source), std::move(target), std::move(images));
}

AlgebraMorphism AlgebraMorphism::create(PresentationPtr source, PresentationPtr target, std::vector<Poly> images) {
  AlgebraMorphism f(std::move(source), std::move(target), std::move(images));
  const auto bad = check_well_defined(f);
  if (!bad.empty()) {
    throw ContractViolation("morphism does not respect relation " + f.source()->format(bad.front()));
  }
  return f;
}

AlgebraMorphism AlgebraMorphism::identity(const PresentationPtr& a) {
  std::vector<Poly> images;
  for (std::size_t i = 0; i < a->arity(); ++i) images.push_back(a->generator(i));
  return AlgebraMorphism(a, a, std::move(images));
}

Poly AlgebraMorphism::apply(const Poly& p) const {
  const Presentation& tgt = *target_;
  Poly out;
  for (const auto& t : p.terms()) {
    if (t.exps.size() != source_->arity()) throw ContractViolation("apply: polynomial not in the source algebra");
    Poly acc = tgt.one();
    for (std::size_t i = 0; i < t.exps.size() && !acc.is_zero(); ++i) {
      if (t.exps[i] == 0) continue;
      acc = tgt.multiply(acc, tgt.power(images_[i], t.exps[i]));
    }
    out += acc;
  }
  return out;
}

F2Matrix AlgebraMorphism::matrix(int d) const {
  return linear_map_matrix(*source_, d, *target_, d, [this](const Poly& p) { return apply(p); });
}

AlgebraMorphism compose(const AlgebraMorphism& after, const AlgebraMorphism& before) {
  if (after.source() != before.target() &&
      (after.source()->generators() != before.target()->generators() ||
       after.source()->relations() != before.target()->relations())) {
    throw ContractViolation("compose: target of the first map is not the source of the second");
  }
  std::vector<Poly> images;
  for (const auto& img : before.images()) images.push_back(after.apply(img));
  return AlgebraMorphism::unchecked(before.source(), after.target(), std::move(images));
}

std::vector<Poly> check_well_defined(const AlgebraMorphism& f) {
  const int cap = std::min(f.source()->degree_cap(), f.target()->degree_cap());
  std::vector<Poly> violations;
  for (const auto& r : f.source()->relations()) {
    // Relations above the working cap cannot be checked and are not used.
    if (*f.source()->degree_of(r) > cap) continue;
    if (!f.apply(r).is_zero()) violations.push_back(r);
  }
  return violations;
}

}  // namespace charclass
