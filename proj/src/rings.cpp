#include "charclass/rings.hpp"

#include <bit>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "charclass/gysin.hpp"
#include "charclass/primitive.hpp"

namespace charclass {

namespace {

using nlohmann::json;

void require_rank(bool ok, const std::string& what) {
  if (!ok) throw ContractViolation(what);
}

std::vector<Generator> w_generators(int from, int to) {
  std::vector<Generator> gens;
  for (int i = from; i <= to; ++i) gens.push_back({"w" + std::to_string(i), i});
  return gens;
}

}  // namespace

RingId RingId::parse(std::string_view family, int n) {
  if (family == "BO") {
    require_rank(n >= 1, "BO_n needs n >= 1");
    return {RingFamily::BO, n};
  }
  if (family == "BGL") {
    require_rank(n >= 1, "BGL_n needs n >= 1");
    return {RingFamily::BGL, n};
  }
  if (family == "BGm") return {RingFamily::BGm, 1};
  if (family == "BSO" || family == "BSO_odd") {
    require_rank(n >= 1 && n % 2 == 1, "BSO_n is only built in for odd n >= 1");
    return {RingFamily::BSO_odd, n};
  }
  if (family == "BGO_odd") {
    require_rank(n >= 1 && n % 2 == 1, "BGO_odd needs odd n >= 1");
    return {RingFamily::BGO_odd, n};
  }
  if (family == "BGO_even") {
    require_rank(n >= 2 && n % 2 == 0, "BGO_even needs even n >= 2");
    return {RingFamily::BGO_even, n};
  }
  if (family == "BGO") {
    require_rank(n >= 1, "BGO_n needs n >= 1");
    return {n % 2 == 1 ? RingFamily::BGO_odd : RingFamily::BGO_even, n};
  }
  throw ContractViolation("unknown ring family '" + std::string(family) +
                          "' (expected BO, BGL, BGm, BSO, BGO)");
}

std::string RingId::to_string() const {
  switch (family) {
    case RingFamily::BO: return "BO_" + std::to_string(n);
    case RingFamily::BGL: return "BGL_" + std::to_string(n);
    case RingFamily::BGm: return "BGm";
    case RingFamily::BSO_odd: return "BSO_" + std::to_string(n);
    case RingFamily::BGO_odd:
    case RingFamily::BGO_even: return "BGO_" + std::to_string(n);
  }
  return "?";
}

PresentationPtr make_BO(int n, int cap) {
  require_rank(n >= 1, "BO_n needs n >= 1");
  return Presentation::free(w_generators(1, n), cap);
}

PresentationPtr make_BGL(int n, int cap) {
  require_rank(n >= 1, "BGL_n needs n >= 1");
  std::vector<Generator> gens;
  for (int i = 1; i <= n; ++i) gens.push_back({"cb" + std::to_string(i), 2 * i});
  return Presentation::free(std::move(gens), cap);
}

PresentationPtr make_BGm(int cap) { return make_BGL(1, cap); }

PresentationPtr make_BSO_odd(int n, int cap) {
  require_rank(n >= 1 && n % 2 == 1, "BSO_n is only built in for odd n >= 1");
  return Presentation::free(w_generators(2, n), cap);
}

PresentationPtr make_BGO_odd(int n, int cap) {
  require_rank(n >= 1 && n % 2 == 1, "BGO_odd needs odd n >= 1");
  return tensor(rename(make_BGm(cap), {{"cb1", "c"}}), make_BSO_odd(n, cap));
}

PresentationPtr make_ring(const RingId& id, int cap) {
  switch (id.family) {
    case RingFamily::BO: return make_BO(id.n, cap);
    case RingFamily::BGL: return make_BGL(id.n, cap);
    case RingFamily::BGm: return make_BGm(cap);
    case RingFamily::BSO_odd: return make_BSO_odd(id.n, cap);
    case RingFamily::BGO_odd: return make_BGO_odd(id.n, cap);
    case RingFamily::BGO_even:
      throw DataRequired("H*(" + id.to_string() +
                         ") needs an even presentation file: JSON {\"family\":\"BGO_even\",\"n\":" +
                         std::to_string(id.n) +
                         ",\"generators\":[...],\"relations\":[...],\"res\":{...},\"mu\":{...},"
                         "\"d_table\":{...},\"provenance\":\"...\"}");
  }
  throw ContractViolation("unknown ring family");
}

AlgebraMorphism chern_to_sw(int n, int cap) {
  const auto bgl = make_BGL(n, cap);
  const auto bo = make_BO(n, cap);
  std::vector<Poly> images;
  for (int i = 1; i <= n; ++i) {
    // w_i^2 has degree 2i; above the cap it cannot be reduced, but the free
    // target has no relations so the raw square is already normal.
    images.push_back(raw_product(bo->generator(static_cast<std::size_t>(i - 1)),
                                 bo->generator(static_cast<std::size_t>(i - 1))));
  }
  return AlgebraMorphism::create(bgl, bo, std::move(images));
}

PresentationPtr twisted_algebra(const PresentationPtr& a) {
  return tensor(a, rename(make_BGm(a->degree_cap()), {{"cb1", std::string(kTwistGenerator)}}));
}

std::vector<Generator> even_generator_inventory(int n) {
  require_rank(n >= 2 && n % 2 == 0, "even presentation needs even n >= 2");
  const int half = n / 2;
  std::vector<Generator> gens{{"lambda", 2}};
  for (int i = 1; i <= half; ++i) gens.push_back({"a" + std::to_string(2 * i - 1), 2 * i - 1});
  for (int j = 1; j <= half; ++j) gens.push_back({"b" + std::to_string(4 * j), 4 * j});
  // d_T for T in {1..half}, |T| >= 2, in order of the subset bitmask.
  for (unsigned mask = 1; mask < (1U << half); ++mask) {
    if (std::popcount(mask) < 2) continue;
    std::string name = "d";
    int sum = 0;
    for (int i = 1; i <= half; ++i) {
      if (mask & (1U << (i - 1))) {
        name += "_" + std::to_string(i);
        sum += i;
      }
    }
    gens.push_back({name, 2 * sum - 1});
  }
  return gens;
}

namespace {

class EvenFileReader {
 public:
  EvenFileReader(std::string_view text, int cap, std::string_view origin) : cap_(cap), origin_(origin) {
    try {
      root_ = json::parse(text);
    } catch (const json::parse_error& e) {
      fail(DataFileError::Kind::Schema, "", std::string("invalid JSON: ") + e.what());
    }
  }

  EvenGODatum read() {
    if (!root_.is_object()) fail(DataFileError::Kind::Schema, "", "top level must be an object");
    const std::string family = string_field(root_, "family", "family");
    if (family != "BGO_even") fail(DataFileError::Kind::Schema, "family", "expected \"BGO_even\", got \"" + family + "\"");
    const int n = int_field(root_, "n", "n");
    if (n < 2 || n % 2 != 0) fail(DataFileError::Kind::Schema, "n", "expected an even rank >= 2");

    std::vector<Generator> gens = read_generators();
    check_inventory(gens, n);

    std::vector<Poly> relations;
    const json& rels = member(root_, "relations", "relations");
    if (!rels.is_array()) fail(DataFileError::Kind::Schema, "relations", "expected an array");
    for (std::size_t k = 0; k < rels.size(); ++k) {
      const std::string loc = "relations[" + std::to_string(k) + "]";
      if (!rels[k].is_string()) fail(DataFileError::Kind::Schema, loc, "expected a polynomial string");
      Poly r = parse_in(rels[k].get<std::string>(), gens, loc);
      if (r.is_zero()) fail(DataFileError::Kind::Schema, loc, "relation is zero");
      relations.push_back(std::move(r));
    }
    // Homogeneity is checked here so the error can name the relation.
    {
      const auto probe = Presentation::free(gens, 0);
      for (std::size_t k = 0; k < relations.size(); ++k) {
        if (!probe->is_homogeneous(relations[k])) {
          fail(DataFileError::Kind::Homogeneity, "relations[" + std::to_string(k) + "]",
               "relation " + probe->format(relations[k]) + " mixes degrees");
        }
      }
    }

    auto presentation = Presentation::create(gens, std::move(relations), cap_);
    auto bo = make_BO(n, cap_);
    auto twisted = twisted_algebra(presentation);

    AlgebraMorphism res = read_morphism("res", presentation, bo);
    AlgebraMorphism mu = read_morphism("mu", presentation, twisted);
    std::vector<DTableEntry> table = read_d_table(*presentation, *bo);

    std::string provenance = string_field(root_, "provenance", "provenance");
    return EvenGODatum{n,     std::move(presentation), std::move(bo), std::move(twisted), std::move(res),
                       std::move(mu), std::move(table), std::move(provenance)};
  }

 private:
  [[noreturn]] void fail(DataFileError::Kind kind, const std::string& where, const std::string& what) const {
    std::string loc(origin_);
    if (!where.empty()) loc += ": " + where;
    throw DataFileError(kind, loc, what);
  }

  const json& member(const json& obj, const char* key, const std::string& loc) const {
    auto it = obj.find(key);
    if (it == obj.end()) fail(DataFileError::Kind::Schema, loc, "missing field");
    return *it;
  }

  std::string string_field(const json& obj, const char* key, const std::string& loc) const {
    const json& v = member(obj, key, loc);
    if (!v.is_string()) fail(DataFileError::Kind::Schema, loc, "expected a string");
    return v.get<std::string>();
  }

  int int_field(const json& obj, const char* key, const std::string& loc) const {
    const json& v = member(obj, key, loc);
    if (!v.is_number_integer()) fail(DataFileError::Kind::Schema, loc, "expected an integer");
    return v.get<int>();
  }

  Poly parse_in(const std::string& text, const std::vector<Generator>& gens, const std::string& loc) const {
    try {
      return parse_poly(text, gens);
    } catch (const ParseError& e) {
      fail(DataFileError::Kind::Schema, loc, e.what());
    }
  }

  std::vector<Generator> read_generators() const {
    const json& arr = member(root_, "generators", "generators");
    if (!arr.is_array()) fail(DataFileError::Kind::Schema, "generators", "expected an array");
    std::vector<Generator> gens;
    for (std::size_t k = 0; k < arr.size(); ++k) {
      const std::string loc = "generators[" + std::to_string(k) + "]";
      if (!arr[k].is_object()) fail(DataFileError::Kind::Schema, loc, "expected {\"name\":..., \"degree\":...}");
      gens.push_back({string_field(arr[k], "name", loc + ".name"), int_field(arr[k], "degree", loc + ".degree")});
    }
    return gens;
  }

  void check_inventory(const std::vector<Generator>& gens, int n) const {
    const auto expected = even_generator_inventory(n);
    std::map<std::string, int> want;
    for (const auto& g : expected) want[g.name] = g.degree;
    std::set<std::string> seen;
    for (std::size_t k = 0; k < gens.size(); ++k) {
      const std::string loc = "generators[" + std::to_string(k) + "]";
      const auto& g = gens[k];
      auto it = want.find(g.name);
      if (it == want.end()) fail(DataFileError::Kind::Inventory, loc, "unexpected generator '" + g.name + "'");
      if (it->second != g.degree) {
        fail(DataFileError::Kind::Inventory, loc,
             "generator '" + g.name + "' must have degree " + std::to_string(it->second));
      }
      if (!seen.insert(g.name).second) fail(DataFileError::Kind::Inventory, loc, "duplicate generator '" + g.name + "'");
    }
    for (const auto& g : expected) {
      if (seen.count(g.name) == 0) {
        fail(DataFileError::Kind::Inventory, "generators", "missing generator '" + g.name + "'");
      }
    }
  }

  AlgebraMorphism read_morphism(const char* key, const PresentationPtr& source, const PresentationPtr& target) const {
    const json& obj = member(root_, key, key);
    if (!obj.is_object()) fail(DataFileError::Kind::Schema, key, "expected an object keyed by generator");
    std::vector<Poly> images(source->arity());
    std::vector<bool> have(source->arity(), false);
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      const std::string loc = std::string(key) + "." + it.key();
      const auto idx = source->index_of(it.key());
      if (!idx) fail(DataFileError::Kind::Schema, loc, "not a generator");
      if (!it.value().is_string()) fail(DataFileError::Kind::Schema, loc, "expected a polynomial string");
      Poly img = parse_in(it.value().get<std::string>(), target->generators(), loc);
      const int want = source->generators()[*idx].degree;
      if (!target->is_homogeneous(img)) fail(DataFileError::Kind::Homogeneity, loc, "image is not homogeneous");
      if (!img.is_zero() && target->degree(img.terms().front()) != want) {
        fail(DataFileError::Kind::Degree, loc, "image must have degree " + std::to_string(want));
      }
      images[*idx] = std::move(img);
      have[*idx] = true;
    }
    for (std::size_t i = 0; i < have.size(); ++i) {
      if (!have[i]) fail(DataFileError::Kind::Schema, key, "no image for '" + source->generators()[i].name + "'");
    }
    return AlgebraMorphism::unchecked(source, target, std::move(images));
  }

  std::vector<DTableEntry> read_d_table(const Presentation& a, const Presentation& bo) const {
    const json& obj = member(root_, "d_table", "d_table");
    if (!obj.is_object()) fail(DataFileError::Kind::Schema, "d_table", "expected an object");
    std::vector<DTableEntry> table;
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      const std::string loc = "d_table." + it.key();
      Poly src = parse_in(it.key(), bo.generators(), loc);
      if (src.size() != 1) fail(DataFileError::Kind::Schema, loc, "key must be a single monomial in w_i");
      if (!it.value().is_string()) fail(DataFileError::Kind::Schema, loc, "expected a polynomial string");
      Poly value = parse_in(it.value().get<std::string>(), a.generators(), loc);
      if (!a.is_homogeneous(value)) fail(DataFileError::Kind::Homogeneity, loc, "value is not homogeneous");
      const int want = bo.degree(src.terms().front()) - 1;
      if (!value.is_zero() && a.degree(value.terms().front()) != want) {
        fail(DataFileError::Kind::Degree, loc, "value must have degree " + std::to_string(want));
      }
      table.push_back({std::move(src), std::move(value)});
    }
    return table;
  }

  json root_;
  int cap_;
  std::string origin_;
};

}  // namespace

EvenGODatum parse_even_presentation(std::string_view json_text, int cap, std::string_view origin) {
  return EvenFileReader(json_text, cap, origin).read();
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataRequired("cannot read data file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

EvenGODatum load_even_presentation(const std::filesystem::path& path, int cap) {
  return parse_even_presentation(read_text_file(path), cap, path.filename().string());
}

VerificationReport verify_even_datum(const EvenGODatum& datum, int cap) {
  VerificationReport report;
  report.cap = cap;
  const Presentation& a = *datum.presentation;
  if (cap > a.degree_cap() || cap > datum.bo->degree_cap()) throw CapExceeded(cap, a.degree_cap());

  auto add = [&](std::string check, int degree, std::string detail, std::string witness) {
    report.failures.push_back({std::move(check), degree, std::move(detail), std::move(witness)});
  };

  for (const auto& r : check_well_defined(datum.res)) {
    add("res-well-defined", *a.degree_of(r), "relation does not map to 0 in H*(BO_n)", a.format(r));
  }
  for (const auto& r : check_well_defined(datum.mu)) {
    add("mu-well-defined", *a.degree_of(r), "relation does not map to 0 under mu*", a.format(r));
  }
  const TwistStructure twist = twist_from_even(datum);
  for (const auto& g : counit_violations(twist)) {
    add("mu-counit", a.generators()[*a.index_of(g)].degree, "cK -> 0 does not recover the generator", g);
  }

  // Exactness is checked up to the first degree where d runs out of table.
  const GysinDatum pair = even_gysin_datum(datum);
  int exact_cap = cap;
  try {
    for (int i = 0; i <= cap; ++i) boundary_matrix(pair, i);
  } catch (const UnderdeterminedBoundary& e) {
    std::string monos;
    for (const auto& m : e.monomials()) monos += (monos.empty() ? "" : ", ") + m;
    add("d-underdetermined", e.degree(), e.what(), monos);
    exact_cap = e.degree() - 1;
  }
  if (exact_cap >= 0) {
    for (const auto& f : check_exactness(pair, exact_cap).failures) add("exactness", f.degree, f.node, f.witness);
  }

  auto lookup = [&](const Poly& source) -> const DTableEntry* {
    for (const auto& e : datum.d_table) {
      if (e.source == source) return &e;
    }
    return nullptr;
  };
  const Presentation& bo = *datum.bo;
  for (const auto& g : even_generator_inventory(datum.n)) {
    if (g.name == "lambda" || g.name[0] == 'b' || g.degree > cap) continue;
    // a_{2i-1} = d(w_{2i}); d_i_j_.. = d(w_{2i} w_{2j} ...)
    std::vector<int> indices;
    if (g.name[0] == 'a') {
      indices.push_back((g.degree + 1) / 2);
    } else {
      std::stringstream ss(g.name.substr(2));
      std::string part;
      while (std::getline(ss, part, '_')) indices.push_back(std::stoi(part));
    }
    Poly source = bo.one();
    for (int i : indices) source = raw_product(source, bo.generator(static_cast<std::size_t>(2 * i - 1)));
    const std::string key = bo.format(source);
    const DTableEntry* e = lookup(source);
    if (e == nullptr) {
      add("definitional-value", g.degree, "d_table has no entry for d(" + key + ")", key);
    } else if (a.normal_form(e->value) != a.generator(g.name)) {
      add("definitional-value", g.degree, "d(" + key + ") must be " + g.name, a.format(e->value));
    }
  }
  return report;
}

}  // namespace charclass
