// charclass: command-line front end.
//
// Exit codes: 0 ok, 1 contract or usage error, 2 data required,
// 3 verification failure.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "charclass/gysin.hpp"
#include "charclass/primitive.hpp"
#include "charclass/quadbundle.hpp"
#include "charclass/rings.hpp"

using namespace charclass;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr int kSchemaVersion = 1;

struct VerificationFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One report per invocation: text lines for humans, a json object for
// harnesses. json objects keep their keys sorted.
struct Report {
  json doc = json::object();
  std::vector<std::string> lines;

  void line(std::string s) { lines.push_back(std::move(s)); }
};

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

// Explicit flag first, then $CHARCLASS_DATA/<name>.
fs::path data_file(const std::string& flag, const std::string& name, const std::string& what) {
  if (!flag.empty()) return flag;
  if (const char* dir = std::getenv("CHARCLASS_DATA")) {
    const fs::path p = fs::path(dir) / name;
    if (fs::exists(p)) return p;
    throw DataRequired(what + ": " + p.string() + " does not exist");
  }
  throw DataRequired(what + ": pass a file or set CHARCLASS_DATA to a directory holding " + name);
}

std::string even_file_name(int n) { return "bgo" + std::to_string(n) + ".json"; }

std::vector<std::string> format_all(const Presentation& p, const std::vector<Poly>& xs) {
  std::vector<std::string> out;
  for (const auto& x : xs) out.push_back(p.format(x));
  return out;
}

// --- ring --------------------------------------------------------------------

struct RingArgs {
  std::string family;
  int n = 0;
  int max_degree = kDefaultDegreeCap;
  bool poincare = false;
  std::optional<int> basis;
  std::string file;
};

PresentationPtr load_ring(const RingId& id, int cap, const std::string& file) {
  if (id.family != RingFamily::BGO_even) return make_ring(id, cap);
  if (file.empty() && !std::getenv("CHARCLASS_DATA")) return make_ring(id, cap);  // throws DataRequired
  return load_even_presentation(data_file(file, even_file_name(id.n), "H*(" + id.to_string() + ")"), cap)
      .presentation;
}

void run_ring(const RingArgs& a, Report& r) {
  const RingId id = RingId::parse(a.family, a.n);
  const PresentationPtr ring = load_ring(id, a.max_degree, a.file);
  r.doc["ring"] = id.to_string();
  r.line("ring " + id.to_string());

  json gens = json::array();
  std::vector<std::string> gen_text;
  for (const auto& g : ring->generators()) {
    gens.push_back({{"name", g.name}, {"degree", g.degree}});
    gen_text.push_back(g.name + "(" + std::to_string(g.degree) + ")");
  }
  r.doc["generators"] = gens;
  r.line("generators: " + join(gen_text, " "));
  const auto rels = format_all(*ring, ring->relations());
  r.doc["relations"] = rels;
  r.line("relations: " + (rels.empty() ? std::string("(none)") : join(rels, ", ")));

  if (a.poincare) {
    const auto series = ring->poincare_series(a.max_degree);
    r.doc["poincare"] = series;
    std::vector<std::string> s;
    for (auto x : series) s.push_back(std::to_string(x));
    r.line("poincare: " + join(s, ","));
  }
  if (a.basis) {
    if (*a.basis < 0) throw ContractViolation("basis degree must be nonnegative");
    std::vector<std::string> b;
    for (const auto& m : ring->basis(*a.basis)) b.push_back(ring->format(m));
    r.doc["basis"] = {{"degree", *a.basis}, {"elements", b}};
    r.line("basis in degree " + std::to_string(*a.basis) + ":");
    for (const auto& x : b) r.line("  " + x);
  }
}

// --- primitive ---------------------------------------------------------------

TwistStructure load_twist(const std::string& family, int n, int cap, const std::string& file) {
  const RingId id = RingId::parse(family, n);
  if (id.family == RingFamily::BGO_odd) return builtin_mu_odd(n, cap);
  if (id.family == RingFamily::BGO_even) {
    return twist_from_even(load_even_presentation(data_file(file, even_file_name(n), "H*(" + id.to_string() + ")"), cap));
  }
  throw ContractViolation("primitive classes need a GO family, got " + id.to_string());
}

void run_primitive(const std::string& family, int n, int degree, int cap, const std::string& file, Report& r) {
  const TwistStructure t = load_twist(family, n, cap, file);
  const auto basis = format_all(*t.algebra, primitive_basis(t, degree));
  r.doc["ring"] = t.ring.to_string();
  r.doc["degree"] = degree;
  r.doc["basis"] = basis;
  r.line("primitive classes of " + t.ring.to_string() + " in degree " + std::to_string(degree) + ":");
  if (basis.empty()) r.line("  (none)");
  for (const auto& x : basis) r.line("  " + x);
}

// --- delta -------------------------------------------------------------------

struct DeltaArgs {
  int n = 0;
  std::string alpha;
  std::string file;
  std::string target_file;
  int max_degree = kDefaultDegreeCap;
};

DeltaMap build_delta(int n, int cap, const std::string& file, const std::string& target_file) {
  if (n < 2) throw ContractViolation("delta needs rank n >= 2");
  if (n % 2 == 1) {
    const auto target = data_file(target_file, even_file_name(n - 1), "H*(BGO_" + std::to_string(n - 1) + ")");
    return DeltaMap::from_odd(n, load_even_presentation(target, cap), cap);
  }
  const auto source = data_file(file, even_file_name(n), "H*(BGO_" + std::to_string(n) + ")");
  const auto target = data_file(target_file, even_file_name(n - 1), "Gysin pair for BGO_" + std::to_string(n - 1));
  return DeltaMap::from_even(load_even_presentation(source, cap), load_odd_pair(target, cap));
}

// Primitivity is checked before any data file is needed.
Poly checked_alpha(const TwistStructure& t, const std::string& expr, Report& r) {
  const Poly alpha = t.algebra->parse(expr);
  const Poly residue = primitive_residue(t, alpha);
  if (!residue.is_zero()) {
    r.doc["residue"] = t.twisted->format(residue);
    throw ContractViolation("alpha = " + t.algebra->format(alpha) + " is not primitive: mu*(alpha) - p1*(alpha) = " +
                            t.twisted->format(residue));
  }
  return alpha;
}

void run_delta(const DeltaArgs& a, Report& r) {
  if (a.n < 2) throw ContractViolation("delta needs rank n >= 2");
  const std::string family = a.n % 2 == 1 ? "BGO_odd" : "BGO_even";
  const TwistStructure t = load_twist(family, a.n, a.max_degree, a.file);
  const Poly alpha = checked_alpha(t, a.alpha, r);
  r.doc["alpha"] = t.algebra->format(alpha);
  r.doc["n"] = a.n;
  std::string value;
  if (t.algebra->degree_of(alpha).value_or(0) == 0) {
    value = "0";  // d lowers degree, so constants go to zero
  } else {
    const DeltaMap delta = build_delta(a.n, a.max_degree, a.file, a.target_file);
    value = delta.target().base->format(delta(alpha));
  }
  r.doc["delta"] = value;
  r.line("delta(" + t.algebra->format(alpha) + ") = " + value);
}

// --- verify ------------------------------------------------------------------

void run_verify(const std::string& file, int cap, Report& r) {
  const std::string text = read_text_file(file);
  json failures = json::array();
  const json doc = json::parse(text, nullptr, false);
  if (!doc.is_discarded() && doc.is_object() && doc.value("family", "") == "BGO_odd") {
    const GysinDatum g = parse_odd_pair(text, cap, file);
    const ExactnessReport rep = check_exactness(g, cap);
    for (const auto& f : rep.failures) {
      failures.push_back({{"check", "exactness"}, {"degree", f.degree}, {"detail", f.node}, {"witness", f.witness}});
    }
  } else {
    const VerificationReport rep = verify_even_datum(load_even_presentation(file, cap), cap);
    for (const auto& f : rep.failures) {
      failures.push_back({{"check", f.check}, {"degree", f.degree}, {"detail", f.detail}, {"witness", f.witness}});
    }
  }
  r.doc["file"] = file;
  r.doc["max_degree"] = cap;
  r.doc["failures"] = failures;
  r.doc["ok"] = failures.empty();
  for (const auto& f : failures) {
    r.line(f["check"].get<std::string>() + " in degree " + std::to_string(f["degree"].get<int>()) + ": " +
           f["detail"].get<std::string>() +
           (f["witness"].get<std::string>().empty() ? "" : " [witness " + f["witness"].get<std::string>() + "]"));
  }
  if (!failures.empty()) throw VerificationFailed(std::to_string(failures.size()) + " verification failure(s) in " + file);
  r.line("verified " + file + " to degree " + std::to_string(cap));
}

// --- quad --------------------------------------------------------------------

struct QuadArgs {
  std::string triple;
  std::string entries;
  std::string field = "Q";
  long p = 0;
  std::string form;
  std::string alpha;
  std::string file;
  std::string target_file;
  int max_degree = kDefaultDegreeCap;
};

json field_json(const QuadArgs& a) {
  json j{{"field", a.field}};
  if (a.field == "Fp") j["p"] = a.p;
  return j;
}

LocalTriple load_triple(const QuadArgs& a) {
  if (!a.triple.empty() && !a.entries.empty()) throw ContractViolation("give either --triple or --entries, not both");
  if (!a.triple.empty()) return parse_triple_json(read_text_file(a.triple));
  if (a.entries.empty()) throw ContractViolation("a triple is required: --triple FILE or --entries JSON");
  json j = field_json(a);
  try {
    j["entries"] = json::parse(a.entries);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("--entries: ") + e.what());
  }
  return parse_triple_json(j.dump());
}

json reduced_json(const ReducedTriple& red) {
  std::vector<std::string> diag;
  for (const auto& x : red.diagonal) diag.push_back(x.get_str());
  json j{{"field", red.field.to_string()}, {"m", red.m}, {"diagonal", diag}, {"disc", red.disc.get_str()}};
  if (red.field.kind() == Field::Kind::Rationals) j["signature"] = {red.positive, red.negative};
  return j;
}

void reduced_lines(const ReducedTriple& red, Report& r) {
  std::vector<std::string> diag;
  for (const auto& x : red.diagonal) diag.push_back(x.get_str());
  r.line("reduced form over " + red.field.to_string() + ": rank " + std::to_string(red.m) + ", diag(" +
         join(diag, ", ") + "), disc " + red.disc.get_str());
  if (red.field.kind() == Field::Kind::Rationals) {
    r.line("signature: (" + std::to_string(red.positive) + ", " + std::to_string(red.negative) + ")");
  }
}

void run_quad(const std::string& sub, const QuadArgs& a, Report& r) {
  r.doc["subcommand"] = sub;
  if (sub == "model") {
    if (a.form.empty()) throw ContractViolation("quad model needs --form");
    const Field k = a.field == "Fp" ? Field::prime(a.p) : Field::rationals();
    KMatrix q;
    try {
      for (const auto& row : json::parse(a.form)) {
        q.emplace_back();
        for (const auto& x : row) {
          q.back().push_back(k.from(Scalar(x.is_string() ? x.get<std::string>() : x.dump())));
        }
      }
    } catch (const std::exception& e) {
      throw ParseError(std::string("--form: ") + e.what());
    }
    const LocalTriple t = model_triple(k, q);
    r.doc["triple"] = json::parse(triple_to_json(t));
    r.line(triple_to_json(t));
    return;
  }

  const LocalTriple t = load_triple(a);
  r.doc["n"] = t.n();
  if (sub == "profile") {
    const RankProfile p = rank_profile(t);
    const Diagnosis d = is_mildly_degenerating(t);
    r.doc["generic_rank"] = p.generic_rank;
    r.doc["special_rank"] = p.special_rank;
    r.doc["mildly_degenerating"] = d.ok;
    r.doc["diagnosis"] = d.reason;
    r.line("n = " + std::to_string(t.n()) + ", generic rank " + std::to_string(p.generic_rank) + ", special rank " +
           std::to_string(p.special_rank));
    r.line(d.ok ? std::string("mildly degenerating") : "not mildly degenerating: " + d.reason);
  } else if (sub == "mult") {
    const TPoly disc = discriminant(t);
    const int nu = multiplicity(t);
    r.doc["discriminant"] = disc.to_string();
    r.doc["multiplicity"] = nu;
    r.line(std::to_string(nu));
  } else if (sub == "reduce") {
    const ReducedTriple red = reduced_triple(t);
    r.doc["reduced"] = reduced_json(red);
    reduced_lines(red, r);
  } else if (sub == "boundary") {
    if (a.alpha.empty()) throw ContractViolation("quad boundary needs --alpha");
    const Diagnosis d = is_mildly_degenerating(t);
    if (!d.ok) throw ContractViolation("triple is not mildly degenerating: " + d.reason);
    const std::string family = t.n() % 2 == 1 ? "BGO_odd" : "BGO_even";
    const TwistStructure tw = load_twist(family, t.n(), a.max_degree, a.file);
    const Poly alpha = checked_alpha(tw, a.alpha, r);
    const DeltaMap delta = build_delta(t.n(), a.max_degree, a.file, a.target_file);
    const BoundaryOutcome out = degeneration_boundary(delta, alpha, t);
    const Presentation& target = *delta.target().base;
    r.doc["alpha"] = tw.algebra->format(alpha);
    r.doc["nu"] = out.nu;
    r.doc["parity"] = out.parity;
    r.doc["delta"] = target.format(out.delta);
    r.doc["boundary"] = target.format(out.evaluated);
    r.doc["reduced"] = reduced_json(out.reduced);
    r.line("nu = " + std::to_string(out.nu) + ", nu mod 2 = " + std::to_string(out.parity));
    r.line("delta(" + tw.algebra->format(alpha) + ") = " + target.format(out.delta));
    r.line("boundary = " + target.format(out.evaluated));
    reduced_lines(out.reduced, r);
  } else {
    throw ContractViolation("unknown quad subcommand " + sub);
  }
}

void emit_error(bool as_json, const std::string& kind, const std::string& message, const Report& r) {
  std::cerr << "error: " << message << '\n';
  if (as_json) {
    json j = r.doc;
    j["schema_version"] = kSchemaVersion;
    j["status"] = "error";
    j["error"] = {{"kind", kind}, {"message", message}};
    std::cout << j.dump(2) << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"charclass: mod-2 characteristic classes of quadric bundles"};
  app.require_subcommand(1);
  app.fallthrough();
  bool as_json = false;
  app.add_flag("--json", as_json, "structured output");

  RingArgs ring;
  auto* ring_cmd = app.add_subcommand("ring", "generators, relations, Poincare series or a basis");
  ring_cmd->add_option("family", ring.family, "BO, BGL, BGm, BSO, BGO")->required();
  ring_cmd->add_option("n", ring.n, "rank")->required();
  ring_cmd->add_option("--max-degree", ring.max_degree, "degree cap");
  auto* poincare_flag = ring_cmd->add_flag("--poincare", ring.poincare, "Poincare coefficients up to the cap");
  ring_cmd->add_option("--basis", ring.basis, "monomial basis in this degree")->excludes(poincare_flag);
  ring_cmd->add_option("--file", ring.file, "presentation file for even BGO");

  std::string prim_family;
  int prim_n = 0, prim_degree = 0, prim_cap = kDefaultDegreeCap;
  std::string prim_file;
  auto* prim_cmd = app.add_subcommand("primitive", "basis of the primitive classes in one degree");
  prim_cmd->add_option("family", prim_family, "BGO")->required();
  prim_cmd->add_option("n", prim_n, "rank")->required();
  prim_cmd->add_option("--degree", prim_degree, "degree")->required();
  prim_cmd->add_option("--max-degree", prim_cap, "degree cap");
  prim_cmd->add_option("--file", prim_file, "presentation file for even rank");

  DeltaArgs delta;
  auto* delta_cmd = app.add_subcommand("delta", "the degeneration map on a primitive class");
  delta_cmd->add_option("n", delta.n, "rank")->required();
  delta_cmd->add_option("--alpha", delta.alpha, "primitive class")->required();
  delta_cmd->add_option("--target-file", delta.target_file, "data for rank n-1");
  delta_cmd->add_option("--file", delta.file, "presentation file for even n");
  delta_cmd->add_option("--max-degree", delta.max_degree, "degree cap");

  std::string verify_file;
  int verify_cap = kDefaultDegreeCap;
  auto* verify_cmd = app.add_subcommand("verify", "check a presentation or pair file against the Gysin sequence");
  verify_cmd->add_option("--file", verify_file, "data file")->required();
  verify_cmd->add_option("--max-degree", verify_cap, "degree cap");

  std::string quad_sub;
  QuadArgs quad;
  auto* quad_cmd = app.add_subcommand("quad", "degenerating quadratic triples over k[t] at t = 0");
  quad_cmd->add_option("what", quad_sub, "profile | mult | reduce | model | boundary")
      ->required()
      ->check(CLI::IsMember({"profile", "mult", "reduce", "model", "boundary"}));
  quad_cmd->add_option("--triple", quad.triple, "triple JSON file");
  quad_cmd->add_option("--entries", quad.entries, "inline entries, JSON [[[c0,c1,..],..],..]");
  quad_cmd->add_option("--field", quad.field, "Q or Fp (for --entries and --form)")
      ->check(CLI::IsMember({"Q", "Fp"}));
  quad_cmd->add_option("--p", quad.p, "characteristic for Fp");
  quad_cmd->add_option("--form", quad.form, "nondegenerate form for model, JSON matrix");
  quad_cmd->add_option("--alpha", quad.alpha, "primitive class for boundary");
  quad_cmd->add_option("--file", quad.file, "presentation file for even n");
  quad_cmd->add_option("--target-file", quad.target_file, "data for rank n-1");
  quad_cmd->add_option("--max-degree", quad.max_degree, "degree cap");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  Report r;
  std::string command;
  int code = 0;
  try {
    if (*ring_cmd) {
      command = "ring";
      run_ring(ring, r);
    } else if (*prim_cmd) {
      command = "primitive";
      run_primitive(prim_family, prim_n, prim_degree, prim_cap, prim_file, r);
    } else if (*delta_cmd) {
      command = "delta";
      run_delta(delta, r);
    } else if (*verify_cmd) {
      command = "verify";
      run_verify(verify_file, verify_cap, r);
    } else {
      command = "quad";
      run_quad(quad_sub, quad, r);
    }
  } catch (const VerificationFailed& e) {
    r.doc["command"] = command;
    for (const auto& l : r.lines) std::cerr << l << '\n';
    emit_error(as_json, "verification", e.what(), r);
    return 3;
  } catch (const DataRequired& e) {
    code = 2;
    r.doc["command"] = command;
    emit_error(as_json, "data-required", e.what(), r);
  } catch (const UnderdeterminedBoundary& e) {
    code = 2;
    r.doc["command"] = command;
    emit_error(as_json, "data-required",
               std::string(e.what()) + " (unreached: " + join(e.monomials(), ", ") + ")", r);
  } catch (const std::exception& e) {
    // contract violations, parse errors, cap overruns
    code = 1;
    r.doc["command"] = command;
    emit_error(as_json, "contract", e.what(), r);
  }
  if (code != 0) return code;

  if (as_json) {
    r.doc["schema_version"] = kSchemaVersion;
    r.doc["status"] = "ok";
    r.doc["command"] = command;
    std::cout << r.doc.dump(2) << '\n';
  } else {
    for (const auto& l : r.lines) std::cout << l << '\n';
  }
  return 0;
}
