#pragma once

// Cohomology rings of classifying stacks with F2 coefficients over a
// separably closed field, and the loader for even-rank BGO presentations.
//
//   BO_n        F2[w1..wn],            deg wi = i
//   BGL_n       F2[cb1..cbn],          deg cbi = 2i   (mod 2 Chern classes)
//   BGm         BGL_1
//   BSO_n       F2[w2..wn],            n odd
//   BGO_n       F2[c] (x) BSO_n,       n odd
//   BGO_n       loaded from a file,    n even
//
// Even-rank relations are not built in; they come from a presentation file
// that has to pass verify_even_datum().

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "charclass/errors.hpp"
#include "charclass/gralg.hpp"

namespace charclass {

enum class RingFamily { BO, BGL, BGm, BSO_odd, BGO_odd, BGO_even };

struct RingId {
  RingFamily family;
  int n;

  // Accepts BO, BGL, BGm, BSO, BGO (odd/even chosen from n) and the explicit
  // BSO_odd, BGO_odd, BGO_even. Throws ContractViolation for a bad rank.
  static RingId parse(std::string_view family, int n);
  std::string to_string() const;
};

PresentationPtr make_BO(int n, int cap = kDefaultDegreeCap);
PresentationPtr make_BGL(int n, int cap = kDefaultDegreeCap);
PresentationPtr make_BGm(int cap = kDefaultDegreeCap);
PresentationPtr make_BSO_odd(int n, int cap = kDefaultDegreeCap);
PresentationPtr make_BGO_odd(int n, int cap = kDefaultDegreeCap);
// Built-in rings only; BGO_even throws DataRequired.
PresentationPtr make_ring(const RingId& id, int cap = kDefaultDegreeCap);

// BGL_n -> BO_n induced by O_n in GL_n: cb_i -> w_i^2.
AlgebraMorphism chern_to_sw(int n, int cap = kDefaultDegreeCap);

// Name of the BGm generator in twisted algebras A (x) BGm.
inline constexpr std::string_view kTwistGenerator = "cK";

// A (x) F2[cK].
PresentationPtr twisted_algebra(const PresentationPtr& a);

// Boundary value d(source) = value of a Gysin pair, source in the complement
// ring and value in the base ring.
struct DTableEntry {
  Poly source;
  Poly value;
};

// Generators lambda, a_{2i-1}, b_{4j}, d_T with their degrees, in the order
// files are expected to list them (any order is accepted on load).
std::vector<Generator> even_generator_inventory(int n);

struct EvenGODatum {
  int n = 0;
  PresentationPtr presentation;
  PresentationPtr bo;       // make_BO(n)
  PresentationPtr twisted;  // presentation (x) F2[cK]
  AlgebraMorphism res;      // presentation -> bo
  AlgebraMorphism mu;       // presentation -> twisted
  std::vector<DTableEntry> d_table;
  std::string provenance;
};

class DataFileError : public ParseError {
 public:
  enum class Kind { Schema, Inventory, Homogeneity, Degree };

  DataFileError(Kind kind, std::string location, const std::string& what)
      : ParseError(location + ": " + what), kind_(kind), location_(std::move(location)) {}
  Kind kind() const { return kind_; }
  const std::string& location() const { return location_; }

 private:
  Kind kind_;
  std::string location_;
};

// Parses the JSON text of an even presentation file. Structural checks only
// (schema, inventory, homogeneity, degrees); semantic checks live in
// verify_even_datum().
EvenGODatum parse_even_presentation(std::string_view json_text, int cap = kDefaultDegreeCap,
                                    std::string_view origin = "<input>");
EvenGODatum load_even_presentation(const std::filesystem::path& path, int cap = kDefaultDegreeCap);

struct VerificationFailure {
  std::string check;  // e.g. "res-well-defined", "exactness", "definitional-value"
  int degree = 0;
  std::string detail;
  std::string witness;
};

struct VerificationReport {
  int cap = 0;
  std::vector<VerificationFailure> failures;
  bool ok() const { return failures.empty(); }
};

// Well-definedness of res and mu, the counit law for mu, Gysin exactness of
// (presentation, lambda, BO_n), and the defining values a_{2i-1} = d(w_{2i}),
// d_T = d(prod w_{2i}) in the d-table.
VerificationReport verify_even_datum(const EvenGODatum& datum, int cap);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace charclass
