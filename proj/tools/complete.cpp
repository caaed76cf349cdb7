// Fills in the relations of an even presentation skeleton (a presentation
// file without "relations") by the completion search, then verifies the
// result before writing it.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "charclass/gysin.hpp"
#include "charclass/rings.hpp"

using namespace charclass;
using nlohmann::ordered_json;

int main(int argc, char** argv) {
  CLI::App app{"charclass-complete: search relations for an even presentation skeleton"};
  std::string skeleton_path;
  std::string out_path;
  int cap = 12;
  int verify_cap = kDefaultDegreeCap;
  app.add_option("skeleton", skeleton_path, "skeleton JSON")->required()->check(CLI::ExistingFile);
  app.add_option("-o,--output", out_path, "where to write the completed file (default: stdout)");
  app.add_option("--cap", cap, "search degree cap");
  app.add_option("--verify-cap", verify_cap, "degree cap for the final verification");
  CLI11_PARSE(app, argc, argv);

  try {
    ordered_json doc = ordered_json::parse(read_text_file(skeleton_path));
    const int n = doc.at("n").get<int>();

    CompletionProblem problem;
    for (const auto& g : doc.at("generators")) {
      problem.generators.push_back({g.at("name").get<std::string>(), g.at("degree").get<int>()});
    }
    problem.euler = "lambda";
    problem.complement = make_BO(n, cap);
    for (const auto& g : problem.generators) problem.res.push_back(doc.at("res").at(g.name).get<std::string>());
    for (auto it = doc.at("d_table").begin(); it != doc.at("d_table").end(); ++it) {
      problem.d_table.emplace_back(it.key(), it.value().get<std::string>());
    }
    problem.cap = cap;

    const CompletionResult result = complete_presentation(problem);
    for (const auto& line : result.log) std::cerr << line << '\n';
    if (!result.found) {
      std::cerr << "no presentation found\n";
      return 3;
    }

    ordered_json out;
    for (auto it = doc.begin(); it != doc.end(); ++it) {
      out[it.key()] = it.value();
      if (it.key() == "generators") {
        out["relations"] = ordered_json::array();
        for (const auto& r : result.relations) out["relations"].push_back(result.presentation->format(r));
      }
    }
    const std::string text = out.dump(2) + "\n";

    const EvenGODatum datum = parse_even_presentation(text, verify_cap, "completed");
    const VerificationReport report = verify_even_datum(datum, verify_cap);
    for (const auto& f : report.failures) {
      std::cerr << f.check << " degree " << f.degree << ": " << f.detail << " [" << f.witness << "]\n";
    }
    if (!report.ok()) {
      std::cerr << "completed presentation fails verification\n";
      return 3;
    }

    if (out_path.empty()) {
      std::cout << text;
    } else {
      std::ofstream(out_path) << text;
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
