// ultragram: run declarative valuation-theory scenarios.
//
//   ultragram list
//   ultragram echo <file|builtin>
//   ultragram run <file|builtin> [--precision-exp g] [--max-terms n] [--degree-cap n]
//                 [--format text|structured] [--verify] [--seed n]
//
// Exit status: 0 success, 1 parse or validation error, 2 internal error or
// failed verification.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ultragram/error.hpp"
#include "ultragram/scenario.hpp"

namespace {

using namespace ultragram;

Scenario load(const std::string& source) {
  if (source.starts_with("paper:")) return builtin_scenario(source);
  std::ifstream in(source);
  if (!in) throw Error(ErrorCode::UnknownName, "cannot open \"" + source + "\"");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scenario(text.str());
}

bool is_input_error(ErrorCode code) {
  return code == ErrorCode::ParseError || code == ErrorCode::UnknownName ||
         code == ErrorCode::UnsupportedCombination;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact valuation independence, nearest points and defect diagnostics"};
  app.require_subcommand(1);

  auto* list = app.add_subcommand("list", "List built-in scenarios");

  std::string echo_source;
  auto* echo = app.add_subcommand("echo", "Print a scenario in canonical form");
  echo->add_option("scenario", echo_source, "Scenario file or built-in name")->required();

  std::string source;
  std::string precision_exp;
  std::size_t max_terms = 0;
  std::size_t degree_cap = 0;
  std::string format = "text";
  bool verify = false;
  std::uint64_t seed = 1;
  auto* run = app.add_subcommand("run", "Run a scenario");
  run->add_option("scenario", source, "Scenario file or built-in name")->required();
  auto* prec_opt = run->add_option("--precision-exp", precision_exp, "Valuation ceiling, e.g. 40 or (2,0)");
  auto* terms_opt = run->add_option("--max-terms", max_terms, "Terms and greedy steps per query")->check(CLI::PositiveNumber);
  auto* cap_opt = run->add_option("--degree-cap", degree_cap, "Largest basis built by extension analysis")
                      ->check(CLI::PositiveNumber);
  run->add_option("--format", format, "Report format")->check(CLI::IsMember({"text", "structured"}));
  run->add_flag("--verify", verify, "Re-check every witness in the report");
  run->add_option("--seed", seed, "Seed for randomized sampling tasks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*list) {
      for (const auto& name : builtin_names()) {
        std::cout << name << "  " << builtin_scenario(name).doc.value("description", std::string()) << "\n";
      }
      return 0;
    }
    if (*echo) {
      std::cout << load(echo_source).echo();
      return 0;
    }
    const Scenario scenario = load(source);
    RunOptions options;
    if (*prec_opt) options.ceiling = precision_exp;
    if (*terms_opt) options.max_terms = max_terms;
    if (*cap_opt) options.degree_cap = degree_cap;
    options.seed = seed;
    options.verify = verify;
    const Report report = run_scenario(scenario, options);
    std::cout << emit(report, format == "structured" ? ReportFormat::Structured : ReportFormat::Text);
    if (verify && !report.verified) {
      std::cerr << "ultragram: verification failed\n";
      return 2;
    }
    return 0;
  } catch (const Error& e) {
    std::cerr << "ultragram: " << e.what() << "\n";
    return is_input_error(e.code()) ? 1 : 2;
  } catch (const std::exception& e) {
    std::cerr << "ultragram: internal error: " << e.what() << "\n";
    return 2;
  }
}
