// Command-line front end: check, query, corpus.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "minijif/driver.hpp"

int main(int argc, char** argv) {
  CLI::App app{"minijif: static information-flow checker for MiniJif"};
  app.require_subcommand(1);

  minijif::CheckArgs check;
  std::size_t max_errors = 0;
  auto* check_cmd = app.add_subcommand("check", "Check source files");
  check_cmd->add_option("files", check.files, "MiniJif source files (.mjif)")->required();
  check_cmd->add_flag("--json", check.json, "Emit diagnostics as a JSON array");
  check_cmd->add_option("--hierarchy", check.hierarchy, "Extra trusted delegations");
  check_cmd->add_flag("--no-trust-main", check.no_trust_main,
                      "Do not grant entry classes the authority of every principal");
  auto* max_opt = check_cmd->add_option("--max-errors", max_errors, "Print at most N diagnostics");

  std::string op;
  std::vector<std::string> query_args;
  std::optional<std::string> hierarchy;
  auto* query_cmd = app.add_subcommand("query", "Acts-for and label queries");
  query_cmd->add_option("op", op, "actsfor | leq | join | meet | readers | writers")->required();
  query_cmd->add_option("args", query_args, "Principals or labels");
  query_cmd->add_option("--hierarchy", hierarchy, "Principal hierarchy file");

  std::string dir;
  auto* corpus_cmd = app.add_subcommand("corpus", "Run .mjif files against .expect sidecars");
  corpus_cmd->add_option("dir", dir, "Corpus directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return minijif::kExitFailure;
  }

  if (*check_cmd) {
    if (*max_opt) check.max_errors = max_errors;
    return minijif::cmd_check(check, std::cout, std::cerr);
  }
  if (*query_cmd) return minijif::cmd_query(op, query_args, hierarchy, std::cout, std::cerr);
  return minijif::cmd_corpus(dir, std::cout, std::cerr);
}
