// solitonlab command-line tool: verify, classify, catalog-list.

#include <iostream>

#include <CLI11.hpp>

#include "solitonlab/cli.hpp"

namespace {

void add_problem_flags(CLI::App* cmd, solitonlab::cli::Flags& f) {
  cmd->add_option("--family", f.family, "catalog family name (see catalog-list)");
  cmd->add_option("--param", f.params, "family or metric parameter, name=value (repeatable)");
  cmd->add_option("--metric-file", f.metric_file, "config file with [problem], [params], [metric], [box], [tol], [killing]");
  cmd->add_option("--phi", f.phi, "Walker function phi(t,x,y)");
  cmd->add_option("--potential", f.potential, "potential function f");
  cmd->add_option("--lambda", f.lambda, "soliton constant");
  cmd->add_option("--box", f.boxes, "sampling interval, coord=lo:hi (repeatable)");
  cmd->add_option("--seed", f.seed, "sampling seed (default 1)");
}

void add_output_flags(CLI::App* cmd, solitonlab::cli::Flags& f) {
  cmd->add_option("--format", f.format, "text or json")->check(CLI::IsMember({"text", "json"}));
  cmd->add_option("--out", f.out, "write the report to this file");
}

}  // namespace

int main(int argc, char** argv) {
  using namespace solitonlab::cli;
  CLI::App app{"Numerical checks for gradient Ricci solitons on pseudo-Riemannian manifolds"};
  app.require_subcommand(1);

  Flags verify_flags, classify_flags, list_flags;
  auto* verify = app.add_subcommand("verify", "check the soliton equation and derived identities at sample points");
  add_problem_flags(verify, verify_flags);
  verify->add_option("--samples", verify_flags.samples, "number of sample points (default 100)");
  verify->add_option("--tol", verify_flags.tols, "tolerance override, check=value (repeatable)");
  add_output_flags(verify, verify_flags);

  auto* classify = app.add_subcommand("classify", "classify a three-dimensional Walker metric and build its potential");
  add_problem_flags(classify, classify_flags);
  add_output_flags(classify, classify_flags);

  auto* list = app.add_subcommand("catalog-list", "list catalog families");
  add_output_flags(list, list_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfigError;
  }

  Mode mode = Mode::kCatalogList;
  const Flags* flags = &list_flags;
  if (verify->parsed()) {
    mode = Mode::kVerify;
    flags = &verify_flags;
  } else if (classify->parsed()) {
    mode = Mode::kClassify;
    flags = &classify_flags;
  }

  RunConfig cfg;
  try {
    cfg = make_config(mode, *flags);
  } catch (const solitonlab::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
  return run(cfg, std::cout, std::cerr);
}
