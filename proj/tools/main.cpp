#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"

int main(int argc, char** argv) {
  using gridspec::cli::Command;
  using gridspec::cli::RunConfig;

  CLI::App app{"gridspec: check, evaluate, compile and verify spreadsheet specifications"};
  app.require_subcommand(1);

  RunConfig config;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("spec", config.spec_path, "Specification file (.gsx)")->required();
    sub->add_option("--caption-table", config.caption_table, "Table to use as row captions (default: time)");
  };

  auto* check = app.add_subcommand("check", "Parse and analyze a specification");
  add_common(check);
  check->add_option("--inputs", config.inputs_path, "Input bindings CSV to validate");

  auto* eval = app.add_subcommand("eval", "Evaluate a specification and write the values grid");
  add_common(eval);
  eval->add_option("--inputs", config.inputs_path, "Input bindings CSV");
  eval->add_option("--out", config.out_path, "Write the Model sheet values CSV here");
  eval->add_option("--out-dir", config.out_dir, "Write <sheet>.values.csv for every sheet here");

  auto* compile = app.add_subcommand("compile", "Compile to formula and value grids plus a manifest");
  add_common(compile);
  compile->add_option("--inputs", config.inputs_path, "Input bindings CSV");
  compile->add_option("--out-dir", config.out_dir, "Output directory")->required();

  auto* verify = app.add_subcommand("verify", "Re-check an emitted directory formula by formula");
  verify->add_option("dir", config.spec_path, "Emitted directory");
  verify->add_option("--out-dir", config.out_dir, "Emitted directory (alternative to the positional form)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return gridspec::cli::kIoError;
  }

  if (*check) config.command = Command::Check;
  if (*eval) config.command = Command::Eval;
  if (*compile) config.command = Command::Compile;
  if (*verify) {
    config.command = Command::Verify;
    if (config.spec_path.empty() && !config.out_dir) {
      std::cerr << "error IoError 1:1 verify needs a directory\n";
      return gridspec::cli::kIoError;
    }
  }
  return gridspec::cli::run(config, std::cout, std::cerr);
}
