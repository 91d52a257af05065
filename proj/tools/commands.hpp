#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "gridspec/analyzer.hpp"
#include "gridspec/evaluator.hpp"
#include "gridspec/source.hpp"

namespace gridspec::cli {

enum ExitCode : int {
  kOk = 0,
  kSpecError = 1,  // parse/analysis errors, or verification mismatches
  kIoError = 2,
  kRuntimeError = 3,  // runtime fault or dependency cycle
};

enum class Command { Check, Eval, Compile, Verify };

struct RunConfig {
  Command command = Command::Check;
  std::string spec_path;  // for verify: the emitted directory
  std::optional<std::string> inputs_path;
  std::optional<std::string> out_path;
  std::optional<std::string> out_dir;
  std::optional<std::string> caption_table;
};

struct LoadedInputs {
  InputBindings bindings;
  Diagnostics diagnostics;
};

/// Records are `table,i1,...,ik,value` with k the table's arity. Values are
/// numbers, true/false, or YYYY-MM-DD dates. No header row.
[[nodiscard]] LoadedInputs parse_inputs(std::string_view csv_text, const CellPlan& plan);

/// Throws std::runtime_error if the file cannot be read.
[[nodiscard]] LoadedInputs load_inputs(const std::filesystem::path& path, const CellPlan& plan);

int cmd_check(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_eval(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_compile(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err);

int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace gridspec::cli
