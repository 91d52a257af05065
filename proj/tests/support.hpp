#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>

#include "commands.hpp"
#include "gridspec/gridspec.hpp"

namespace gridspec::testing {

inline std::filesystem::path fixture_dir(const std::string& name) {
  return std::filesystem::path(GRIDSPEC_FIXTURE_DIR) / name;
}

inline std::string read_text(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << text;
}

/// A parsed, analyzed and evaluated model.
struct Model {
  SpecDocument doc;
  CellPlan plan;
  InputBindings inputs;
  ValueGrid values;

  [[nodiscard]] const Value& at(const std::string& table, std::vector<long> idx = {}) const {
    return values.at(CellId{table, std::move(idx)});
  }
};

inline Model build_model(const std::string& spec, const std::string& inputs_csv) {
  Model m;
  ParseResult parsed = parse_document(spec);
  if (!parsed.ok()) throw std::runtime_error("parse failed: " + format_diagnostic(parsed.diagnostics.front()));
  m.doc = std::move(parsed.document);
  Analysis a = analyze(m.doc);
  if (!a.ok()) {
    for (const auto& d : a.diagnostics)
      if (d.severity == Severity::Error) throw std::runtime_error("analysis failed: " + format_diagnostic(d));
  }
  m.plan = std::move(a.plan);
  auto loaded = cli::parse_inputs(inputs_csv, m.plan);
  if (has_errors(loaded.diagnostics))
    throw std::runtime_error("inputs rejected: " + format_diagnostic(loaded.diagnostics.front()));
  m.inputs = std::move(loaded.bindings);
  m.values = evaluate(m.plan, m.inputs);
  return m;
}

inline Model load_fixture(const std::string& name) {
  return build_model(read_text(fixture_dir(name) / "model.gsx"), read_text(fixture_dir(name) / "inputs.csv"));
}

/// Fresh, empty scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& tag) {
  static std::mt19937_64 rng(std::random_device{}());
  auto p = std::filesystem::temp_directory_path() / ("gridspec-" + tag + "-" + std::to_string(rng()));
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

/// Cash-only model with `n` periods.
inline std::string cash_only_spec(long n) {
  return "bounds time_span: 1 to " + std::to_string(n) +
         ".\n"
         "table expenses_during_period : time_span -> currency.\n"
         "table initial_cash : -> currency.\n"
         "table total_cash_at_start_of_period : time_span -> currency.\n"
         "table total_cash_at_end_of_period : time_span -> currency.\n"
         "total_cash_at_start_of_period[1] = initial_cash[].\n"
         "total_cash_at_start_of_period[t>1] = total_cash_at_end_of_period[t-1].\n"
         "total_cash_at_end_of_period[t] = total_cash_at_start_of_period[t] - expenses_during_period[t].\n";
}

}  // namespace gridspec::testing
