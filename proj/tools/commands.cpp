#include "commands.hpp"

#include <cctype>
#include <cmath>
#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>

#include "gridspec/emit.hpp"
#include "gridspec/layout.hpp"
#include "gridspec/parser.hpp"
#include "gridspec/verify.hpp"

namespace gridspec::cli {
namespace {

constexpr std::size_t kMaxListedMismatches = 20;

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::optional<std::string> read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) return std::nullopt;
  return ss.str();
}

std::optional<long> parse_long(std::string_view s) {
  long v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) return std::nullopt;
  return v;
}

std::optional<Value> parse_input_value(std::string_view text, ResultType type) {
  std::string lower(text);
  for (auto& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  std::optional<Value> boolean;
  if (lower == "true") boolean = Value::boolean(true);
  if (lower == "false") boolean = Value::boolean(false);
  std::optional<Value> date;
  if (auto d = parse_date(text)) date = Value::date(*d);
  std::optional<Value> number;
  double x = 0;
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), x);
  if (!text.empty() && ec == std::errc{} && p == text.data() + text.size() && std::isfinite(x)) number = Value::number(x);

  switch (type) {
    case ResultType::Boolean: return boolean;
    case ResultType::Date: return date;
    case ResultType::General:
      if (number) return number;
      if (boolean) return boolean;
      return date;
    case ResultType::Number:
    case ResultType::Currency: return number;
  }
  return std::nullopt;
}

void print(std::ostream& os, const Diagnostics& diags) {
  for (const auto& d : diags) os << format_diagnostic(d) << '\n';
}

void io_error(std::ostream& err, const std::string& message) { err << "error IoError 1:1 " << message << '\n'; }

/// Everything up to (but not including) evaluation.
struct Frontend {
  SpecDocument doc;
  Analysis analysis;
  Layout layout;
  InputBindings inputs;
};

int load_frontend(const RunConfig& config, std::ostream& err, Frontend& fe) {
  auto text = read_file(config.spec_path);
  if (!text) {
    io_error(err, "cannot read specification '" + config.spec_path + "'");
    return kIoError;
  }
  ParseResult parsed = parse_document(*text);
  print(err, parsed.diagnostics);
  if (!parsed.ok()) return kSpecError;
  fe.doc = std::move(parsed.document);

  fe.analysis = analyze(fe.doc);
  print(err, fe.analysis.diagnostics);
  if (!fe.analysis.ok()) return kSpecError;

  try {
    fe.layout = plan_layout(fe.analysis.plan.symbols, LayoutOptions{config.caption_table});
  } catch (const LayoutError& e) {
    err << "error " << e.code() << " 1:1 " << e.what() << '\n';
    return kSpecError;
  }

  if (config.inputs_path) {
    LoadedInputs loaded;
    try {
      loaded = load_inputs(*config.inputs_path, fe.analysis.plan);
    } catch (const std::exception& e) {
      io_error(err, e.what());
      return kIoError;
    }
    print(err, loaded.diagnostics);
    if (has_errors(loaded.diagnostics)) return kSpecError;
    fe.inputs = std::move(loaded.bindings);
  }
  return kOk;
}

int run_evaluation(const Frontend& fe, std::ostream& err, ValueGrid& values) {
  try {
    values = evaluate(fe.analysis.plan, fe.inputs);
  } catch (const CycleError& e) {
    err << "error CyclicDependency 1:1 " << e.what() << '\n';
    return kRuntimeError;
  } catch (const EvalError& e) {
    err << "error " << e.code() << " 1:1 " << e.what() << '\n';
    return kRuntimeError;
  }
  return kOk;
}

}  // namespace

LoadedInputs parse_inputs(std::string_view csv_text, const CellPlan& plan) {
  LoadedInputs out;
  std::vector<std::vector<std::string>> records;
  try {
    records = parse_csv_records(csv_text);
  } catch (const std::exception& e) {
    out.diagnostics.push_back(make_error("BadValue", e.what(), SourcePos{}));
    return out;
  }
  const auto& symbols = plan.symbols;
  for (std::size_t r = 0; r < records.size(); ++r) {
    const SourcePos pos{static_cast<int>(r + 1), 1, 0};
    std::vector<std::string> fields;
    for (const auto& f : records[r]) fields.push_back(trim(f));
    if (fields.size() == 1 && fields[0].empty()) continue;

    const std::string& table = fields[0];
    auto t = symbols.tables.find(table);
    if (t == symbols.tables.end()) {
      out.diagnostics.push_back(make_error("UnknownTable", "unknown table '" + table + "'", pos));
      continue;
    }
    if (classify(symbols, table) == TableClass::Derived) {
      out.diagnostics.push_back(
          make_error("BindingToDerivedTable", "'" + table + "' is defined by equations and cannot be bound", pos));
      continue;
    }
    const std::size_t arity = t->second.dims.size();
    if (fields.size() != arity + 2) {
      out.diagnostics.push_back(make_error("BadArity",
                                           "'" + table + "' needs " + std::to_string(arity) +
                                               " index field(s) and a value, got " + std::to_string(fields.size() - 1) +
                                               " field(s)",
                                           pos));
      continue;
    }
    CellId cell{table, {}};
    bool ok = true;
    for (std::size_t k = 0; k < arity; ++k) {
      auto idx = parse_long(fields[k + 1]);
      if (!idx) {
        out.diagnostics.push_back(make_error("BadValue", "index '" + fields[k + 1] + "' is not an integer", pos));
        ok = false;
        break;
      }
      const BoundsInfo& b = symbols.bounds.at(t->second.dims[k]);
      if (!b.contains(*idx)) {
        out.diagnostics.push_back(make_error("IndexOutOfBounds",
                                             "index " + std::to_string(*idx) + " of '" + table + "' is outside " +
                                                 t->second.dims[k],
                                             pos));
        ok = false;
        break;
      }
      cell.indices.push_back(*idx);
    }
    if (!ok) continue;
    auto v = parse_input_value(fields.back(), t->second.result_type);
    if (!v) {
      out.diagnostics.push_back(make_error("BadValue",
                                           "'" + fields.back() + "' is not a valid " +
                                               std::string(result_type_name(t->second.result_type)) + " value",
                                           pos));
      continue;
    }
    if (!out.bindings.emplace(cell, *v).second) {
      out.diagnostics.push_back(make_error("DuplicateBinding", to_string(cell) + " is bound more than once", pos));
    }
  }
  return out;
}

LoadedInputs load_inputs(const std::filesystem::path& path, const CellPlan& plan) {
  auto text = read_file(path);
  if (!text) throw std::runtime_error("cannot read inputs '" + path.string() + "'");
  return parse_inputs(*text, plan);
}

int cmd_check(const RunConfig& config, std::ostream& out, std::ostream& err) {
  Frontend fe;
  if (int rc = load_frontend(config, err, fe); rc != kOk) return rc;
  const auto& plan = fe.analysis.plan;
  out << "ok: " << plan.symbols.tables.size() << " tables, " << plan.rules.size() << " derived cells, "
      << plan.inputs.size() << " input cells\n";
  return kOk;
}

int cmd_eval(const RunConfig& config, std::ostream& out, std::ostream& err) {
  Frontend fe;
  if (int rc = load_frontend(config, err, fe); rc != kOk) return rc;
  ValueGrid values;
  if (int rc = run_evaluation(fe, err, values); rc != kOk) return rc;
  const GridDocument doc = emit_values(fe.layout, fe.analysis.plan, values);
  const std::string model = to_csv(doc.at(std::string(kModelSheet)));
  try {
    if (config.out_dir) {
      write_values(doc, *config.out_dir);
    } else if (config.out_path) {
      std::ofstream f(*config.out_path, std::ios::binary | std::ios::trunc);
      if (!f) throw std::runtime_error("cannot write '" + *config.out_path + "'");
      f << model;
      f.close();
      if (!f) throw std::runtime_error("failed writing '" + *config.out_path + "'");
    } else {
      out << model;
    }
  } catch (const std::exception& e) {
    io_error(err, e.what());
    return kIoError;
  }
  return kOk;
}

int cmd_compile(const RunConfig& config, std::ostream& out, std::ostream& err) {
  if (!config.out_dir) {
    io_error(err, "compile needs --out-dir");
    return kIoError;
  }
  Frontend fe;
  if (int rc = load_frontend(config, err, fe); rc != kOk) return rc;
  ValueGrid values;
  if (int rc = run_evaluation(fe, err, values); rc != kOk) return rc;
  try {
    const Emission e = emit(fe.layout, fe.analysis.plan, values, fe.inputs, fe.doc);
    write_emission(e, *config.out_dir);
  } catch (const LayoutError& e) {
    err << "error " << e.code() << " 1:1 " << e.what() << '\n';
    return kSpecError;
  } catch (const std::exception& e) {
    io_error(err, e.what());
    return kIoError;
  }
  out << "wrote " << *config.out_dir << '\n';
  return kOk;
}

int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const std::string dir = config.out_dir.value_or(config.spec_path);
  EmittedDirectory emitted;
  try {
    emitted = read_emitted_directory(dir);
  } catch (const std::exception& e) {
    io_error(err, e.what());
    return kIoError;
  }
  const VerifyReport report = verify_grid(emitted.formulas, emitted.values);

  std::size_t derived = 0;
  for (const auto& t : emitted.manifest.tables) {
    if (t.table_class != TableClass::Derived) continue;
    derived += static_cast<std::size_t>(t.last.row - t.first.row + 1) * static_cast<std::size_t>(t.last.column - t.first.column + 1);
  }

  out << "checks: " << report.checks << '\n';
  out << "derived cells: " << derived << '\n';
  out << "mismatches: " << report.mismatches.size() << '\n';
  for (std::size_t i = 0; i < report.mismatches.size() && i < kMaxListedMismatches; ++i) {
    const auto& m = report.mismatches[i];
    out << "  " << to_a1(m.address) << ' ' << m.formula << " recorded '" << m.recorded << "' recomputed '"
        << m.recomputed << "'\n";
  }
  if (report.checks != derived) {
    out << "check count " << report.checks << " does not match derived cell count " << derived << '\n';
    return kSpecError;
  }
  return report.ok() ? kOk : kSpecError;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  switch (config.command) {
    case Command::Check: return cmd_check(config, out, err);
    case Command::Eval: return cmd_eval(config, out, err);
    case Command::Compile: return cmd_compile(config, out, err);
    case Command::Verify: return cmd_verify(config, out, err);
  }
  return kIoError;
}

}  // namespace gridspec::cli
