#include <benchmark/benchmark.h>

#include <fstream>
#include <sstream>

#include "gridspec/gridspec.hpp"

namespace {

using namespace gridspec;

std::string loans_spec() {
  std::ifstream in(std::string(GRIDSPEC_FIXTURE_DIR) + "/loans/model.gsx");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// The loans model stretched to `periods` periods and `loans` loans.
std::string scaled_spec(long periods, long loans) {
  std::string s = loans_spec();
  auto swap = [&](const std::string& from, const std::string& to) { s.replace(s.find(from), from.size(), to); };
  swap("bounds time_span: 1 to 12.", "bounds time_span: 1 to " + std::to_string(periods) + ".");
  swap("bounds loans_span: 1 to 4.", "bounds loans_span: 1 to " + std::to_string(loans) + ".");
  return s;
}

/// Inputs in the shape of the loans fixture; month wraps so date() stays valid.
InputBindings scaled_inputs(const CellPlan& plan) {
  InputBindings in;
  for (const auto& cell : plan.inputs) {
    const auto& type = plan.symbols.table(cell.table).result_type;
    if (type == ResultType::Boolean) {
      in[cell] = Value::boolean(true);
    } else if (cell.table == "ceiling") {
      in[cell] = Value::number(20.0 * static_cast<double>(cell.indices[0]));
    } else if (cell.table == "initial_cash") {
      in[cell] = Value::number(100);
    } else if (!cell.indices.empty()) {
      in[cell] = Value::number(static_cast<double>(cell.indices[0] % 17));
    }
  }
  return in;
}

std::string month_safe(std::string s) {
  const std::string from = "date( 2009, t, 1 )";
  if (auto at = s.find(from); at != std::string::npos) s.replace(at, from.size(), "date( 2009, 1, 1 )");
  return s;
}

void BM_Parse(benchmark::State& state) {
  const std::string text = loans_spec();
  for (auto _ : state) benchmark::DoNotOptimize(parse_document(text));
}
BENCHMARK(BM_Parse);

void BM_Analyze(benchmark::State& state) {
  const auto doc = parse_document(month_safe(scaled_spec(state.range(0), 4))).document;
  for (auto _ : state) benchmark::DoNotOptimize(analyze(doc));
}
BENCHMARK(BM_Analyze)->Arg(12)->Arg(120)->Arg(1200);

void BM_Evaluate(benchmark::State& state) {
  const auto analysis = analyze(parse_document(month_safe(scaled_spec(state.range(0), state.range(1)))).document);
  const InputBindings inputs = scaled_inputs(analysis.plan);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(analysis.plan, inputs));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(analysis.plan.rules.size()));
}
BENCHMARK(BM_Evaluate)->Args({12, 4})->Args({120, 16})->Args({480, 16});

void BM_CompileAndVerify(benchmark::State& state) {
  const auto doc = parse_document(month_safe(scaled_spec(state.range(0), 8))).document;
  const auto analysis = analyze(doc);
  const InputBindings inputs = scaled_inputs(analysis.plan);
  const ValueGrid values = evaluate(analysis.plan, inputs);
  for (auto _ : state) {
    const Layout layout = plan_layout(analysis.plan.symbols);
    const Emission e = emit(layout, analysis.plan, values, inputs, doc);
    benchmark::DoNotOptimize(verify_grid(e.formulas, e.values));
  }
}
BENCHMARK(BM_CompileAndVerify)->Arg(12)->Arg(240);

}  // namespace
BENCHMARK_MAIN();
