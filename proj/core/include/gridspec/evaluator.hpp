#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "gridspec/analyzer.hpp"
#include "gridspec/ast.hpp"
#include "gridspec/value.hpp"

namespace gridspec {

/// A runtime fault: bad builtin arguments, incoherent operand types, an
/// unknown function reached at run time, or (as CycleError) a dependency cycle.
class EvalError : public std::runtime_error {
 public:
  EvalError(std::string code, const std::string& message, std::optional<CellId> cell = std::nullopt);

  [[nodiscard]] const std::string& code() const noexcept { return code_; }
  [[nodiscard]] const std::optional<CellId>& cell() const noexcept { return cell_; }
  [[nodiscard]] const std::string& detail() const noexcept { return detail_; }

 private:
  std::string code_;
  std::string detail_;
  std::optional<CellId> cell_;
};

class CycleError : public EvalError {
 public:
  explicit CycleError(std::vector<CellId> path);
  /// First and last entries are the same cell.
  [[nodiscard]] const std::vector<CellId>& path() const noexcept { return path_; }

 private:
  std::vector<CellId> path_;
};

// ---------------------------------------------------------------------------
// Builtins
// ---------------------------------------------------------------------------

/// A builtin argument: a scalar or a range (an `all` reference or an A1 range).
using Argument = std::variant<Value, std::vector<Value>>;

/// Strict application of if/or/and/not/isna/sum/match/date to already
/// evaluated arguments. Expression evaluation keeps `if` lazy by choosing the
/// branch before evaluating it.
[[nodiscard]] Value apply_builtin(std::string_view name, std::span<const Argument> args);

[[nodiscard]] bool is_builtin(std::string_view name);

// ---------------------------------------------------------------------------
// Expression evaluation
// ---------------------------------------------------------------------------

/// Supplies reference values to the expression evaluator, so the same
/// semantics serve table-element expressions and A1 formulas.
class ReferenceResolver {
 public:
  virtual ~ReferenceResolver() = default;
  /// An ElementRef without `all`, or a CellRef.
  [[nodiscard]] virtual Value cell(const Expr& ref) const = 0;
  /// An ElementRef with `all`, or a RangeRef.
  [[nodiscard]] virtual std::vector<Value> range(const Expr& ref) const = 0;
  /// Value of an index variable used as a number.
  [[nodiscard]] virtual std::optional<long> index_variable(std::string_view name) const = 0;
};

/// Raw result; may be Blank (e.g. a bare reference to an empty cell).
[[nodiscard]] Value eval_with(const Expr& e, const ReferenceResolver& refs);

/// A formula whose raw result is Blank displays 0.
[[nodiscard]] Value cell_result(Value raw);

using InputBindings = std::map<CellId, Value>;

struct ValueGrid {
  std::map<CellId, Value> cells;

  [[nodiscard]] const Value& at(const CellId& id) const { return cells.at(id); }
};

/// Evaluates one right-hand side under a substitution against a (partial)
/// store. Every referenced cell must already be present.
[[nodiscard]] Value eval_expr(const Expr& e, const Substitution& env, const ValueGrid& store,
                              const SymbolTable& symbols);

// ---------------------------------------------------------------------------
// Dependency graph and whole-plan evaluation
// ---------------------------------------------------------------------------

struct DependencyGraph {
  std::vector<CellId> nodes;                      // sorted
  std::map<CellId, std::vector<CellId>> edges;    // cell -> cells its rule reads
  std::vector<CellId> topo_order;                 // dependencies first
};

/// Throws CycleError with an explicit path when the plan is cyclic.
[[nodiscard]] DependencyGraph build_graph(const CellPlan& plan);

/// Optional instrumentation; called for every store read and write.
struct EvalHooks {
  std::function<void(const CellId&)> on_read;
  std::function<void(const CellId&)> on_write;
};

/// Values every cell in topological order. Input cells echo their bindings
/// (Blank when unbound); Number values are tagged currency exactly when the
/// table is declared currency.
[[nodiscard]] ValueGrid evaluate(const CellPlan& plan, const InputBindings& inputs, const EvalHooks* hooks = nullptr);

}  // namespace gridspec
