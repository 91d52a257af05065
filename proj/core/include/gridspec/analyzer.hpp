#pragma once

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gridspec/ast.hpp"
#include "gridspec/source.hpp"

namespace gridspec {

struct BoundsInfo {
  long low = 0;
  long high = 0;
  SourcePos pos;

  [[nodiscard]] long size() const { return high - low + 1; }
  [[nodiscard]] bool contains(long i) const { return i >= low && i <= high; }
};

struct SymbolTable {
  std::map<std::string, BoundsInfo> bounds;
  std::map<std::string, TableDecl> tables;
  std::vector<std::string> table_order;  // declaration order
  std::vector<EquationDecl> equations;   // declaration order, resolvable ones only
  std::map<std::string, std::vector<std::size_t>> equations_by_table;

  [[nodiscard]] const TableDecl& table(const std::string& name) const { return tables.at(name); }
  [[nodiscard]] const BoundsInfo& dim(const std::string& table, std::size_t k) const {
    return bounds.at(tables.at(table).dims.at(k));
  }
};

enum class TableClass { Input, Derived };

[[nodiscard]] TableClass classify(const SymbolTable& symbols, const std::string& table);

struct CellId {
  std::string table;
  std::vector<long> indices;

  friend auto operator<=>(const CellId&, const CellId&) = default;
  friend bool operator==(const CellId&, const CellId&) = default;
};

/// "total_cash_at_end_of_period[3]", "initial_cash[]", "lent_during_period[2,6]"
[[nodiscard]] std::string to_string(const CellId& cell);

using Substitution = std::map<std::string, long>;

struct RuleInstance {
  CellId cell;
  std::size_t equation = 0;  // index into SymbolTable::equations
  Substitution substitution;
};

/// Every cell of every table, split into derived cells (each with its single
/// winning rule) and input cells.
struct CellPlan {
  SymbolTable symbols;
  std::map<CellId, RuleInstance> rules;
  std::set<CellId> inputs;

  [[nodiscard]] const EquationDecl& equation_of(const RuleInstance& r) const { return symbols.equations.at(r.equation); }
};

/// Name resolution: duplicate, unknown and arity problems.
[[nodiscard]] SymbolTable resolve(const SpecDocument& doc, Diagnostics& diags);

/// Semantic types of right-hand sides, builtin signatures, `all` placement,
/// index-expression shape and variable binding.
[[nodiscard]] Diagnostics typecheck(const SymbolTable& symbols);

/// Concrete per-cell rule selection. Coverage and overlap are decided by
/// enumerating every cell against every equation of its table.
[[nodiscard]] CellPlan elaborate(const SymbolTable& symbols, Diagnostics& diags);

struct Analysis {
  CellPlan plan;
  Diagnostics diagnostics;

  [[nodiscard]] bool ok() const { return !has_errors(diagnostics); }
};

/// resolve, then typecheck, then elaborate; stops after the first stage that
/// reports errors.
[[nodiscard]] Analysis analyze(const SpecDocument& doc);

// Helpers shared by the evaluator and the layout compiler.

[[nodiscard]] std::vector<CellId> enumerate_cells(const SymbolTable& symbols, const std::string& table);

/// Binds the LHS patterns against concrete indices; nullopt if any constant
/// differs or any guard fails.
[[nodiscard]] std::optional<Substitution> match_patterns(const std::vector<IndexPattern>& patterns,
                                                         const std::vector<long>& indices);

/// Integer value of an index expression (literals, variables, + and -).
/// Throws std::invalid_argument for anything else or an unbound variable.
[[nodiscard]] long eval_index(const Expr& e, const Substitution& subst);

[[nodiscard]] bool has_all_index(const ElementRef& ref);

/// Cells denoted by a reference after substitution; `all` positions expand
/// over the referenced dimension in ascending order (first `all` outermost).
[[nodiscard]] std::vector<CellId> expand_reference(const ElementRef& ref, const Substitution& subst,
                                                   const SymbolTable& symbols);

/// Calls `fn(const ElementRef&, const Expr&)` for every element reference in
/// the tree, including both branches of every `if`.
template <typename Fn>
void for_each_reference(const Expr& e, Fn&& fn) {
  if (const auto* r = e.as<ElementRef>()) {
    fn(*r, e);
    for (const auto& i : r->indices) for_each_reference(*i, fn);
  } else if (const auto* c = e.as<Call>()) {
    for (const auto& a : c->args) for_each_reference(*a, fn);
  } else if (const auto* b = e.as<Binary>()) {
    for_each_reference(*b->lhs, fn);
    for_each_reference(*b->rhs, fn);
  }
}

}  // namespace gridspec
