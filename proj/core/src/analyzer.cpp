#include "gridspec/analyzer.hpp"

#include <cmath>
#include <stdexcept>

namespace gridspec {

TableClass classify(const SymbolTable& symbols, const std::string& table) {
  auto it = symbols.equations_by_table.find(table);
  return it == symbols.equations_by_table.end() || it->second.empty() ? TableClass::Input : TableClass::Derived;
}

std::string to_string(const CellId& cell) {
  std::string out = cell.table + '[';
  for (std::size_t i = 0; i < cell.indices.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(cell.indices[i]);
  }
  out += ']';
  return out;
}

std::vector<CellId> enumerate_cells(const SymbolTable& symbols, const std::string& table) {
  const TableDecl& t = symbols.table(table);
  std::vector<CellId> out;
  std::vector<long> idx;
  std::vector<const BoundsInfo*> dims;
  for (const auto& d : t.dims) dims.push_back(&symbols.bounds.at(d));
  auto rec = [&](auto&& self, std::size_t k) -> void {
    if (k == dims.size()) {
      out.push_back({table, idx});
      return;
    }
    for (long i = dims[k]->low; i <= dims[k]->high; ++i) {
      idx.push_back(i);
      self(self, k + 1);
      idx.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

std::optional<Substitution> match_patterns(const std::vector<IndexPattern>& patterns, const std::vector<long>& indices) {
  if (patterns.size() != indices.size()) return std::nullopt;
  Substitution subst;
  for (std::size_t k = 0; k < patterns.size(); ++k) {
    const long v = indices[k];
    if (const auto* c = std::get_if<ConstantPattern>(&patterns[k])) {
      if (c->value != v) return std::nullopt;
    } else if (const auto* var = std::get_if<VarPattern>(&patterns[k])) {
      subst[var->name] = v;
    } else {
      const auto& g = std::get<GuardedVarPattern>(patterns[k]);
      if (!compare_index(v, g.comparator, g.bound)) return std::nullopt;
      subst[g.name] = v;
    }
  }
  return subst;
}

long eval_index(const Expr& e, const Substitution& subst) {
  if (const auto* n = e.as<NumberLit>()) {
    if (n->value != std::floor(n->value)) throw std::invalid_argument("non-integer index literal");
    return static_cast<long>(n->value);
  }
  if (const auto* v = e.as<IndexVar>()) {
    auto it = subst.find(v->name);
    if (it == subst.end()) throw std::invalid_argument("unbound index variable '" + v->name + "'");
    return it->second;
  }
  if (const auto* b = e.as<Binary>()) {
    if (b->op == BinaryOp::Add) return eval_index(*b->lhs, subst) + eval_index(*b->rhs, subst);
    if (b->op == BinaryOp::Sub) return eval_index(*b->lhs, subst) - eval_index(*b->rhs, subst);
  }
  throw std::invalid_argument("unsupported index expression");
}

bool has_all_index(const ElementRef& ref) {
  for (const auto& i : ref.indices) {
    if (i->as<AllIndex>()) return true;
  }
  return false;
}

std::vector<CellId> expand_reference(const ElementRef& ref, const Substitution& subst, const SymbolTable& symbols) {
  const TableDecl& t = symbols.table(ref.table);
  std::vector<CellId> out;
  std::vector<long> idx(ref.indices.size());
  auto rec = [&](auto&& self, std::size_t k) -> void {
    if (k == ref.indices.size()) {
      out.push_back({ref.table, idx});
      return;
    }
    if (ref.indices[k]->as<AllIndex>()) {
      const BoundsInfo& b = symbols.bounds.at(t.dims.at(k));
      for (long i = b.low; i <= b.high; ++i) {
        idx[k] = i;
        self(self, k + 1);
      }
    } else {
      idx[k] = eval_index(*ref.indices[k], subst);
      self(self, k + 1);
    }
  };
  rec(rec, 0);
  return out;
}

// ---------------------------------------------------------------------------
// resolve
// ---------------------------------------------------------------------------

namespace {

void check_rhs_names(const Expr& e, const SymbolTable& s, Diagnostics& diags) {
  for_each_reference(e, [&](const ElementRef& r, const Expr& at) {
    auto it = s.tables.find(r.table);
    if (it == s.tables.end()) {
      diags.push_back(make_error("UnknownTable", "unknown table '" + r.table + "'", at.pos));
    } else if (it->second.dims.size() != r.indices.size()) {
      diags.push_back(make_error("ArityMismatch",
                                 "'" + r.table + "' has " + std::to_string(it->second.dims.size()) +
                                     " dimension(s) but is referenced with " + std::to_string(r.indices.size()) +
                                     " index(es)",
                                 at.pos));
    }
  });
}

std::string pattern_var(const IndexPattern& p) {
  if (const auto* v = std::get_if<VarPattern>(&p)) return v->name;
  if (const auto* g = std::get_if<GuardedVarPattern>(&p)) return g->name;
  return {};
}

}  // namespace

SymbolTable resolve(const SpecDocument& doc, Diagnostics& diags) {
  SymbolTable s;
  std::set<std::string> rejected;
  for (const auto& el : doc.elements) {
    if (const auto* b = std::get_if<BoundsDecl>(&el)) {
      if (s.bounds.count(b->name)) {
        diags.push_back(make_error("DuplicateName", "bounds '" + b->name + "' declared twice", b->pos));
        continue;
      }
      if (b->low > b->high) {
        diags.push_back(make_error("InvalidBounds",
                                   "bounds '" + b->name + "' has low bound " + std::to_string(b->low) +
                                       " above high bound " + std::to_string(b->high),
                                   b->pos));
      }
      s.bounds.emplace(b->name, BoundsInfo{b->low, b->high, b->pos});
    }
  }
  for (const auto& el : doc.elements) {
    if (const auto* t = std::get_if<TableDecl>(&el)) {
      if (s.tables.count(t->name)) {
        diags.push_back(make_error("DuplicateName", "table '" + t->name + "' declared twice", t->pos));
        continue;
      }
      bool ok = true;
      if (t->dims.size() > kMaxTableArity) {
        diags.push_back(make_error("ArityTooLarge",
                                   "table '" + t->name + "' has " + std::to_string(t->dims.size()) +
                                       " dimensions; at most 3 are supported",
                                   t->pos));
        ok = false;
      }
      for (const auto& d : t->dims) {
        if (!s.bounds.count(d)) {
          diags.push_back(make_error("UnknownBounds", "table '" + t->name + "' uses undeclared bounds '" + d + "'", t->pos));
          ok = false;
        }
      }
      if (ok) {
        s.tables.emplace(t->name, *t);
        s.table_order.push_back(t->name);
      } else {
        rejected.insert(t->name);
      }
    }
  }
  for (const auto& el : doc.elements) {
    const auto* q = std::get_if<EquationDecl>(&el);
    if (!q) continue;
    if (rejected.count(q->table)) continue;
    auto it = s.tables.find(q->table);
    if (it == s.tables.end()) {
      diags.push_back(make_error("UnknownTable", "equation for undeclared table '" + q->table + "'", q->pos));
      continue;
    }
    bool ok = true;
    if (it->second.dims.size() != q->lhs_patterns.size()) {
      diags.push_back(make_error("ArityMismatch",
                                 "'" + q->table + "' has " + std::to_string(it->second.dims.size()) +
                                     " dimension(s) but the equation gives " +
                                     std::to_string(q->lhs_patterns.size()) + " index pattern(s)",
                                 q->pos));
      ok = false;
    }
    std::set<std::string> seen;
    for (const auto& p : q->lhs_patterns) {
      std::string v = pattern_var(p);
      if (!v.empty() && !seen.insert(v).second) {
        diags.push_back(make_error("DuplicatePatternVariable", "index variable '" + v + "' bound twice", q->pos));
        ok = false;
      }
    }
    const std::size_t before = diags.size();
    check_rhs_names(*q->rhs, s, diags);
    if (diags.size() != before) ok = false;
    if (ok) {
      s.equations_by_table[q->table].push_back(s.equations.size());
      s.equations.push_back(*q);
    }
  }
  return s;
}

// ---------------------------------------------------------------------------
// typecheck
// ---------------------------------------------------------------------------

namespace {

enum class Family { Numeric, Boolean, Date };

Family family_of(ResultType t) {
  switch (t) {
    case ResultType::Boolean: return Family::Boolean;
    case ResultType::Date: return Family::Date;
    default: return Family::Numeric;
  }
}

struct Ty {
  ResultType type = ResultType::General;
  bool range = false;
};

class TypeChecker {
 public:
  TypeChecker(const SymbolTable& s, Diagnostics& diags) : s_(s), diags_(diags) {}

  void check(const EquationDecl& q) {
    bound_.clear();
    for (const auto& p : q.lhs_patterns) {
      std::string v = pattern_var(p);
      if (!v.empty()) bound_.insert(v);
    }
    auto ty = type_of(*q.rhs, false);
    if (!ty) return;
    const ResultType declared = s_.table(q.table).result_type;
    if (family_of(ty->type) != family_of(declared)) {
      error("TypeMismatch",
            "equation for '" + q.table + "' yields " + std::string(result_type_name(ty->type)) +
                " but the table is declared " + std::string(result_type_name(declared)),
            q.rhs->pos);
    }
  }

 private:
  void error(std::string code, std::string msg, SourcePos pos) {
    diags_.push_back(make_error(std::move(code), std::move(msg), pos));
  }

  std::optional<Ty> type_of(const Expr& e, bool range_ok) {
    if (e.as<NumberLit>()) return Ty{ResultType::Number};
    if (e.as<BooleanLit>()) return Ty{ResultType::Boolean};
    if (const auto* v = e.as<IndexVar>()) {
      if (!bound_.count(v->name)) {
        error("UnboundIndexVariable", "'" + v->name + "' is not bound by the left-hand side", e.pos);
        return std::nullopt;
      }
      return Ty{ResultType::Number};
    }
    if (e.as<AllIndex>()) {
      error("MisplacedAll", "'all' may only appear as an index of a sum or match argument", e.pos);
      return std::nullopt;
    }
    if (e.as<CellRef>() || e.as<RangeRef>()) {
      error("UnexpectedCellReference", "cell addresses are not allowed in equations", e.pos);
      return std::nullopt;
    }
    if (const auto* r = e.as<ElementRef>()) return element(*r, e, range_ok);
    if (const auto* c = e.as<Call>()) return call(*c, e);
    return binary(*e.as<Binary>(), e);
  }

  bool index_expression(const Expr& e) {
    if (const auto* n = e.as<NumberLit>()) {
      if (n->value == std::floor(n->value)) return true;
    } else if (const auto* v = e.as<IndexVar>()) {
      if (bound_.count(v->name)) return true;
      error("UnboundIndexVariable", "'" + v->name + "' is not bound by the left-hand side", e.pos);
      return false;
    } else if (const auto* b = e.as<Binary>()) {
      if (b->op == BinaryOp::Add || b->op == BinaryOp::Sub) {
        const bool l = index_expression(*b->lhs);
        const bool r = index_expression(*b->rhs);
        return l && r;
      }
    }
    error("BadIndexExpression", "index must be an integer expression over index variables using + and -", e.pos);
    return false;
  }

  std::optional<Ty> element(const ElementRef& r, const Expr& e, bool range_ok) {
    auto it = s_.tables.find(r.table);
    if (it == s_.tables.end()) return std::nullopt;
    bool ok = true;
    bool any_all = false;
    for (const auto& idx : r.indices) {
      if (idx->as<AllIndex>()) {
        any_all = true;
        if (!range_ok) {
          error("MisplacedAll", "'all' may only appear as an index of a sum or match argument", idx->pos);
          ok = false;
        }
      } else if (!index_expression(*idx)) {
        ok = false;
      }
    }
    (void)e;
    if (!ok) return std::nullopt;
    return Ty{it->second.result_type, any_all};
  }

  std::optional<Ty> scalar_arg(const Expr& e) { return type_of(e, false); }

  std::optional<Ty> expect_boolean(const Expr& e, std::string_view fn) {
    auto t = scalar_arg(e);
    if (t && family_of(t->type) != Family::Boolean) {
      error("BooleanExpected", std::string(fn) + " expects a boolean argument, got " +
                                    std::string(result_type_name(t->type)), e.pos);
      return std::nullopt;
    }
    return t;
  }

  bool arg_count(const Call& c, const Expr& e, std::size_t lo, std::size_t hi) {
    if (c.args.size() >= lo && c.args.size() <= hi) return true;
    std::string want = lo == hi ? std::to_string(lo) : hi == SIZE_MAX ? "at least " + std::to_string(lo)
                                                                          : std::to_string(lo) + ".." + std::to_string(hi);
    error("BadArgumentCount", c.name + " takes " + want + " argument(s), got " + std::to_string(c.args.size()), e.pos);
    return false;
  }

  std::optional<Ty> call(const Call& c, const Expr& e) {
    const std::string fn = canonical_function_name(c.name);
    if (fn == "if") {
      if (!arg_count(c, e, 3, 3)) return std::nullopt;
      auto cond = expect_boolean(*c.args[0], "if");
      auto a = scalar_arg(*c.args[1]);
      auto b = scalar_arg(*c.args[2]);
      if (!cond || !a || !b) return std::nullopt;
      if (family_of(a->type) != family_of(b->type)) {
        error("TypeMismatch", "if branches have incompatible types " + std::string(result_type_name(a->type)) +
                                  " and " + std::string(result_type_name(b->type)), e.pos);
        return std::nullopt;
      }
      return Ty{a->type == b->type ? a->type : family_of(a->type) == Family::Numeric ? ResultType::Number : a->type};
    }
    if (fn == "or" || fn == "and" || fn == "not") {
      if (fn == "not" ? !arg_count(c, e, 1, 1) : !arg_count(c, e, 1, SIZE_MAX)) return std::nullopt;
      bool ok = true;
      for (const auto& a : c.args) ok = expect_boolean(*a, fn).has_value() && ok;
      if (!ok) return std::nullopt;
      return Ty{ResultType::Boolean};
    }
    if (fn == "isna") {
      if (!arg_count(c, e, 1, 1)) return std::nullopt;
      if (!scalar_arg(*c.args[0])) return std::nullopt;
      return Ty{ResultType::Boolean};
    }
    if (fn == "sum") {
      if (!arg_count(c, e, 1, SIZE_MAX)) return std::nullopt;
      bool ok = true;
      bool all_currency = true;
      for (const auto& a : c.args) {
        auto t = type_of(*a, a->as<ElementRef>() != nullptr);
        if (!t) {
          ok = false;
          continue;
        }
        if (family_of(t->type) == Family::Date || (!t->range && family_of(t->type) != Family::Numeric)) {
          error("TypeMismatch", "sum expects numbers, got " + std::string(result_type_name(t->type)), a->pos);
          ok = false;
        }
        all_currency = all_currency && t->type == ResultType::Currency;
      }
      if (!ok) return std::nullopt;
      return Ty{all_currency ? ResultType::Currency : ResultType::Number};
    }
    if (fn == "match") {
      if (!arg_count(c, e, 3, 3)) return std::nullopt;
      bool ok = scalar_arg(*c.args[0]).has_value();
      const auto* range = c.args[1]->as<ElementRef>();
      int alls = 0;
      if (range) {
        for (const auto& i : range->indices) alls += i->as<AllIndex>() ? 1 : 0;
      }
      if (!range || alls != 1) {
        error("BadMatchRange", "match expects a table element with exactly one 'all' index as its range", c.args[1]->pos);
        if (!range) (void)type_of(*c.args[1], false);
        ok = false;
      } else {
        ok = type_of(*c.args[1], true).has_value() && ok;
      }
      const auto* kind = c.args[2]->as<NumberLit>();
      if (!kind || kind->value != 0) {
        error("UnsupportedMatchType", "only exact matching (match type 0) is supported", c.args[2]->pos);
        ok = false;
      }
      if (!ok) return std::nullopt;
      return Ty{ResultType::General};
    }
    if (fn == "date") {
      if (!arg_count(c, e, 3, 3)) return std::nullopt;
      bool ok = true;
      for (const auto& a : c.args) {
        auto t = scalar_arg(*a);
        if (!t) {
          ok = false;
        } else if (family_of(t->type) != Family::Numeric) {
          error("TypeMismatch", "date expects numeric year, month and day", a->pos);
          ok = false;
        }
      }
      if (!ok) return std::nullopt;
      return Ty{ResultType::Date};
    }
    error("UnknownFunction", "unknown function '" + c.name + "'", e.pos);
    for (const auto& a : c.args) (void)scalar_arg(*a);
    return std::nullopt;
  }

  std::optional<Ty> binary(const Binary& b, const Expr& e) {
    auto l = scalar_arg(*b.lhs);
    auto r = scalar_arg(*b.rhs);
    if (!l || !r) return std::nullopt;
    const std::string op(binary_op_text(b.op));
    if (is_comparison(b.op)) {
      if (family_of(l->type) != family_of(r->type)) {
        error("TypeMismatch", "cannot compare " + std::string(result_type_name(l->type)) + " with " +
                                  std::string(result_type_name(r->type)), e.pos);
        return std::nullopt;
      }
      return Ty{ResultType::Boolean};
    }
    if (family_of(l->type) != Family::Numeric || family_of(r->type) != Family::Numeric) {
      error("TypeMismatch", "operator " + op + " needs numbers, got " + std::string(result_type_name(l->type)) +
                                " and " + std::string(result_type_name(r->type)), e.pos);
      return std::nullopt;
    }
    const bool currency = l->type == ResultType::Currency || r->type == ResultType::Currency;
    return Ty{currency ? ResultType::Currency : ResultType::Number};
  }

  const SymbolTable& s_;
  Diagnostics& diags_;
  std::set<std::string> bound_;
};

}  // namespace

Diagnostics typecheck(const SymbolTable& symbols) {
  Diagnostics diags;
  TypeChecker tc(symbols, diags);
  for (const auto& q : symbols.equations) tc.check(q);
  return diags;
}

// ---------------------------------------------------------------------------
// elaborate
// ---------------------------------------------------------------------------

CellPlan elaborate(const SymbolTable& symbols, Diagnostics& diags) {
  CellPlan plan;
  plan.symbols = symbols;
  for (const auto& name : symbols.table_order) {
    const TableDecl& t = symbols.table(name);
    const auto cells = enumerate_cells(symbols, name);
    if (classify(symbols, name) == TableClass::Input) {
      plan.inputs.insert(cells.begin(), cells.end());
      continue;
    }
    const auto& eqs = symbols.equations_by_table.at(name);
    std::vector<std::size_t> hits(eqs.size(), 0);
    for (const auto& cell : cells) {
      std::vector<std::pair<std::size_t, Substitution>> matches;
      for (std::size_t k = 0; k < eqs.size(); ++k) {
        if (auto sub = match_patterns(symbols.equations[eqs[k]].lhs_patterns, cell.indices)) {
          matches.emplace_back(k, std::move(*sub));
          ++hits[k];
        }
      }
      if (matches.empty()) {
        diags.push_back(make_error("UncoveredCell", "no equation defines " + to_string(cell), t.pos));
        continue;
      }
      if (matches.size() > 1) {
        const auto& second = symbols.equations[eqs[matches[1].first]];
        diags.push_back(make_error("OverlappingRules",
                                   to_string(cell) + " is defined by equations at line " +
                                       std::to_string(symbols.equations[eqs[matches[0].first]].pos.line) +
                                       " and line " + std::to_string(second.pos.line),
                                   second.pos));
        continue;
      }
      RuleInstance rule{cell, eqs[matches[0].first], std::move(matches[0].second)};
      const EquationDecl& q = symbols.equations[rule.equation];
      for_each_reference(*q.rhs, [&](const ElementRef& ref, const Expr& at) {
        const TableDecl& target = symbols.table(ref.table);
        for (std::size_t k = 0; k < ref.indices.size(); ++k) {
          if (ref.indices[k]->as<AllIndex>()) continue;
          const long v = eval_index(*ref.indices[k], rule.substitution);
          const BoundsInfo& b = symbols.bounds.at(target.dims[k]);
          if (!b.contains(v)) {
            diags.push_back(make_error("IndexOutOfBounds",
                                       "in " + to_string(cell) + ": index " + std::to_string(v) + " of '" + ref.table +
                                           "' is outside " + target.dims[k] + " (" + std::to_string(b.low) + " to " +
                                           std::to_string(b.high) + ")",
                                       at.pos));
          }
        }
      });
      plan.rules.emplace(cell, std::move(rule));
    }
    for (std::size_t k = 0; k < eqs.size(); ++k) {
      if (hits[k] == 0) {
        diags.push_back(make_warning("UnusedEquation", "equation for '" + name + "' matches no cell",
                                     symbols.equations[eqs[k]].pos));
      }
    }
  }
  return plan;
}

Analysis analyze(const SpecDocument& doc) {
  Analysis out;
  SymbolTable symbols = resolve(doc, out.diagnostics);
  if (has_errors(out.diagnostics)) {
    out.plan.symbols = std::move(symbols);
    return out;
  }
  Diagnostics types = typecheck(symbols);
  out.diagnostics.insert(out.diagnostics.end(), types.begin(), types.end());
  if (has_errors(out.diagnostics)) {
    out.plan.symbols = std::move(symbols);
    return out;
  }
  out.plan = elaborate(symbols, out.diagnostics);
  return out;
}

}  // namespace gridspec
