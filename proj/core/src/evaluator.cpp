#include "gridspec/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace gridspec {
namespace {

double operand(const Value& v, BinaryOp op) {
  if (v.is_blank()) return 0;
  if (v.is_number()) return v.as_number();
  throw EvalError("TypeFault", "operator " + std::string(binary_op_text(op)) + " cannot take a " +
                                   std::string(v.kind_name()));
}

Value arithmetic(BinaryOp op, const Value& a, const Value& b) {
  const double x = operand(a, op);
  const double y = operand(b, op);
  double r = 0;
  switch (op) {
    case BinaryOp::Add: r = x + y; break;
    case BinaryOp::Sub: r = x - y; break;
    case BinaryOp::Mul: r = x * y; break;
    case BinaryOp::Div:
      if (y == 0) throw EvalError("DivisionByZero", "division by zero");
      r = x / y;
      break;
    default: break;
  }
  if (!std::isfinite(r)) throw EvalError("NonFiniteResult", "arithmetic overflow");
  return Value::number(r);
}

template <typename T>
bool ordered(BinaryOp op, const T& x, const T& y) {
  switch (op) {
    case BinaryOp::Eq: return x == y;
    case BinaryOp::Ne: return x != y;
    case BinaryOp::Lt: return x < y;
    case BinaryOp::Le: return x <= y;
    case BinaryOp::Gt: return x > y;
    case BinaryOp::Ge: return x >= y;
    default: return false;
  }
}

Value comparison(BinaryOp op, Value a, Value b) {
  // Blank takes the type of the other side.
  if (a.is_blank() && b.is_blank()) return Value::boolean(ordered(op, 0.0, 0.0));
  if (a.is_blank()) a = b.is_boolean() ? Value::boolean(false) : b.is_number() ? Value::number(0) : a;
  if (b.is_blank()) b = a.is_boolean() ? Value::boolean(false) : a.is_number() ? Value::number(0) : b;
  if (a.is_number() && b.is_number()) return Value::boolean(ordered(op, a.as_number(), b.as_number()));
  if (a.is_boolean() && b.is_boolean()) return Value::boolean(ordered(op, a.as_boolean(), b.as_boolean()));
  if (a.is_date() && b.is_date()) return Value::boolean(ordered(op, a.as_date(), b.as_date()));
  throw EvalError("TypeFault", "cannot compare " + std::string(a.kind_name()) + " with " + std::string(b.kind_name()));
}

bool is_range(const Expr& e) {
  if (e.as<RangeRef>()) return true;
  const auto* r = e.as<ElementRef>();
  return r && has_all_index(*r);
}

}  // namespace

Value eval_with(const Expr& e, const ReferenceResolver& refs) {
  if (const auto* n = e.as<NumberLit>()) return Value::number(n->value);
  if (const auto* b = e.as<BooleanLit>()) return Value::boolean(b->value);
  if (const auto* v = e.as<IndexVar>()) {
    auto x = refs.index_variable(v->name);
    if (!x) throw EvalError("UnboundIndexVariable", "index variable '" + v->name + "' has no value");
    return Value::number(static_cast<double>(*x));
  }
  if (e.as<ElementRef>() || e.as<CellRef>()) {
    if (is_range(e)) throw EvalError("BadArgument", "a range is only allowed as a sum or match argument");
    return refs.cell(e);
  }
  if (e.as<RangeRef>()) throw EvalError("BadArgument", "a range is only allowed as a sum or match argument");
  if (e.as<AllIndex>()) throw EvalError("BadArgument", "'all' outside an index position");
  if (const auto* c = e.as<Call>()) {
    const std::string fn = canonical_function_name(c->name);
    if (fn == "if" && c->args.size() == 3) {
      const Value cond = eval_with(*c->args[0], refs);
      const Argument picked[] = {cond, Value::boolean(true), Value::boolean(false)};
      const Value chosen = apply_builtin("if", picked);
      if (chosen.is_na()) return chosen;
      return eval_with(*c->args[chosen.as_boolean() ? 1 : 2], refs);
    }
    std::vector<Argument> args;
    args.reserve(c->args.size());
    for (const auto& a : c->args) {
      if (is_range(*a)) {
        args.emplace_back(refs.range(*a));
      } else {
        args.emplace_back(eval_with(*a, refs));
      }
    }
    return apply_builtin(c->name, args);
  }
  const auto& bin = *e.as<Binary>();
  const Value l = eval_with(*bin.lhs, refs);
  const Value r = eval_with(*bin.rhs, refs);
  if (l.is_na() || r.is_na()) return Value::na();
  return is_comparison(bin.op) ? comparison(bin.op, l, r) : arithmetic(bin.op, l, r);
}

Value cell_result(Value raw) { return raw.is_blank() ? Value::number(0) : raw; }

namespace {

class StoreResolver final : public ReferenceResolver {
 public:
  StoreResolver(const Substitution& env, const SymbolTable& symbols, std::function<const Value&(const CellId&)> read)
      : env_(env), symbols_(symbols), read_(std::move(read)) {}

  Value cell(const Expr& ref) const override {
    const auto cells = expand_reference(*ref.as<ElementRef>(), env_, symbols_);
    return read_(cells.front());
  }

  std::vector<Value> range(const Expr& ref) const override {
    std::vector<Value> out;
    for (const auto& id : expand_reference(*ref.as<ElementRef>(), env_, symbols_)) out.push_back(read_(id));
    return out;
  }

  std::optional<long> index_variable(std::string_view name) const override {
    auto it = env_.find(std::string(name));
    if (it == env_.end()) return std::nullopt;
    return it->second;
  }

 private:
  const Substitution& env_;
  const SymbolTable& symbols_;
  std::function<const Value&(const CellId&)> read_;
};

NumberFormat format_for(const SymbolTable& symbols, const std::string& table) {
  return symbols.table(table).result_type == ResultType::Currency ? NumberFormat::Currency : NumberFormat::Plain;
}

}  // namespace

Value eval_expr(const Expr& e, const Substitution& env, const ValueGrid& store, const SymbolTable& symbols) {
  StoreResolver refs(env, symbols, [&](const CellId& id) -> const Value& {
    auto it = store.cells.find(id);
    if (it == store.cells.end()) throw EvalError("UnvaluedCell", to_string(id) + " has not been evaluated");
    return it->second;
  });
  return eval_with(e, refs);
}

DependencyGraph build_graph(const CellPlan& plan) {
  DependencyGraph g;
  for (const auto& id : plan.inputs) g.edges[id];
  for (const auto& [id, rule] : plan.rules) {
    auto& out = g.edges[id];
    std::set<CellId> seen;
    for_each_reference(*plan.equation_of(rule).rhs, [&](const ElementRef& ref, const Expr&) {
      for (auto& target : expand_reference(ref, rule.substitution, plan.symbols)) {
        if (!g.edges.count(target) && !plan.inputs.count(target) && !plan.rules.count(target)) {
          throw EvalError("UnknownCell", to_string(target) + " is not part of the plan", id);
        }
        if (seen.insert(target).second) out.push_back(std::move(target));
      }
    });
  }
  g.nodes.reserve(g.edges.size());
  for (const auto& [id, _] : g.edges) g.nodes.push_back(id);

  // Iterative DFS; post-order gives dependencies before dependents.
  std::map<CellId, int> color;  // 0 white, 1 on stack, 2 done
  g.topo_order.reserve(g.nodes.size());
  for (const auto& root : g.nodes) {
    if (color[root] != 0) continue;
    std::vector<std::pair<const CellId*, std::size_t>> stack{{&root, 0}};
    color[root] = 1;
    while (!stack.empty()) {
      auto& [node, next] = stack.back();
      const auto& deps = g.edges.at(*node);
      if (next < deps.size()) {
        const CellId& dep = deps[next++];
        const int c = color[dep];
        if (c == 1) {
          std::vector<CellId> path;
          auto it = std::find_if(stack.begin(), stack.end(), [&](const auto& f) { return *f.first == dep; });
          for (; it != stack.end(); ++it) path.push_back(*it->first);
          path.push_back(dep);
          throw CycleError(std::move(path));
        }
        if (c == 0) {
          color[dep] = 1;
          stack.emplace_back(&g.edges.find(dep)->first, 0);
        }
      } else {
        color[*node] = 2;
        g.topo_order.push_back(*node);
        stack.pop_back();
      }
    }
  }
  return g;
}

ValueGrid evaluate(const CellPlan& plan, const InputBindings& inputs, const EvalHooks* hooks) {
  for (const auto& [id, v] : inputs) {
    if (!plan.inputs.count(id)) throw EvalError("BindingToNonInputCell", "binding for a cell that is not an input", id);
    if (v.is_na()) throw EvalError("BadValue", "#N/A cannot be bound as an input", id);
  }
  const DependencyGraph g = build_graph(plan);
  ValueGrid grid;
  auto read = [&](const CellId& id) -> const Value& {
    if (hooks && hooks->on_read) hooks->on_read(id);
    auto it = grid.cells.find(id);
    if (it == grid.cells.end()) throw std::logic_error("read of " + to_string(id) + " before it was written");
    return it->second;
  };
  auto write = [&](const CellId& id, Value v) {
    if (hooks && hooks->on_write) hooks->on_write(id);
    if (!grid.cells.emplace(id, std::move(v)).second) {
      throw std::logic_error(to_string(id) + " written twice");
    }
  };
  for (const auto& id : g.topo_order) {
    const NumberFormat fmt = format_for(plan.symbols, id.table);
    auto rule = plan.rules.find(id);
    if (rule == plan.rules.end()) {
      auto b = inputs.find(id);
      write(id, b == inputs.end() ? Value::blank() : b->second.with_format(fmt));
      continue;
    }
    Value v;
    try {
      StoreResolver refs(rule->second.substitution, plan.symbols, read);
      v = cell_result(eval_with(*plan.equation_of(rule->second).rhs, refs));
    } catch (const CycleError&) {
      throw;
    } catch (const EvalError& e) {
      if (e.cell()) throw;
      throw EvalError(e.code(), e.detail(), id);
    }
    write(id, v.with_format(fmt));
  }
  return grid;
}

}  // namespace gridspec
