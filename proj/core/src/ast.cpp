#include "gridspec/ast.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>

namespace gridspec {

std::string_view result_type_name(ResultType t) {
  switch (t) {
    case ResultType::General: return "general";
    case ResultType::Number: return "number";
    case ResultType::Currency: return "currency";
    case ResultType::Date: return "date";
    case ResultType::Boolean: return "boolean";
  }
  return "general";
}

std::optional<ResultType> parse_result_type(std::string_view name) {
  if (name == "general") return ResultType::General;
  if (name == "number") return ResultType::Number;
  if (name == "currency") return ResultType::Currency;
  if (name == "date") return ResultType::Date;
  if (name == "boolean") return ResultType::Boolean;
  return std::nullopt;
}

std::string_view comparator_text(Comparator c) {
  switch (c) {
    case Comparator::Less: return "<";
    case Comparator::LessEqual: return "<=";
    case Comparator::Greater: return ">";
    case Comparator::GreaterEqual: return ">=";
    case Comparator::NotEqual: return "<>";
  }
  return "?";
}

bool compare_index(long value, Comparator c, long bound) {
  switch (c) {
    case Comparator::Less: return value < bound;
    case Comparator::LessEqual: return value <= bound;
    case Comparator::Greater: return value > bound;
    case Comparator::GreaterEqual: return value >= bound;
    case Comparator::NotEqual: return value != bound;
  }
  return false;
}

std::string_view binary_op_text(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Div: return "/";
    case BinaryOp::Eq: return "=";
    case BinaryOp::Ne: return "<>";
    case BinaryOp::Lt: return "<";
    case BinaryOp::Le: return "<=";
    case BinaryOp::Gt: return ">";
    case BinaryOp::Ge: return ">=";
  }
  return "?";
}

bool is_comparison(BinaryOp op) {
  switch (op) {
    case BinaryOp::Eq:
    case BinaryOp::Ne:
    case BinaryOp::Lt:
    case BinaryOp::Le:
    case BinaryOp::Gt:
    case BinaryOp::Ge: return true;
    default: return false;
  }
}

std::string canonical_function_name(std::string_view name) {
  std::string out(name);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string format_number(double v) {
  if (v == 0) return "0";
  char buf[512];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed);
  if (res.ec != std::errc{}) {
    res = std::to_chars(buf, buf + sizeof buf, v);
  }
  return std::string(buf, res.ptr);
}

namespace {

bool equal_ptr(const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b) return !a && !b;
  return structurally_equal(*a, *b);
}

bool equal_list(const std::vector<ExprPtr>& a, const std::vector<ExprPtr>& b) {
  return std::equal(a.begin(), a.end(), b.begin(), b.end(), equal_ptr);
}

struct PatternEqual {
  bool operator()(const ConstantPattern& a, const ConstantPattern& b) const { return a.value == b.value; }
  bool operator()(const VarPattern& a, const VarPattern& b) const { return a.name == b.name; }
  bool operator()(const GuardedVarPattern& a, const GuardedVarPattern& b) const {
    return a.name == b.name && a.comparator == b.comparator && a.bound == b.bound;
  }
  template <typename A, typename B>
  bool operator()(const A&, const B&) const {
    return false;
  }
};

bool equal_element(const Element& a, const Element& b) {
  if (a.index() != b.index()) return false;
  if (const auto* x = std::get_if<BoundsDecl>(&a)) {
    const auto& y = std::get<BoundsDecl>(b);
    return x->name == y.name && x->low == y.low && x->high == y.high;
  }
  if (const auto* x = std::get_if<TableDecl>(&a)) {
    const auto& y = std::get<TableDecl>(b);
    return x->name == y.name && x->dims == y.dims && x->result_type == y.result_type;
  }
  const auto& x = std::get<EquationDecl>(a);
  const auto& y = std::get<EquationDecl>(b);
  if (x.table != y.table || x.lhs_patterns.size() != y.lhs_patterns.size()) return false;
  for (std::size_t i = 0; i < x.lhs_patterns.size(); ++i) {
    if (!std::visit(PatternEqual{}, x.lhs_patterns[i], y.lhs_patterns[i])) return false;
  }
  return equal_ptr(x.rhs, y.rhs);
}

int precedence(const Expr& e) {
  if (const auto* b = e.as<Binary>()) {
    if (is_comparison(b->op)) return 1;
    if (b->op == BinaryOp::Add || b->op == BinaryOp::Sub) return 2;
    return 3;
  }
  return 4;
}

void print_expr(std::ostream& os, const Expr& e);

void print_child(std::ostream& os, const Expr& child, bool parens) {
  if (parens) os << '(';
  print_expr(os, child);
  if (parens) os << ')';
}

void print_list(std::ostream& os, const std::vector<ExprPtr>& items) {
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) os << ", ";
    print_expr(os, *items[i]);
  }
}

void print_expr(std::ostream& os, const Expr& e) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, NumberLit>) {
          os << format_number(n.value);
        } else if constexpr (std::is_same_v<T, BooleanLit>) {
          os << (n.value ? "true" : "false");
        } else if constexpr (std::is_same_v<T, ElementRef>) {
          os << n.table << '[';
          print_list(os, n.indices);
          os << ']';
        } else if constexpr (std::is_same_v<T, IndexVar>) {
          os << n.name;
        } else if constexpr (std::is_same_v<T, Call>) {
          os << n.name << '(';
          print_list(os, n.args);
          os << ')';
        } else if constexpr (std::is_same_v<T, Binary>) {
          const int p = precedence(e);
          print_child(os, *n.lhs, precedence(*n.lhs) < p);
          os << ' ' << binary_op_text(n.op) << ' ';
          print_child(os, *n.rhs, precedence(*n.rhs) <= p);
        } else if constexpr (std::is_same_v<T, AllIndex>) {
          os << "all";
        } else if constexpr (std::is_same_v<T, CellRef>) {
          os << to_a1(n.address);
        } else if constexpr (std::is_same_v<T, RangeRef>) {
          os << to_a1(n.first) << ':' << to_a1(n.last, false);
        }
      },
      e.node);
}

std::string comment_block(const Comment& c) {
  std::string out;
  std::size_t start = 0;
  while (true) {
    const std::size_t nl = c.text.find('\n', start);
    const std::string_view line = std::string_view(c.text).substr(start, nl == std::string::npos ? std::string::npos : nl - start);
    out += line.empty() ? "--" : "-- ";
    out += line;
    out += '\n';
    if (nl == std::string::npos) break;
    start = nl + 1;
  }
  return out;
}

SourcePos element_pos(const Element& e) {
  return std::visit([](const auto& x) { return x.pos; }, e);
}

}  // namespace

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b.node);
        if constexpr (std::is_same_v<T, NumberLit>) {
          return x.value == y.value;
        } else if constexpr (std::is_same_v<T, BooleanLit>) {
          return x.value == y.value;
        } else if constexpr (std::is_same_v<T, ElementRef>) {
          return x.table == y.table && equal_list(x.indices, y.indices);
        } else if constexpr (std::is_same_v<T, IndexVar>) {
          return x.name == y.name;
        } else if constexpr (std::is_same_v<T, Call>) {
          return canonical_function_name(x.name) == canonical_function_name(y.name) && equal_list(x.args, y.args);
        } else if constexpr (std::is_same_v<T, Binary>) {
          return x.op == y.op && equal_ptr(x.lhs, y.lhs) && equal_ptr(x.rhs, y.rhs);
        } else if constexpr (std::is_same_v<T, AllIndex>) {
          return true;
        } else if constexpr (std::is_same_v<T, CellRef>) {
          return x.address == y.address;
        } else {
          return x.first == y.first && x.last == y.last;
        }
      },
      a.node);
}

bool structurally_equal(const SpecDocument& a, const SpecDocument& b) {
  return std::equal(a.elements.begin(), a.elements.end(), b.elements.begin(), b.elements.end(), equal_element) &&
         a.comments == b.comments;
}

std::string pretty_print(const Expr& e) {
  std::ostringstream os;
  print_expr(os, e);
  return os.str();
}

std::string pretty_print(const IndexPattern& p) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, ConstantPattern>) {
          return std::to_string(x.value);
        } else if constexpr (std::is_same_v<T, VarPattern>) {
          return x.name;
        } else {
          return x.name + ' ' + std::string(comparator_text(x.comparator)) + ' ' + std::to_string(x.bound);
        }
      },
      p);
}

std::string pretty_print(const Element& e) {
  std::ostringstream os;
  if (const auto* b = std::get_if<BoundsDecl>(&e)) {
    os << "bounds " << b->name << ": " << b->low << " to " << b->high << '.';
  } else if (const auto* t = std::get_if<TableDecl>(&e)) {
    os << "table " << t->name << " :";
    for (const auto& d : t->dims) os << ' ' << d;
    os << " -> " << result_type_name(t->result_type) << '.';
  } else {
    const auto& q = std::get<EquationDecl>(e);
    os << q.table << '[';
    for (std::size_t i = 0; i < q.lhs_patterns.size(); ++i) {
      if (i) os << ", ";
      os << pretty_print(q.lhs_patterns[i]);
    }
    os << "] =\n  " << pretty_print(*q.rhs) << '.';
  }
  return os.str();
}

std::string pretty_print(const SpecDocument& doc) {
  std::string out;
  std::size_t ci = 0;
  for (const auto& el : doc.elements) {
    const auto off = element_pos(el).byte_offset;
    while (ci < doc.comments.size() && doc.comments[ci].pos.byte_offset < off) {
      out += comment_block(doc.comments[ci++]);
      out += '\n';
    }
    out += pretty_print(el);
    out += "\n\n";
  }
  while (ci < doc.comments.size()) {
    out += comment_block(doc.comments[ci++]);
    out += '\n';
  }
  return out;
}

}  // namespace gridspec
