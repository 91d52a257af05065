#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "gridspec/address.hpp"
#include "gridspec/lexer.hpp"
#include "gridspec/source.hpp"

namespace gridspec {

inline constexpr std::size_t kMaxTableArity = 3;

enum class ResultType { General, Number, Currency, Date, Boolean };

[[nodiscard]] std::string_view result_type_name(ResultType t);
[[nodiscard]] std::optional<ResultType> parse_result_type(std::string_view name);

struct BoundsDecl {
  std::string name;
  long low = 0;
  long high = 0;
  SourcePos pos;
};

struct TableDecl {
  std::string name;
  std::vector<std::string> dims;
  ResultType result_type = ResultType::General;
  SourcePos pos;
};

enum class Comparator { Less, LessEqual, Greater, GreaterEqual, NotEqual };

[[nodiscard]] std::string_view comparator_text(Comparator c);
[[nodiscard]] bool compare_index(long value, Comparator c, long bound);

struct ConstantPattern {
  long value = 0;
};
struct VarPattern {
  std::string name;
};
struct GuardedVarPattern {
  std::string name;
  Comparator comparator = Comparator::Greater;
  long bound = 0;
};

using IndexPattern = std::variant<ConstantPattern, VarPattern, GuardedVarPattern>;

// ---------------------------------------------------------------------------
// Expressions
//
// One tree type serves both equation right-hand sides and A1 formulas. The
// spec parser never produces CellRef/RangeRef; the formula parser never
// produces ElementRef/IndexVar/AllIndex.
// ---------------------------------------------------------------------------

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

enum class BinaryOp { Add, Sub, Mul, Div, Eq, Ne, Lt, Le, Gt, Ge };

[[nodiscard]] std::string_view binary_op_text(BinaryOp op);
[[nodiscard]] bool is_comparison(BinaryOp op);

struct NumberLit {
  double value = 0;
};
struct BooleanLit {
  bool value = false;
};
struct ElementRef {
  std::string table;
  std::vector<ExprPtr> indices;
};
struct IndexVar {
  std::string name;
};
struct Call {
  std::string name;  // as written; matched case-insensitively
  std::vector<ExprPtr> args;
};
struct Binary {
  BinaryOp op = BinaryOp::Add;
  ExprPtr lhs;
  ExprPtr rhs;
};
struct AllIndex {};
struct CellRef {
  Address address;
};
struct RangeRef {
  Address first;
  Address last;
};

struct Expr {
  std::variant<NumberLit, BooleanLit, ElementRef, IndexVar, Call, Binary, AllIndex, CellRef, RangeRef> node;
  SourcePos pos;

  template <typename T>
  [[nodiscard]] const T* as() const {
    return std::get_if<T>(&node);
  }
};

template <typename Node>
[[nodiscard]] ExprPtr make_expr(Node node, SourcePos pos = {}) {
  return std::make_shared<const Expr>(Expr{std::move(node), pos});
}

/// Ignores source positions.
[[nodiscard]] bool structurally_equal(const Expr& a, const Expr& b);

/// Lower-cased function name.
[[nodiscard]] std::string canonical_function_name(std::string_view name);

// ---------------------------------------------------------------------------
// Documents
// ---------------------------------------------------------------------------

struct EquationDecl {
  std::string table;
  std::vector<IndexPattern> lhs_patterns;
  ExprPtr rhs;
  SourcePos pos;
};

using Element = std::variant<BoundsDecl, TableDecl, EquationDecl>;

struct SpecDocument {
  std::vector<Element> elements;
  std::vector<Comment> comments;
};

/// Element lists and comment texts equal; positions ignored.
[[nodiscard]] bool structurally_equal(const SpecDocument& a, const SpecDocument& b);

/// Canonical surface syntax. Spaces surround binary operators so that a
/// negative literal on the right never lexes as a comment.
[[nodiscard]] std::string pretty_print(const Expr& e);
[[nodiscard]] std::string pretty_print(const IndexPattern& p);
[[nodiscard]] std::string pretty_print(const Element& e);
/// Elements and comments interleaved in source order.
[[nodiscard]] std::string pretty_print(const SpecDocument& doc);

/// Shortest decimal rendering that reads back to the same double, without
/// exponent notation.
[[nodiscard]] std::string format_number(double v);

}  // namespace gridspec
