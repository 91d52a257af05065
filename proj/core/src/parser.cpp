#include "gridspec/parser.hpp"

#include <charconv>
#include <initializer_list>
#include <string>

namespace gridspec {
namespace {

constexpr int kMaxNesting = 200;

class Parser {
 public:
  Parser(std::vector<Token> tokens, LexMode mode) : tokens_(std::move(tokens)), mode_(mode) {}

  ParseResult document(std::vector<Comment> comments, Diagnostics lex_diags) {
    ParseResult out;
    out.document.comments = std::move(comments);
    out.diagnostics = std::move(lex_diags);
    while (!at(TokenKind::EndOfInput)) {
      try {
        out.document.elements.push_back(element());
      } catch (const ParseError& e) {
        out.diagnostics.push_back(e.diagnostic());
        depth_ = 0;
        recover();
      }
    }
    return out;
  }

  ExprPtr whole_expression() {
    ExprPtr e = expression();
    if (!at(TokenKind::EndOfInput)) fail({"operator", "end of input"});
    return e;
  }

 private:
  [[nodiscard]] const Token& cur() const { return tokens_[i_]; }
  [[nodiscard]] const Token& ahead(std::size_t k) const {
    return tokens_[std::min(i_ + k, tokens_.size() - 1)];
  }
  [[nodiscard]] bool at(TokenKind k) const { return cur().kind == k; }

  const Token& take() {
    const Token& t = tokens_[i_];
    if (t.kind != TokenKind::EndOfInput) ++i_;
    return t;
  }

  bool accept(TokenKind k) {
    if (!at(k)) return false;
    take();
    return true;
  }

  const Token& expect(TokenKind k) {
    if (!at(k)) fail({token_kind_name(k)});
    return take();
  }

  [[noreturn]] void fail(std::initializer_list<std::string_view> expected) const {
    std::string msg = "expected ";
    bool first = true;
    for (auto e : expected) {
      if (!first) msg += " or ";
      msg += e;
      first = false;
    }
    msg += ", found ";
    msg += cur().kind == TokenKind::EndOfInput ? std::string("end of input") : "'" + cur().text + "'";
    throw ParseError(make_error("ParseError", std::move(msg), cur().pos));
  }

  void recover() {
    while (!at(TokenKind::EndOfInput)) {
      if (take().kind == TokenKind::Dot) return;
    }
  }

  Element element() {
    if (at(TokenKind::KwBounds)) return bounds();
    if (at(TokenKind::KwTable)) return table();
    if (at(TokenKind::Identifier)) return equation();
    fail({"'bounds'", "'table'", "identifier"});
  }

  long signed_integer() {
    const bool negative = accept(TokenKind::Minus);
    const Token& t = expect(TokenKind::Integer);
    long v = 0;
    auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc{}) throw ParseError(make_error("ParseError", "integer out of range", t.pos));
    return negative ? -v : v;
  }

  BoundsDecl bounds() {
    BoundsDecl b;
    b.pos = take().pos;
    b.name = expect(TokenKind::Identifier).text;
    expect(TokenKind::Colon);
    b.low = signed_integer();
    expect(TokenKind::KwTo);
    b.high = signed_integer();
    expect(TokenKind::Dot);
    return b;
  }

  TableDecl table() {
    TableDecl t;
    t.pos = take().pos;
    t.name = expect(TokenKind::Identifier).text;
    expect(TokenKind::Colon);
    while (at(TokenKind::Identifier)) t.dims.push_back(take().text);
    if (!at(TokenKind::Arrow)) fail({"bounds name", "'->'"});
    take();
    if (!at(TokenKind::Identifier)) fail({"result type"});
    auto rt = parse_result_type(cur().text);
    if (!rt) fail({"result type (general, number, currency, date, boolean)"});
    take();
    t.result_type = *rt;
    expect(TokenKind::Dot);
    return t;
  }

  IndexPattern pattern() {
    if (at(TokenKind::Integer) || at(TokenKind::Minus)) return ConstantPattern{signed_integer()};
    if (!at(TokenKind::Identifier)) fail({"integer", "index variable"});
    std::string name = take().text;
    std::optional<Comparator> cmp;
    switch (cur().kind) {
      case TokenKind::Less: cmp = Comparator::Less; break;
      case TokenKind::LessEqual: cmp = Comparator::LessEqual; break;
      case TokenKind::Greater: cmp = Comparator::Greater; break;
      case TokenKind::GreaterEqual: cmp = Comparator::GreaterEqual; break;
      case TokenKind::NotEqual: cmp = Comparator::NotEqual; break;
      default: break;
    }
    if (!cmp) return VarPattern{std::move(name)};
    take();
    return GuardedVarPattern{std::move(name), *cmp, signed_integer()};
  }

  EquationDecl equation() {
    EquationDecl q;
    const Token& name = take();
    q.table = name.text;
    q.pos = name.pos;
    expect(TokenKind::LBracket);
    if (!at(TokenKind::RBracket)) {
      do {
        q.lhs_patterns.push_back(pattern());
      } while (accept(TokenKind::Comma));
    }
    if (!at(TokenKind::RBracket)) fail({"','", "']'"});
    take();
    expect(TokenKind::Equal);
    q.rhs = expression();
    if (!at(TokenKind::Dot)) fail({"operator", "'.'"});
    take();
    return q;
  }

  // expression := additive (cmp additive)*
  ExprPtr expression() {
    if (++depth_ > kMaxNesting) throw ParseError(make_error("ParseError", "expression nested too deeply", cur().pos));
    ExprPtr lhs = additive();
    while (true) {
      std::optional<BinaryOp> op;
      switch (cur().kind) {
        case TokenKind::Equal: op = BinaryOp::Eq; break;
        case TokenKind::NotEqual: op = BinaryOp::Ne; break;
        case TokenKind::Less: op = BinaryOp::Lt; break;
        case TokenKind::LessEqual: op = BinaryOp::Le; break;
        case TokenKind::Greater: op = BinaryOp::Gt; break;
        case TokenKind::GreaterEqual: op = BinaryOp::Ge; break;
        default: break;
      }
      if (!op) break;
      const SourcePos pos = take().pos;
      lhs = make_expr(Binary{*op, lhs, additive()}, pos);
    }
    --depth_;
    return lhs;
  }

  ExprPtr additive() {
    ExprPtr lhs = term();
    while (at(TokenKind::Plus) || at(TokenKind::Minus)) {
      const Token& t = take();
      const BinaryOp op = t.kind == TokenKind::Plus ? BinaryOp::Add : BinaryOp::Sub;
      lhs = make_expr(Binary{op, lhs, term()}, t.pos);
    }
    return lhs;
  }

  ExprPtr term() {
    ExprPtr lhs = primary();
    while (at(TokenKind::Star) || at(TokenKind::Slash)) {
      const Token& t = take();
      const BinaryOp op = t.kind == TokenKind::Star ? BinaryOp::Mul : BinaryOp::Div;
      lhs = make_expr(Binary{op, lhs, primary()}, t.pos);
    }
    return lhs;
  }

  ExprPtr number(bool negative, SourcePos pos) {
    const Token& t = take();
    double v = 0;
    auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc{}) throw ParseError(make_error("ParseError", "number out of range", t.pos));
    return make_expr(NumberLit{negative ? -v : v}, pos);
  }

  std::vector<ExprPtr> list(TokenKind close) {
    std::vector<ExprPtr> items;
    if (!at(close)) {
      do {
        items.push_back(expression());
      } while (accept(TokenKind::Comma));
    }
    if (!at(close)) fail({"','", token_kind_name(close)});
    take();
    return items;
  }

  ExprPtr primary() {
    const SourcePos pos = cur().pos;
    switch (cur().kind) {
      case TokenKind::Integer:
      case TokenKind::Decimal: return number(false, pos);
      case TokenKind::Minus:
        take();
        if (!at(TokenKind::Integer) && !at(TokenKind::Decimal)) fail({"number after unary '-'"});
        return number(true, pos);
      case TokenKind::KwTrue: take(); return make_expr(BooleanLit{true}, pos);
      case TokenKind::KwFalse: take(); return make_expr(BooleanLit{false}, pos);
      case TokenKind::KwAll: take(); return make_expr(AllIndex{}, pos);
      case TokenKind::LParen: {
        take();
        ExprPtr inner = expression();
        expect(TokenKind::RParen);
        return inner;
      }
      case TokenKind::Identifier: return mode_ == LexMode::Spec ? spec_name() : formula_name();
      default: fail({"expression"});
    }
  }

  ExprPtr spec_name() {
    const Token& name = take();
    if (accept(TokenKind::LParen)) return make_expr(Call{name.text, list(TokenKind::RParen)}, name.pos);
    if (accept(TokenKind::LBracket)) return make_expr(ElementRef{name.text, list(TokenKind::RBracket)}, name.pos);
    return make_expr(IndexVar{name.text}, name.pos);
  }

  Address cell_name(std::string sheet) {
    if (!at(TokenKind::Identifier)) fail({"cell reference"});
    auto a = parse_cell_name(cur().text);
    if (!a) fail({"cell reference"});
    take();
    a->sheet = std::move(sheet);
    return *a;
  }

  ExprPtr formula_name() {
    const SourcePos pos = cur().pos;
    std::string sheet;
    if (ahead(1).kind == TokenKind::LParen) {
      const Token& name = take();
      take();
      return make_expr(Call{name.text, list(TokenKind::RParen)}, name.pos);
    }
    if (ahead(1).kind == TokenKind::Bang) {
      sheet = take().text;
      take();
    }
    Address first = cell_name(sheet);
    if (accept(TokenKind::Colon)) {
      Address last = cell_name(sheet);
      return make_expr(RangeRef{std::move(first), std::move(last)}, pos);
    }
    return make_expr(CellRef{std::move(first)}, pos);
  }

  std::vector<Token> tokens_;
  LexMode mode_;
  std::size_t i_ = 0;
  int depth_ = 0;
};

ExprPtr parse_single(std::string_view text, LexMode mode) {
  LexResult lexed = lex(text, mode);
  if (!lexed.diagnostics.empty()) throw ParseError(lexed.diagnostics.front());
  return Parser(std::move(lexed.tokens), mode).whole_expression();
}

}  // namespace

ParseResult parse_document(std::string_view text) {
  LexResult lexed = lex(text, LexMode::Spec);
  return Parser(std::move(lexed.tokens), LexMode::Spec)
      .document(std::move(lexed.comments), std::move(lexed.diagnostics));
}

ExprPtr parse_expression(std::string_view text) { return parse_single(text, LexMode::Spec); }

ExprPtr parse_a1_formula(std::string_view text) {
  if (text.empty() || text.front() != '=') {
    throw ParseError(make_error("ParseError", "formula must begin with '='", SourcePos{}));
  }
  // Positions are reported relative to the text after '='.
  return parse_single(text.substr(1), LexMode::Formula);
}

}  // namespace gridspec
