#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gridspec/source.hpp"

namespace gridspec {

enum class TokenKind {
  Identifier,
  Integer,
  Decimal,
  // keywords
  KwBounds,
  KwTable,
  KwTo,
  KwAll,
  KwTrue,
  KwFalse,
  // symbols
  Colon,
  Arrow,
  LBracket,
  RBracket,
  LParen,
  RParen,
  Comma,
  Equal,
  Plus,
  Minus,
  Star,
  Slash,
  Less,
  Greater,
  LessEqual,
  GreaterEqual,
  NotEqual,
  Dot,
  Bang,  // sheet separator, formula mode only
  EndOfInput,
};

struct Token {
  TokenKind kind = TokenKind::EndOfInput;
  std::string text;
  SourcePos pos;
};

struct Comment {
  std::string text;
  SourcePos pos;

  friend bool operator==(const Comment& a, const Comment& b) { return a.text == b.text; }
};

enum class LexMode {
  /// Specification documents: `--` comments, lower-case keywords.
  Spec,
  /// A1 formulas: `!` allowed, TRUE/FALSE case-insensitive, no comments or
  /// keywords other than the booleans.
  Formula,
};

class LexError : public std::runtime_error {
 public:
  explicit LexError(Diagnostic d) : std::runtime_error(format_diagnostic(d)), diag_(std::move(d)) {}
  [[nodiscard]] const Diagnostic& diagnostic() const noexcept { return diag_; }

 private:
  Diagnostic diag_;
};

struct LexResult {
  std::vector<Token> tokens;
  std::vector<Comment> comments;
  Diagnostics diagnostics;
};

/// Lexes the whole input, collecting IllegalCharacter diagnostics instead of
/// stopping at the first one. Consecutive `--` lines form one comment block.
[[nodiscard]] LexResult lex(std::string_view text, LexMode mode = LexMode::Spec);

/// Throws LexError on the first illegal character.
[[nodiscard]] std::vector<Token> tokenize(std::string_view text, LexMode mode = LexMode::Spec);

[[nodiscard]] std::string_view token_kind_name(TokenKind kind);

}  // namespace gridspec
