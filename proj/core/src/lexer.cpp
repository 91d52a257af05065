#include "gridspec/lexer.hpp"

#include <cctype>
#include <string>

namespace gridspec {

bool has_errors(const Diagnostics& diags) {
  for (const auto& d : diags) {
    if (d.severity == Severity::Error) return true;
  }
  return false;
}

std::string format_diagnostic(const Diagnostic& d) {
  std::string out = d.severity == Severity::Error ? "error " : "warning ";
  out += d.code;
  out += ' ';
  out += std::to_string(d.pos.line);
  out += ':';
  out += std::to_string(d.pos.column);
  out += ' ';
  out += d.message;
  return out;
}

namespace {

bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) != 0 || c == '_';
}
bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
}
bool is_digit(char c) { return c >= '0' && c <= '9'; }

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

class Lexer {
 public:
  Lexer(std::string_view text, LexMode mode) : text_(text), mode_(mode) {
    if (text_.substr(0, 3) == "\xEF\xBB\xBF") {
      i_ = 3;
      col_ = 1;
    }
  }

  LexResult run() {
    LexResult out;
    int last_comment_line = -1;
    std::size_t tokens_at_last_comment = 0;
    while (true) {
      skip_whitespace();
      if (i_ >= text_.size()) break;
      const SourcePos start = pos();
      const char c = text_[i_];

      if (mode_ == LexMode::Spec && c == '-' && peek(1) == '-') {
        std::size_t end = text_.find('\n', i_);
        if (end == std::string_view::npos) end = text_.size();
        std::string body = trim(text_.substr(i_ + 2, end - i_ - 2));
        advance(end - i_);
        if (!out.comments.empty() && last_comment_line == start.line - 1 &&
            tokens_at_last_comment == out.tokens.size()) {
          out.comments.back().text += '\n';
          out.comments.back().text += body;
        } else {
          out.comments.push_back({std::move(body), start});
        }
        last_comment_line = start.line;
        tokens_at_last_comment = out.tokens.size();
        continue;
      }

      if (is_ident_start(c)) {
        std::size_t j = i_;
        while (j < text_.size() && is_ident_char(text_[j])) ++j;
        std::string word(text_.substr(i_, j - i_));
        advance(j - i_);
        out.tokens.push_back({keyword_or_identifier(word), std::move(word), start});
        continue;
      }

      if (is_digit(c)) {
        std::size_t j = i_;
        while (j < text_.size() && is_digit(text_[j])) ++j;
        TokenKind kind = TokenKind::Integer;
        if (j + 1 < text_.size() && text_[j] == '.' && is_digit(text_[j + 1])) {
          kind = TokenKind::Decimal;
          ++j;
          while (j < text_.size() && is_digit(text_[j])) ++j;
        }
        std::string digits(text_.substr(i_, j - i_));
        advance(j - i_);
        out.tokens.push_back({kind, std::move(digits), start});
        continue;
      }

      if (auto kind = symbol(); kind.first != TokenKind::EndOfInput) {
        std::string sym(text_.substr(i_, kind.second));
        advance(kind.second);
        out.tokens.push_back({kind.first, std::move(sym), start});
        continue;
      }

      // Report a multi-byte UTF-8 sequence once.
      std::size_t len = 1;
      const auto uc = static_cast<unsigned char>(c);
      if (uc >= 0xC0) {
        while (i_ + len < text_.size() && (static_cast<unsigned char>(text_[i_ + len]) & 0xC0) == 0x80) ++len;
      }
      out.diagnostics.push_back(make_error(
          "IllegalCharacter", "illegal character '" + std::string(text_.substr(i_, len)) + "'", start));
      advance(len);
    }
    out.tokens.push_back({TokenKind::EndOfInput, "", pos()});
    return out;
  }

 private:
  [[nodiscard]] SourcePos pos() const { return {line_, col_, i_}; }
  [[nodiscard]] char peek(std::size_t k) const { return i_ + k < text_.size() ? text_[i_ + k] : '\0'; }

  void advance(std::size_t n) {
    for (std::size_t k = 0; k < n && i_ < text_.size(); ++k, ++i_) {
      if (text_[i_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
    }
  }

  void skip_whitespace() {
    while (i_ < text_.size()) {
      const char c = text_[i_];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v') {
        advance(1);
      } else {
        break;
      }
    }
  }

  [[nodiscard]] TokenKind keyword_or_identifier(const std::string& word) const {
    if (mode_ == LexMode::Formula) {
      const std::string w = lower(word);
      if (w == "true") return TokenKind::KwTrue;
      if (w == "false") return TokenKind::KwFalse;
      return TokenKind::Identifier;
    }
    if (word == "bounds") return TokenKind::KwBounds;
    if (word == "table") return TokenKind::KwTable;
    if (word == "to") return TokenKind::KwTo;
    if (word == "all") return TokenKind::KwAll;
    if (word == "true") return TokenKind::KwTrue;
    if (word == "false") return TokenKind::KwFalse;
    return TokenKind::Identifier;
  }

  [[nodiscard]] std::pair<TokenKind, std::size_t> symbol() const {
    const char c = text_[i_];
    const char n = peek(1);
    switch (c) {
      case ':': return {TokenKind::Colon, 1};
      case '[': return {TokenKind::LBracket, 1};
      case ']': return {TokenKind::RBracket, 1};
      case '(': return {TokenKind::LParen, 1};
      case ')': return {TokenKind::RParen, 1};
      case ',': return {TokenKind::Comma, 1};
      case '=': return {TokenKind::Equal, 1};
      case '+': return {TokenKind::Plus, 1};
      case '*': return {TokenKind::Star, 1};
      case '/': return {TokenKind::Slash, 1};
      case '.': return {TokenKind::Dot, 1};
      case '-':
        if (n == '>' && mode_ == LexMode::Spec) return {TokenKind::Arrow, 2};
        return {TokenKind::Minus, 1};
      case '<':
        if (n == '=') return {TokenKind::LessEqual, 2};
        if (n == '>') return {TokenKind::NotEqual, 2};
        return {TokenKind::Less, 1};
      case '>':
        if (n == '=') return {TokenKind::GreaterEqual, 2};
        return {TokenKind::Greater, 1};
      case '!':
        if (mode_ == LexMode::Formula) return {TokenKind::Bang, 1};
        break;
      default: break;
    }
    return {TokenKind::EndOfInput, 0};
  }

  std::string_view text_;
  LexMode mode_;
  std::size_t i_ = 0;
  int line_ = 1;
  int col_ = 1;
};

}  // namespace

LexResult lex(std::string_view text, LexMode mode) { return Lexer(text, mode).run(); }

std::vector<Token> tokenize(std::string_view text, LexMode mode) {
  LexResult r = lex(text, mode);
  if (!r.diagnostics.empty()) throw LexError(r.diagnostics.front());
  return std::move(r.tokens);
}

std::string_view token_kind_name(TokenKind kind) {
  switch (kind) {
    case TokenKind::Identifier: return "identifier";
    case TokenKind::Integer: return "integer";
    case TokenKind::Decimal: return "decimal";
    case TokenKind::KwBounds: return "'bounds'";
    case TokenKind::KwTable: return "'table'";
    case TokenKind::KwTo: return "'to'";
    case TokenKind::KwAll: return "'all'";
    case TokenKind::KwTrue: return "'true'";
    case TokenKind::KwFalse: return "'false'";
    case TokenKind::Colon: return "':'";
    case TokenKind::Arrow: return "'->'";
    case TokenKind::LBracket: return "'['";
    case TokenKind::RBracket: return "']'";
    case TokenKind::LParen: return "'('";
    case TokenKind::RParen: return "')'";
    case TokenKind::Comma: return "','";
    case TokenKind::Equal: return "'='";
    case TokenKind::Plus: return "'+'";
    case TokenKind::Minus: return "'-'";
    case TokenKind::Star: return "'*'";
    case TokenKind::Slash: return "'/'";
    case TokenKind::Less: return "'<'";
    case TokenKind::Greater: return "'>'";
    case TokenKind::LessEqual: return "'<='";
    case TokenKind::GreaterEqual: return "'>='";
    case TokenKind::NotEqual: return "'<>'";
    case TokenKind::Dot: return "'.'";
    case TokenKind::Bang: return "'!'";
    case TokenKind::EndOfInput: return "end of input";
  }
  return "?";
}

}  // namespace gridspec
