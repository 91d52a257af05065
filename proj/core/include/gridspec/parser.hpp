#pragma once

#include <stdexcept>
#include <string_view>

#include "gridspec/ast.hpp"
#include "gridspec/source.hpp"

namespace gridspec {

/// Raised by the single-expression entry points. The diagnostic's message
/// lists the expected token set.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(Diagnostic d) : std::runtime_error(format_diagnostic(d)), diag_(std::move(d)) {}
  [[nodiscard]] const Diagnostic& diagnostic() const noexcept { return diag_; }

 private:
  Diagnostic diag_;
};

struct ParseResult {
  SpecDocument document;
  Diagnostics diagnostics;

  [[nodiscard]] bool ok() const { return !has_errors(diagnostics); }
};

/// Parses a whole specification. Never throws on malformed input: a bad
/// element produces a ParseError diagnostic and parsing resumes after the
/// next `.`.
[[nodiscard]] ParseResult parse_document(std::string_view text);

/// Parses one right-hand-side expression (the whole input must be consumed).
[[nodiscard]] ExprPtr parse_expression(std::string_view text);

/// Parses "=<formula>" in A1 notation: cell and range references in place of
/// table elements, `Sheet!` prefixes allowed.
[[nodiscard]] ExprPtr parse_a1_formula(std::string_view text);

}  // namespace gridspec
