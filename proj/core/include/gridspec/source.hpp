#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace gridspec {

struct SourcePos {
  int line = 1;
  int column = 1;
  std::size_t byte_offset = 0;

  friend bool operator==(const SourcePos&, const SourcePos&) = default;
};

enum class Severity { Error, Warning };

/// One finding from the lexer, parser, analyzer or input loader.
///
/// `code` is a short stable identifier (e.g. "UncoveredCell") that tests and
/// scripts can match on; `message` is free text for humans.
struct Diagnostic {
  Severity severity = Severity::Error;
  std::string code;
  std::string message;
  SourcePos pos;
};

using Diagnostics = std::vector<Diagnostic>;

[[nodiscard]] bool has_errors(const Diagnostics& diags);

/// `severity code line:col message`
[[nodiscard]] std::string format_diagnostic(const Diagnostic& d);

[[nodiscard]] inline Diagnostic make_error(std::string code, std::string message, SourcePos pos) {
  return {Severity::Error, std::move(code), std::move(message), pos};
}

[[nodiscard]] inline Diagnostic make_warning(std::string code, std::string message, SourcePos pos) {
  return {Severity::Warning, std::move(code), std::move(message), pos};
}

}  // namespace gridspec
