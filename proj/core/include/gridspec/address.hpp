#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace gridspec {

inline constexpr int kMaxColumns = 16384;
inline constexpr int kMaxRows = 1048576;

/// A cell position in A1 terms. An empty sheet means "the sheet the
/// referring formula lives on".
struct Address {
  std::string sheet;
  int column = 1;  // 1-based
  int row = 1;     // 1-based

  friend auto operator<=>(const Address&, const Address&) = default;
};

/// Bijective base-26: 1 -> "A", 26 -> "Z", 27 -> "AA".
[[nodiscard]] std::string column_letters(int column);

/// Inverse of column_letters; nullopt for anything that is not all letters.
[[nodiscard]] std::optional<int> column_number(std::string_view letters);

/// "E3", or "Time!A3" when `with_sheet` and the sheet is non-empty.
[[nodiscard]] std::string to_a1(const Address& a, bool with_sheet = true);

/// Parses "E3" (no sheet part). Column letters are case-insensitive.
[[nodiscard]] std::optional<Address> parse_cell_name(std::string_view text);

}  // namespace gridspec
