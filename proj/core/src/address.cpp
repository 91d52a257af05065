#include "gridspec/address.hpp"

#include <cctype>

namespace gridspec {

std::string column_letters(int column) {
  std::string out;
  while (column > 0) {
    const int rem = (column - 1) % 26;
    out.insert(out.begin(), static_cast<char>('A' + rem));
    column = (column - 1) / 26;
  }
  return out;
}

std::optional<int> column_number(std::string_view letters) {
  if (letters.empty() || letters.size() > 3) return std::nullopt;
  int n = 0;
  for (char c : letters) {
    const char u = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (u < 'A' || u > 'Z') return std::nullopt;
    n = n * 26 + (u - 'A' + 1);
  }
  return n;
}

std::string to_a1(const Address& a, bool with_sheet) {
  std::string out;
  if (with_sheet && !a.sheet.empty()) {
    out += a.sheet;
    out += '!';
  }
  out += column_letters(a.column);
  out += std::to_string(a.row);
  return out;
}

std::optional<Address> parse_cell_name(std::string_view text) {
  std::size_t i = 0;
  while (i < text.size() && std::isalpha(static_cast<unsigned char>(text[i]))) ++i;
  if (i == 0 || i == text.size()) return std::nullopt;
  auto col = column_number(text.substr(0, i));
  if (!col) return std::nullopt;
  if (text[i] == '0') return std::nullopt;
  long row = 0;
  for (std::size_t j = i; j < text.size(); ++j) {
    if (!std::isdigit(static_cast<unsigned char>(text[j]))) return std::nullopt;
    row = row * 10 + (text[j] - '0');
    if (row > kMaxRows) return std::nullopt;
  }
  if (*col > kMaxColumns) return std::nullopt;
  return Address{"", *col, static_cast<int>(row)};
}

}  // namespace gridspec
