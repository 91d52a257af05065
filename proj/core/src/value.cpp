#include "gridspec/value.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "gridspec/ast.hpp"

namespace gridspec {

bool is_valid_date(long year, long month, long day) {
  if (year < 1 || year > 9999 || month < 1 || month > 12 || day < 1) return false;
  static constexpr int kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  const bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
  const long last = month == 2 && leap ? 29 : kDays[month - 1];
  return day <= last;
}

std::string_view Value::kind_name() const {
  switch (v_.index()) {
    case 0: return "blank";
    case 1: return "number";
    case 2: return "boolean";
    case 3: return "date";
    default: return "#N/A";
  }
}

bool operator==(const Value& a, const Value& b) {
  if (a.v_.index() != b.v_.index()) return false;
  if (a.is_number()) return a.as_number() == b.as_number();
  if (a.is_boolean()) return a.as_boolean() == b.as_boolean();
  if (a.is_date()) return a.as_date() == b.as_date();
  return true;
}

std::string format_date(const Date& d) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", d.year, d.month, d.day);
  return buf;
}

std::optional<Date> parse_date(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  auto field = [&](std::size_t at, std::size_t len) -> std::optional<int> {
    int v = 0;
    for (std::size_t i = at; i < at + len; ++i) {
      if (!std::isdigit(static_cast<unsigned char>(text[i]))) return std::nullopt;
      v = v * 10 + (text[i] - '0');
    }
    return v;
  };
  auto y = field(0, 4);
  auto m = field(5, 2);
  auto d = field(8, 2);
  if (!y || !m || !d || !is_valid_date(*y, *m, *d)) return std::nullopt;
  return Date{*y, *m, *d};
}

std::string render_value(const Value& v) {
  if (v.is_blank()) return "";
  if (v.is_na()) return "#N/A";
  if (v.is_boolean()) return v.as_boolean() ? "TRUE" : "FALSE";
  if (v.is_date()) return format_date(v.as_date());
  if (v.format() == NumberFormat::Currency) {
    char buf[512];
    std::snprintf(buf, sizeof buf, "%.2f", v.as_number());
    std::string out = buf;
    if (out == "-0.00") out = "0.00";
    return out;
  }
  return format_number(v.as_number());
}

std::optional<Value> parse_value_text(std::string_view text) {
  if (text.empty()) return Value::blank();
  if (text == "#N/A") return Value::na();
  std::string upper(text);
  for (auto& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (upper == "TRUE") return Value::boolean(true);
  if (upper == "FALSE") return Value::boolean(false);
  if (auto d = parse_date(text)) return Value::date(*d);
  double x = 0;
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), x);
  if (ec == std::errc{} && p == text.data() + text.size() && std::isfinite(x)) return Value::number(x);
  return std::nullopt;
}

}  // namespace gridspec
