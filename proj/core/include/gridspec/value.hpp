#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace gridspec {

/// Proleptic Gregorian calendar date. Only construction, equality and
/// ordering are supported.
struct Date {
  int year = 1;
  int month = 1;
  int day = 1;

  friend auto operator<=>(const Date&, const Date&) = default;
};

[[nodiscard]] bool is_valid_date(long year, long month, long day);

enum class NumberFormat { Plain, Currency };

/// A runtime cell value. NA is the only error value. The number format tag
/// is presentation only and never affects comparison or arithmetic.
class Value {
 public:
  struct Blank {};
  struct Number {
    double value = 0;
    NumberFormat format = NumberFormat::Plain;
  };
  struct NotAvailable {};

  Value() = default;

  [[nodiscard]] static Value blank() { return Value{}; }
  [[nodiscard]] static Value number(double v, NumberFormat f = NumberFormat::Plain) { return Value(Number{v, f}); }
  [[nodiscard]] static Value currency(double v) { return number(v, NumberFormat::Currency); }
  [[nodiscard]] static Value boolean(bool b) { return Value(b); }
  [[nodiscard]] static Value date(Date d) { return Value(d); }
  [[nodiscard]] static Value na() { return Value(NotAvailable{}); }

  [[nodiscard]] bool is_blank() const { return std::holds_alternative<Blank>(v_); }
  [[nodiscard]] bool is_number() const { return std::holds_alternative<Number>(v_); }
  [[nodiscard]] bool is_boolean() const { return std::holds_alternative<bool>(v_); }
  [[nodiscard]] bool is_date() const { return std::holds_alternative<Date>(v_); }
  [[nodiscard]] bool is_na() const { return std::holds_alternative<NotAvailable>(v_); }

  [[nodiscard]] double as_number() const { return std::get<Number>(v_).value; }
  [[nodiscard]] NumberFormat format() const { return std::get<Number>(v_).format; }
  [[nodiscard]] bool as_boolean() const { return std::get<bool>(v_); }
  [[nodiscard]] const Date& as_date() const { return std::get<Date>(v_); }

  /// Same number with a different format tag; other kinds unchanged.
  [[nodiscard]] Value with_format(NumberFormat f) const {
    return is_number() ? number(as_number(), f) : *this;
  }

  [[nodiscard]] std::string_view kind_name() const;

  /// Type-and-value equality (Number 1 != Boolean true; format ignored).
  friend bool operator==(const Value& a, const Value& b);

 private:
  explicit Value(Number n) : v_(n) {}
  explicit Value(bool b) : v_(b) {}
  explicit Value(Date d) : v_(d) {}
  explicit Value(NotAvailable n) : v_(n) {}

  std::variant<Blank, Number, bool, Date, NotAvailable> v_;
};

/// Machine-readable cell text: currency to two decimals without a symbol,
/// other numbers in shortest round-trip form, TRUE/FALSE, #N/A, YYYY-MM-DD,
/// and the empty string for Blank.
[[nodiscard]] std::string render_value(const Value& v);

/// Inverse of render_value up to the format tag; nullopt for text that is
/// not a value (captions).
[[nodiscard]] std::optional<Value> parse_value_text(std::string_view text);

[[nodiscard]] std::string format_date(const Date& d);
[[nodiscard]] std::optional<Date> parse_date(std::string_view text);

}  // namespace gridspec
