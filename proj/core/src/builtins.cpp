#include <cmath>

#include "gridspec/evaluator.hpp"

namespace gridspec {

EvalError::EvalError(std::string code, const std::string& message, std::optional<CellId> cell)
    : std::runtime_error(cell ? to_string(*cell) + ": " + message : message),
      code_(std::move(code)),
      detail_(message),
      cell_(std::move(cell)) {}

namespace {

std::string describe_path(const std::vector<CellId>& path) {
  std::string out = "cyclic dependency: ";
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) out += " -> ";
    out += to_string(path[i]);
  }
  return out;
}

}  // namespace

CycleError::CycleError(std::vector<CellId> path)
    : EvalError("CyclicDependency", describe_path(path)), path_(std::move(path)) {}

namespace {

const Value& scalar(const Argument& a, std::string_view fn) {
  if (const auto* v = std::get_if<Value>(&a)) return *v;
  throw EvalError("BadArgument", std::string(fn) + ": a range is not allowed here");
}

const std::vector<Value>& range(const Argument& a, std::string_view fn) {
  if (const auto* r = std::get_if<std::vector<Value>>(&a)) return *r;
  throw EvalError("BadArgument", std::string(fn) + ": expected a range");
}

void arity(std::span<const Argument> args, std::size_t lo, std::size_t hi, std::string_view fn) {
  if (args.size() < lo || args.size() > hi) {
    throw EvalError("BadArgumentCount", std::string(fn) + ": wrong number of arguments");
  }
}

bool truth(const Value& v, std::string_view fn) {
  if (v.is_boolean()) return v.as_boolean();
  if (v.is_blank()) return false;
  if (v.is_number()) return v.as_number() != 0;
  throw EvalError("TypeFault", std::string(fn) + ": expected a boolean, got " + std::string(v.kind_name()));
}

Value logical(std::span<const Argument> args, bool is_and) {
  const std::string_view fn = is_and ? "and" : "or";
  arity(args, 1, SIZE_MAX, fn);
  bool acc = is_and;
  for (const auto& a : args) {
    const Value& v = scalar(a, fn);
    if (v.is_na()) return Value::na();
    acc = is_and ? (acc && truth(v, fn)) : (acc || truth(v, fn));
  }
  return Value::boolean(acc);
}

long integer_part(const Value& v, std::string_view what) {
  double x = 0;
  if (v.is_number()) {
    x = v.as_number();
  } else if (!v.is_blank()) {
    throw EvalError("TypeFault", std::string("date: ") + std::string(what) + " must be a number");
  }
  if (x != std::floor(x) || std::fabs(x) > 1e9) {
    throw EvalError("InvalidDate", std::string("date: ") + std::string(what) + " must be a whole number");
  }
  return static_cast<long>(x);
}

}  // namespace

bool is_builtin(std::string_view name) {
  const std::string fn = canonical_function_name(name);
  return fn == "if" || fn == "or" || fn == "and" || fn == "not" || fn == "isna" || fn == "sum" || fn == "match" ||
         fn == "date";
}

Value apply_builtin(std::string_view name, std::span<const Argument> args) {
  const std::string fn = canonical_function_name(name);
  if (fn == "if") {
    arity(args, 3, 3, fn);
    const Value& c = scalar(args[0], fn);
    if (c.is_na()) return Value::na();
    return scalar(args[truth(c, fn) ? 1 : 2], fn);
  }
  if (fn == "or") return logical(args, false);
  if (fn == "and") return logical(args, true);
  if (fn == "not") {
    arity(args, 1, 1, fn);
    const Value& v = scalar(args[0], fn);
    if (v.is_na()) return Value::na();
    return Value::boolean(!truth(v, fn));
  }
  if (fn == "isna") {
    arity(args, 1, 1, fn);
    return Value::boolean(scalar(args[0], fn).is_na());
  }
  if (fn == "sum") {
    arity(args, 1, SIZE_MAX, fn);
    double total = 0;
    auto add = [&](const Value& v) -> bool {
      if (v.is_na()) return false;
      if (v.is_number()) total += v.as_number();
      if (v.is_date()) throw EvalError("TypeFault", "sum: cannot add a date");
      return true;
    };
    for (const auto& a : args) {
      if (const auto* r = std::get_if<std::vector<Value>>(&a)) {
        for (const auto& v : *r) {
          if (!add(v)) return Value::na();
        }
      } else if (!add(std::get<Value>(a))) {
        return Value::na();
      }
    }
    return Value::number(total);
  }
  if (fn == "match") {
    arity(args, 3, 3, fn);
    const Value& kind = scalar(args[2], fn);
    if (!kind.is_number() || kind.as_number() != 0) {
      throw EvalError("UnsupportedMatchType", "match: only match type 0 (exact) is supported");
    }
    const Value& needle = scalar(args[0], fn);
    if (needle.is_na()) return Value::na();
    const auto& haystack = range(args[1], fn);
    if (needle.is_blank()) return Value::na();
    for (std::size_t i = 0; i < haystack.size(); ++i) {
      if (haystack[i] == needle) return Value::number(static_cast<double>(i + 1));
    }
    return Value::na();
  }
  if (fn == "date") {
    arity(args, 3, 3, fn);
    for (const auto& a : args) {
      if (scalar(a, fn).is_na()) return Value::na();
    }
    const long y = integer_part(scalar(args[0], fn), "year");
    const long m = integer_part(scalar(args[1], fn), "month");
    const long d = integer_part(scalar(args[2], fn), "day");
    if (!is_valid_date(y, m, d)) {
      throw EvalError("InvalidDate", "date(" + std::to_string(y) + ", " + std::to_string(m) + ", " +
                                         std::to_string(d) + ") is not a valid calendar date");
    }
    return Value::date(Date{static_cast<int>(y), static_cast<int>(m), static_cast<int>(d)});
  }
  throw EvalError("UnknownFunction", "unknown function '" + std::string(name) + "'");
}

}  // namespace gridspec
