#include "gridspec/verify.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "gridspec/evaluator.hpp"
#include "gridspec/parser.hpp"

namespace gridspec {
namespace {

class GridResolver final : public ReferenceResolver {
 public:
  GridResolver(const GridDocument& values, std::string sheet) : values_(values), sheet_(std::move(sheet)) {}

  Value cell(const Expr& ref) const override { return read(ref.as<CellRef>()->address); }

  std::vector<Value> range(const Expr& ref) const override {
    const auto& r = *ref.as<RangeRef>();
    std::vector<Value> out;
    const int r0 = std::min(r.first.row, r.last.row), r1 = std::max(r.first.row, r.last.row);
    const int c0 = std::min(r.first.column, r.last.column), c1 = std::max(r.first.column, r.last.column);
    for (int row = r0; row <= r1; ++row) {
      for (int col = c0; col <= c1; ++col) out.push_back(read(Address{r.first.sheet, col, row}));
    }
    return out;
  }

  std::optional<long> index_variable(std::string_view) const override { return std::nullopt; }

 private:
  Value read(const Address& a) const {
    const std::string& sheet = a.sheet.empty() ? sheet_ : a.sheet;
    auto it = values_.find(sheet);
    if (it == values_.end()) throw EvalError("UnknownSheet", "reference to unknown sheet '" + sheet + "'");
    const std::string& text = it->second.get(a);
    auto v = parse_value_text(text);
    if (!v) throw EvalError("BadValue", to_a1(Address{sheet, a.column, a.row}) + " holds non-value text '" + text + "'");
    return *v;
  }

  const GridDocument& values_;
  std::string sheet_;
};

std::string read_text(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

bool values_agree(const Value& a, const Value& b) {
  if (a.is_number() && b.is_number()) {
    const double x = a.as_number();
    const double y = b.as_number();
    const double scale = std::max({1.0, std::fabs(x), std::fabs(y)});
    return std::fabs(x - y) <= kVerifyRelativeTolerance * scale;
  }
  return a == b;
}

VerifyReport verify_grid(const GridDocument& formulas, const GridDocument& values) {
  VerifyReport report;
  for (const auto& [sheet, grid] : formulas) {
    auto vs = values.find(sheet);
    for (const auto& [rc, text] : grid.cells()) {
      if (text.empty() || text.front() != '=') continue;
      ++report.checks;
      const Address at{sheet, rc.second, rc.first};
      const std::string recorded = vs == values.end() ? std::string() : vs->second.get(at);
      Mismatch m{at, text, recorded, {}};
      auto own = parse_value_text(recorded);
      try {
        const ExprPtr e = parse_a1_formula(text);
        const Value v = cell_result(eval_with(*e, GridResolver(values, sheet)));
        if (own && values_agree(v, *own)) continue;
        m.recomputed = render_value(v);
      } catch (const ParseError& e) {
        m.recomputed = std::string("parse error: ") + e.what();
      } catch (const EvalError& e) {
        m.recomputed = std::string("error: ") + e.what();
      }
      report.mismatches.push_back(std::move(m));
    }
  }
  return report;
}

EmittedDirectory read_emitted_directory(const std::filesystem::path& dir) {
  EmittedDirectory out;
  out.manifest = manifest_from_json(read_text(dir / "manifest.json"));
  for (const auto& sheet : out.manifest.sheets) {
    out.formulas[sheet] = parse_csv(read_text(dir / (sheet + ".formulas.csv")));
    out.values[sheet] = parse_csv(read_text(dir / (sheet + ".values.csv")));
  }
  return out;
}

}  // namespace gridspec
