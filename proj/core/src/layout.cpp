#include "gridspec/layout.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace gridspec {

std::string_view orientation_name(Orientation o) {
  switch (o) {
    case Orientation::Scalar: return "scalar";
    case Orientation::Column: return "column";
    case Orientation::Block: return "block";
  }
  return "?";
}

std::string humanize_caption(std::string_view name) {
  std::string out(name);
  std::replace(out.begin(), out.end(), '_', ' ');
  if (!out.empty()) out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
  return out;
}

namespace {

Orientation orientation_of(const TableDecl& t) {
  if (t.dims.empty()) return Orientation::Scalar;
  if (t.dims.size() == 1) return Orientation::Column;
  return Orientation::Block;
}

std::string vertical_bounds_of(const TableDecl& t) {
  if (t.dims.empty()) return {};
  return t.dims.size() == 1 ? t.dims[0] : t.dims[1];
}

int block_columns(const SymbolTable& s, const TableDecl& t) {
  long cols = s.bounds.at(t.dims[0]).size();
  if (t.dims.size() == 3) cols *= s.bounds.at(t.dims[2]).size();
  return static_cast<int>(std::min<long>(cols, kMaxColumns + 1L));
}

/// Places `tables` (declaration order) on one sheet, appending bands.
void place_sheet(Layout& layout, const SymbolTable& s, const std::string& sheet, const std::vector<std::string>& tables,
                 int first_col) {
  if (tables.empty()) return;
  const std::size_t band_base = layout.bands.size();

  // Band membership, bands in order of first appearance.
  std::vector<std::vector<std::string>> members;
  std::vector<std::pair<std::string, Orientation>> keys;
  std::vector<std::string> scalars;
  for (const auto& name : tables) {
    const TableDecl& t = s.table(name);
    const Orientation o = orientation_of(t);
    if (o == Orientation::Scalar) {
      scalars.push_back(name);
      continue;
    }
    std::pair<std::string, Orientation> key{vertical_bounds_of(t), o};
    auto it = std::find(keys.begin(), keys.end(), key);
    if (it == keys.end()) {
      keys.push_back(key);
      members.emplace_back();
      it = keys.end() - 1;
    }
    members[static_cast<std::size_t>(it - keys.begin())].push_back(name);
  }
  if (keys.empty()) {
    keys.emplace_back(std::string{}, Orientation::Scalar);
    members.emplace_back();
  }
  // Scalars join the first band, keeping declaration order among its members.
  if (!scalars.empty()) {
    std::vector<std::string> merged;
    for (const auto& name : tables) {
      if (std::find(scalars.begin(), scalars.end(), name) != scalars.end() ||
          std::find(members[0].begin(), members[0].end(), name) != members[0].end()) {
        merged.push_back(name);
      }
    }
    members[0] = std::move(merged);
  }

  int header = 1;
  for (std::size_t b = 0; b < keys.size(); ++b) {
    RowBand band;
    band.sheet = sheet;
    band.vertical_bounds = keys[b].first;
    band.kind = keys[b].second;
    band.header_row = header;
    band.first_row = header + 2;
    band.rows = band.vertical_bounds.empty() ? 0 : static_cast<int>(std::min<long>(s.bounds.at(band.vertical_bounds).size(), kMaxRows + 1L));
    layout.bands.push_back(band);

    int col = first_col;
    bool first_block = true;
    for (const auto& name : members[b]) {
      const TableDecl& t = s.table(name);
      Region r;
      r.table = name;
      r.sheet = sheet;
      r.orientation = orientation_of(t);
      r.header_row = header;
      r.band = band_base + b;
      switch (r.orientation) {
        case Orientation::Scalar:
          r.top = header + 1;
          r.rows = 1;
          r.cols = 1;
          break;
        case Orientation::Column:
          r.top = band.first_row;
          r.rows = band.rows;
          r.cols = 1;
          break;
        case Orientation::Block:
          if (!first_block) ++col;
          first_block = false;
          r.top = band.first_row;
          r.rows = band.rows;
          r.cols = block_columns(s, t);
          break;
      }
      r.left = col;
      col += r.cols;
      if (r.right() > kMaxColumns || r.bottom() > kMaxRows) {
        throw LayoutError("LayoutOverflow", "table '" + name + "' does not fit on sheet " + sheet + " (ends at " +
                                                column_letters(std::min(r.right(), kMaxColumns + 1)) +
                                                std::to_string(r.bottom()) + ")");
      }
      layout.regions.emplace(name, std::move(r));
    }
    const int last = band.rows > 0 ? band.first_row + band.rows - 1 : header + 1;
    header = last + 2;
  }
}

}  // namespace

Layout plan_layout(const SymbolTable& symbols, const LayoutOptions& options) {
  Layout layout;
  layout.order = symbols.table_order;
  layout.sheets.emplace_back(kModelSheet);

  std::string caption;
  if (options.caption_table) {
    caption = *options.caption_table;
    if (!caption.empty() && !symbols.tables.count(caption)) {
      throw LayoutError("UnknownCaptionTable", "caption table '" + caption + "' is not declared");
    }
  } else if (symbols.tables.count("time")) {
    caption = "time";
  }

  std::vector<std::string> model;
  for (const auto& name : symbols.table_order) {
    if (name != caption) model.push_back(name);
  }
  place_sheet(layout, symbols, std::string(kModelSheet), model, 2);
  const std::size_t model_bands = layout.bands.size();
  if (!caption.empty()) {
    layout.sheets.emplace_back(kCaptionSheet);
    place_sheet(layout, symbols, std::string(kCaptionSheet), {caption}, 1);
    const TableDecl& t = symbols.table(caption);
    if (t.dims.size() == 1) {
      for (std::size_t b = 0; b < model_bands; ++b) {
        if (layout.bands[b].vertical_bounds == t.dims[0]) {
          layout.caption_column = CaptionColumn{std::string(kModelSheet), 1, caption};
          break;
        }
      }
    }
  }
  return layout;
}

Address address_of(const Layout& layout, const SymbolTable& symbols, const CellId& cell) {
  auto it = layout.regions.find(cell.table);
  if (it == layout.regions.end()) throw LayoutError("UnmappedCell", to_string(cell) + " has no place in the layout");
  const Region& r = it->second;
  const TableDecl& t = symbols.table(cell.table);
  auto offset = [&](std::size_t k) { return static_cast<int>(cell.indices.at(k) - symbols.bounds.at(t.dims[k]).low); };
  Address a{r.sheet, r.left, r.top};
  switch (r.orientation) {
    case Orientation::Scalar: break;
    case Orientation::Column: a.row += offset(0); break;
    case Orientation::Block: {
      a.row += offset(1);
      int col = offset(0);
      if (t.dims.size() == 3) col += offset(2) * static_cast<int>(symbols.bounds.at(t.dims[0]).size());
      a.column += col;
      break;
    }
  }
  return a;
}

namespace {

int formula_precedence(const Expr& e) {
  if (const auto* b = e.as<Binary>()) {
    if (is_comparison(b->op)) return 1;
    if (b->op == BinaryOp::Add || b->op == BinaryOp::Sub) return 2;
    return 3;
  }
  return 4;
}

class FormulaWriter {
 public:
  FormulaWriter(const RuleInstance& rule, const CellPlan& plan, const Layout& layout)
      : rule_(rule), plan_(plan), layout_(layout) {
    auto it = layout.regions.find(rule.cell.table);
    if (it == layout.regions.end()) throw LayoutError("UnmappedCell", to_string(rule.cell) + " has no place in the layout");
    sheet_ = it->second.sheet;
  }

  std::string run() {
    os_ << '=';
    write(*plan_.equation_of(rule_).rhs);
    return os_.str();
  }

 private:
  std::string ref(const Address& a) const { return to_a1(a, a.sheet != sheet_); }

  void write(const Expr& e) {
    if (const auto* n = e.as<NumberLit>()) {
      os_ << format_number(n->value);
    } else if (const auto* b = e.as<BooleanLit>()) {
      os_ << (b->value ? "TRUE" : "FALSE");
    } else if (const auto* v = e.as<IndexVar>()) {
      os_ << rule_.substitution.at(v->name);
    } else if (const auto* r = e.as<ElementRef>()) {
      element(*r);
    } else if (const auto* c = e.as<Call>()) {
      std::string name = c->name;
      for (auto& ch : name) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
      os_ << name << '(';
      for (std::size_t i = 0; i < c->args.size(); ++i) {
        if (i) os_ << ',';
        write(*c->args[i]);
      }
      os_ << ')';
    } else if (const auto* bin = e.as<Binary>()) {
      const int p = formula_precedence(e);
      const bool lp = formula_precedence(*bin->lhs) < p;
      const bool rp = formula_precedence(*bin->rhs) <= p;
      if (lp) os_ << '(';
      write(*bin->lhs);
      if (lp) os_ << ')';
      os_ << binary_op_text(bin->op);
      if (rp) os_ << '(';
      write(*bin->rhs);
      if (rp) os_ << ')';
    } else {
      throw LayoutError("UnrenderableExpression", "expression cannot be rendered as a formula");
    }
  }

  void element(const ElementRef& r) {
    const auto cells = expand_reference(r, rule_.substitution, plan_.symbols);
    if (!has_all_index(r)) {
      os_ << ref(address_of(layout_, plan_.symbols, cells.front()));
      return;
    }
    std::vector<Address> addrs;
    addrs.reserve(cells.size());
    for (const auto& c : cells) addrs.push_back(address_of(layout_, plan_.symbols, c));
    int r0 = addrs[0].row, r1 = r0, c0 = addrs[0].column, c1 = c0;
    for (const auto& a : addrs) {
      r0 = std::min(r0, a.row);
      r1 = std::max(r1, a.row);
      c0 = std::min(c0, a.column);
      c1 = std::max(c1, a.column);
    }
    const auto area = static_cast<std::size_t>(r1 - r0 + 1) * static_cast<std::size_t>(c1 - c0 + 1);
    if (area != addrs.size()) {
      throw LayoutError("NonContiguousRange", "range over '" + r.table + "' in " + to_string(rule_.cell) +
                                                 " is not a contiguous rectangle");
    }
    const std::string& sheet = addrs[0].sheet;
    os_ << ref(Address{sheet, c0, r0}) << ':' << to_a1(Address{sheet, c1, r1}, false);
  }

  const RuleInstance& rule_;
  const CellPlan& plan_;
  const Layout& layout_;
  std::string sheet_;
  std::ostringstream os_;
};

}  // namespace

std::string render_formula(const RuleInstance& rule, const CellPlan& plan, const Layout& layout) {
  return FormulaWriter(rule, plan, layout).run();
}

}  // namespace gridspec
