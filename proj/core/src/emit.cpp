#include "gridspec/emit.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace gridspec {

void SheetGrid::set(int row, int column, std::string text) {
  extend(row, column);
  if (text.empty()) {
    cells_.erase({row, column});
  } else {
    cells_[{row, column}] = std::move(text);
  }
}

const std::string& SheetGrid::get(int row, int column) const {
  static const std::string kEmpty;
  auto it = cells_.find({row, column});
  return it == cells_.end() ? kEmpty : it->second;
}

void SheetGrid::extend(int rows, int cols) {
  rows_ = std::max(rows_, rows);
  cols_ = std::max(cols_, cols);
}

namespace {

NumberFormat format_for(const TableDecl& t) {
  return t.result_type == ResultType::Currency ? NumberFormat::Currency : NumberFormat::Plain;
}

// Indexed tables only count as mentioned when written with a subscript, so
// "at any time" does not attach to the time table.
bool mentions(std::string_view text, std::string_view word, bool indexed) {
  auto is_ident = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_'; };
  for (std::size_t at = text.find(word); at != std::string_view::npos; at = text.find(word, at + 1)) {
    const bool left = at == 0 || !is_ident(text[at - 1]);
    const std::size_t end = at + word.size();
    const bool right = indexed ? end < text.size() && text[end] == '[' : end == text.size() || !is_ident(text[end]);
    if (left && right) return true;
  }
  return false;
}

std::map<std::string, std::string> attach_comments(const SpecDocument& doc, const SymbolTable& symbols) {
  std::map<std::string, std::string> out;
  auto append = [&](const std::string& table, const std::string& text) {
    auto& slot = out[table];
    if (!slot.empty()) slot += '\n';
    slot += text;
  };
  for (const auto& c : doc.comments) {
    bool any = false;
    for (const auto& name : symbols.table_order) {
      if (mentions(c.text, name, !symbols.tables.at(name).dims.empty())) {
        append(name, c.text);
        any = true;
      }
    }
    if (any) continue;
    const TableDecl* preceding = nullptr;
    for (const auto& el : doc.elements) {
      const auto* t = std::get_if<TableDecl>(&el);
      if (t && t->pos.byte_offset < c.pos.byte_offset && symbols.tables.count(t->name)) preceding = t;
    }
    if (preceding) append(preceding->name, c.text);
  }
  return out;
}

/// Captions and the caption column, shared by both documents.
GridDocument skeleton(const Layout& layout, const CellPlan& plan, const ValueGrid& values) {
  GridDocument doc;
  for (const auto& sheet : layout.sheets) doc[sheet];
  for (const auto& [name, r] : layout.regions) {
    SheetGrid& g = doc[r.sheet];
    g.set(r.header_row, r.left, humanize_caption(name));
    g.extend(r.bottom(), r.right());
  }
  if (layout.caption_column) {
    const auto& cc = *layout.caption_column;
    const TableDecl& src = plan.symbols.table(cc.source_table);
    const BoundsInfo& b = plan.symbols.bounds.at(src.dims[0]);
    SheetGrid& g = doc[cc.sheet];
    bool header_done = false;
    for (const auto& band : layout.bands) {
      if (band.sheet != cc.sheet || band.vertical_bounds != src.dims[0]) continue;
      if (!header_done) {
        g.set(band.header_row, cc.column, humanize_caption(cc.source_table));
        header_done = true;
      }
      for (long i = b.low; i <= b.high; ++i) {
        g.set(band.first_row + static_cast<int>(i - b.low), cc.column,
              render_value(values.at(CellId{cc.source_table, {i}})));
      }
    }
  }
  return doc;
}

}  // namespace

GridDocument emit_values(const Layout& layout, const CellPlan& plan, const ValueGrid& values) {
  GridDocument doc = skeleton(layout, plan, values);
  for (const auto& [id, v] : values.cells) {
    const Address a = address_of(layout, plan.symbols, id);
    doc[a.sheet].set(a.row, a.column, render_value(v));
  }
  return doc;
}

Emission emit(const Layout& layout, const CellPlan& plan, const ValueGrid& values, const InputBindings& inputs,
              const SpecDocument& doc) {
  Emission out;
  out.values = emit_values(layout, plan, values);
  out.formulas = skeleton(layout, plan, values);
  for (const auto& [id, rule] : plan.rules) {
    const Address a = address_of(layout, plan.symbols, id);
    out.formulas[a.sheet].set(a.row, a.column, render_formula(rule, plan, layout));
  }
  for (const auto& id : plan.inputs) {
    auto b = inputs.find(id);
    if (b == inputs.end()) continue;
    const Address a = address_of(layout, plan.symbols, id);
    out.formulas[a.sheet].set(a.row, a.column, render_value(b->second.with_format(format_for(plan.symbols.table(id.table)))));
  }

  Manifest& m = out.manifest;
  m.sheets = layout.sheets;
  for (const auto& [name, b] : plan.symbols.bounds) m.bounds.emplace_back(name, b);
  m.caption_column = layout.caption_column;
  const auto comments = attach_comments(doc, plan.symbols);
  for (const auto& name : layout.order) {
    const Region& r = layout.regions.at(name);
    const TableDecl& t = plan.symbols.table(name);
    ManifestEntry e;
    e.name = name;
    e.sheet = r.sheet;
    e.first = Address{r.sheet, r.left, r.top};
    e.last = Address{r.sheet, r.right(), r.bottom()};
    e.header_row = r.header_row;
    e.orientation = r.orientation;
    e.dims = t.dims;
    e.result_type = t.result_type;
    e.table_class = classify(plan.symbols, name);
    if (auto it = comments.find(name); it != comments.end()) e.comment = it->second;
    m.tables.push_back(std::move(e));
  }
  return out;
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

std::string to_csv(const SheetGrid& grid) {
  std::string out;
  for (int r = 1; r <= grid.rows(); ++r) {
    for (int c = 1; c <= grid.cols(); ++c) {
      if (c > 1) out += ',';
      const std::string& f = grid.get(r, c);
      if (f.find_first_of(",\"\r\n") == std::string::npos) {
        out += f;
      } else {
        out += '"';
        for (char ch : f) {
          if (ch == '"') out += '"';
          out += ch;
        }
        out += '"';
      }
    }
    out += '\n';
  }
  return out;
}

std::vector<std::vector<std::string>> parse_csv_records(std::string_view text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  std::size_t i = 0;
  bool pending = false;  // a record has started
  while (i < text.size()) {
    const char c = text[i];
    if (c == '"' && field.empty()) {
      ++i;
      while (true) {
        if (i >= text.size()) throw std::runtime_error("unterminated quoted CSV field");
        if (text[i] == '"') {
          if (i + 1 < text.size() && text[i + 1] == '"') {
            field += '"';
            i += 2;
            continue;
          }
          ++i;
          break;
        }
        field += text[i++];
      }
      if (i < text.size() && text[i] != ',' && text[i] != '\n' && text[i] != '\r') {
        throw std::runtime_error("unexpected character after quoted CSV field");
      }
      pending = true;
      continue;
    }
    if (c == ',') {
      record.push_back(std::move(field));
      field.clear();
      pending = true;
      ++i;
      continue;
    }
    if (c == '\r' || c == '\n') {
      record.push_back(std::move(field));
      field.clear();
      records.push_back(std::move(record));
      record.clear();
      pending = false;
      i += (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ? 2 : 1;
      continue;
    }
    field += c;
    pending = true;
    ++i;
  }
  if (pending) {
    record.push_back(std::move(field));
    records.push_back(std::move(record));
  }
  return records;
}

SheetGrid parse_csv(std::string_view text) {
  SheetGrid g;
  const auto records = parse_csv_records(text);
  for (std::size_t r = 0; r < records.size(); ++r) {
    g.extend(static_cast<int>(r + 1), static_cast<int>(records[r].size()));
    for (std::size_t c = 0; c < records[r].size(); ++c) {
      if (!records[r][c].empty()) g.set(static_cast<int>(r + 1), static_cast<int>(c + 1), records[r][c]);
    }
  }
  return g;
}

// ---------------------------------------------------------------------------
// Manifest
// ---------------------------------------------------------------------------

std::string manifest_to_json(const Manifest& m) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["sheets"] = m.sheets;
  j["bounds"] = ordered_json::array();
  for (const auto& [name, b] : m.bounds) {
    j["bounds"].push_back({{"name", name}, {"low", b.low}, {"high", b.high}});
  }
  if (m.caption_column) {
    j["caption_column"] = {{"sheet", m.caption_column->sheet},
                           {"column", column_letters(m.caption_column->column)},
                           {"source_table", m.caption_column->source_table}};
  } else {
    j["caption_column"] = nullptr;
  }
  j["tables"] = ordered_json::array();
  for (const auto& t : m.tables) {
    ordered_json e;
    e["name"] = t.name;
    e["sheet"] = t.sheet;
    e["range"] = to_a1(t.first, false) + ":" + to_a1(t.last, false);
    e["top"] = t.first.row;
    e["left"] = t.first.column;
    e["bottom"] = t.last.row;
    e["right"] = t.last.column;
    e["header_row"] = t.header_row;
    e["orientation"] = orientation_name(t.orientation);
    e["dims"] = t.dims;
    e["result_type"] = result_type_name(t.result_type);
    e["format"] = t.result_type == ResultType::Currency ? "currency" : "plain";
    e["class"] = t.table_class == TableClass::Input ? "input" : "derived";
    e["comment"] = t.comment;
    j["tables"].push_back(std::move(e));
  }
  return j.dump(2) + "\n";
}

Manifest manifest_from_json(std::string_view text) {
  Manifest m;
  try {
    const auto j = nlohmann::json::parse(text);
    m.sheets = j.at("sheets").get<std::vector<std::string>>();
    for (const auto& b : j.at("bounds")) {
      m.bounds.emplace_back(b.at("name").get<std::string>(), BoundsInfo{b.at("low").get<long>(), b.at("high").get<long>(), {}});
    }
    if (j.contains("caption_column") && !j.at("caption_column").is_null()) {
      const auto& c = j.at("caption_column");
      auto col = column_number(c.at("column").get<std::string>());
      if (!col) throw std::runtime_error("bad caption column");
      m.caption_column = CaptionColumn{c.at("sheet").get<std::string>(), *col, c.at("source_table").get<std::string>()};
    }
    for (const auto& t : j.at("tables")) {
      ManifestEntry e;
      e.name = t.at("name").get<std::string>();
      e.sheet = t.at("sheet").get<std::string>();
      e.first = Address{e.sheet, t.at("left").get<int>(), t.at("top").get<int>()};
      e.last = Address{e.sheet, t.at("right").get<int>(), t.at("bottom").get<int>()};
      e.header_row = t.at("header_row").get<int>();
      const auto o = t.at("orientation").get<std::string>();
      e.orientation = o == "scalar" ? Orientation::Scalar : o == "block" ? Orientation::Block : Orientation::Column;
      e.dims = t.at("dims").get<std::vector<std::string>>();
      auto rt = parse_result_type(t.at("result_type").get<std::string>());
      if (!rt) throw std::runtime_error("bad result type in manifest");
      e.result_type = *rt;
      e.table_class = t.at("class").get<std::string>() == "derived" ? TableClass::Derived : TableClass::Input;
      e.comment = t.at("comment").get<std::string>();
      m.tables.push_back(std::move(e));
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("malformed manifest: ") + e.what());
  }
  return m;
}

namespace {

void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << content;
  out.close();
  if (!out) throw std::runtime_error("failed writing " + p.string());
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw std::runtime_error("cannot create directory " + dir.string() + (ec ? ": " + ec.message() : ""));
  }
}

}  // namespace

void write_values(const GridDocument& values, const std::filesystem::path& dir) {
  ensure_dir(dir);
  for (const auto& [sheet, grid] : values) write_file(dir / (sheet + ".values.csv"), to_csv(grid));
}

void write_emission(const Emission& e, const std::filesystem::path& dir) {
  ensure_dir(dir);
  for (const auto& [sheet, grid] : e.formulas) write_file(dir / (sheet + ".formulas.csv"), to_csv(grid));
  for (const auto& [sheet, grid] : e.values) write_file(dir / (sheet + ".values.csv"), to_csv(grid));
  write_file(dir / "manifest.json", manifest_to_json(e.manifest));
}

}  // namespace gridspec
