#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gridspec/analyzer.hpp"
#include "gridspec/evaluator.hpp"
#include "gridspec/layout.hpp"

namespace gridspec {

/// Sparse cell text for one sheet, with an explicit rectangular extent.
class SheetGrid {
 public:
  void set(int row, int column, std::string text);
  [[nodiscard]] const std::string& get(int row, int column) const;
  [[nodiscard]] const std::string& get(const Address& a) const { return get(a.row, a.column); }
  void extend(int rows, int cols);

  [[nodiscard]] int rows() const { return rows_; }
  [[nodiscard]] int cols() const { return cols_; }
  /// Non-empty cells in row-major order.
  [[nodiscard]] const std::map<std::pair<int, int>, std::string>& cells() const { return cells_; }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::map<std::pair<int, int>, std::string> cells_;
};

/// Sheet name -> grid. Used for both the formula grid and the values document.
using GridDocument = std::map<std::string, SheetGrid>;

struct ManifestEntry {
  std::string name;
  std::string sheet;
  Address first;  // top-left data cell
  Address last;   // bottom-right data cell
  int header_row = 1;
  Orientation orientation = Orientation::Column;
  std::vector<std::string> dims;
  ResultType result_type = ResultType::General;
  TableClass table_class = TableClass::Input;
  std::string comment;
};

struct Manifest {
  std::vector<std::string> sheets;
  std::vector<std::pair<std::string, BoundsInfo>> bounds;
  std::optional<CaptionColumn> caption_column;
  std::vector<ManifestEntry> tables;
};

struct Emission {
  GridDocument formulas;
  GridDocument values;
  Manifest manifest;
};

/// Formula grid (formulas for derived cells, literals for bound inputs,
/// captions in header rows and the caption column), the parallel values
/// document, and the manifest. `comments` are attached to the tables they
/// name, or else to the nearest preceding table declaration.
[[nodiscard]] Emission emit(const Layout& layout, const CellPlan& plan, const ValueGrid& values,
                            const InputBindings& inputs, const SpecDocument& doc);

/// Values document only (what `eval` writes).
[[nodiscard]] GridDocument emit_values(const Layout& layout, const CellPlan& plan, const ValueGrid& values);

// RFC-4180 with LF line endings; every row padded to the sheet width.
[[nodiscard]] std::string to_csv(const SheetGrid& grid);
/// Throws std::runtime_error on malformed quoting.
[[nodiscard]] SheetGrid parse_csv(std::string_view text);
[[nodiscard]] std::vector<std::vector<std::string>> parse_csv_records(std::string_view text);

[[nodiscard]] std::string manifest_to_json(const Manifest& m);
/// Throws std::runtime_error if the document is not a manifest.
[[nodiscard]] Manifest manifest_from_json(std::string_view text);

/// `<sheet>.formulas.csv`, `<sheet>.values.csv`, `manifest.json`. Creates
/// `dir` if needed; throws std::runtime_error on I/O failure.
void write_emission(const Emission& e, const std::filesystem::path& dir);
void write_values(const GridDocument& values, const std::filesystem::path& dir);

}  // namespace gridspec
