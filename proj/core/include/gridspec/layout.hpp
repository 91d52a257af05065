#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gridspec/address.hpp"
#include "gridspec/analyzer.hpp"

namespace gridspec {

inline constexpr std::string_view kModelSheet = "Model";
inline constexpr std::string_view kCaptionSheet = "Time";

class LayoutError : public std::runtime_error {
 public:
  LayoutError(std::string code, const std::string& message) : std::runtime_error(message), code_(std::move(code)) {}
  [[nodiscard]] const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

enum class Orientation { Scalar, Column, Block };

[[nodiscard]] std::string_view orientation_name(Orientation o);

/// Where one table lives. `top`/`left` address the first data cell; the
/// caption sits at (`header_row`, `left`).
struct Region {
  std::string table;
  std::string sheet;
  Orientation orientation = Orientation::Column;
  int header_row = 1;
  int top = 1;
  int left = 1;
  int rows = 1;
  int cols = 1;
  std::size_t band = 0;

  [[nodiscard]] int bottom() const { return top + rows - 1; }
  [[nodiscard]] int right() const { return left + cols - 1; }
};

/// A block of rows shared by every table placed in it: a header row, a row
/// for zero-dimensional tables, then one row per index of `vertical_bounds`.
struct RowBand {
  std::string sheet;
  std::string vertical_bounds;  // empty for a band holding only scalars
  Orientation kind = Orientation::Column;
  int header_row = 1;
  int first_row = 3;
  int rows = 0;
};

struct CaptionColumn {
  std::string sheet;
  int column = 1;
  std::string source_table;
};

struct Layout {
  std::vector<std::string> sheets;
  std::map<std::string, Region> regions;
  std::vector<std::string> order;  // table declaration order
  std::vector<RowBand> bands;
  std::optional<CaptionColumn> caption_column;
};

struct LayoutOptions {
  /// Table to tuck onto its own sheet and mirror as row captions. Unset
  /// means `time` if such a table exists; an empty string disables it.
  std::optional<std::string> caption_table;
};

/// Deterministic placement. The caption table goes on sheet "Time"; every
/// other table goes on "Model" starting at column B, grouped into row bands
/// by (vertical bounds, shape) in order of first declaration. Columns and
/// scalars pack without gaps; two-dimensional blocks put their first
/// dimension across and are separated by one blank column.
[[nodiscard]] Layout plan_layout(const SymbolTable& symbols, const LayoutOptions& options = {});

[[nodiscard]] Address address_of(const Layout& layout, const SymbolTable& symbols, const CellId& cell);

/// "total_cash_at_end_of_period" -> "Total cash at end of period"
[[nodiscard]] std::string humanize_caption(std::string_view name);

/// A1 formula text for one derived cell, beginning with "=".
[[nodiscard]] std::string render_formula(const RuleInstance& rule, const CellPlan& plan, const Layout& layout);

}  // namespace gridspec
