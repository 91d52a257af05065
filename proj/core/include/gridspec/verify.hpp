#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "gridspec/address.hpp"
#include "gridspec/emit.hpp"

namespace gridspec {

inline constexpr double kVerifyRelativeTolerance = 1e-9;

struct Mismatch {
  Address address;
  std::string formula;
  std::string recorded;    // the values document's text for this cell
  std::string recomputed;  // one-step re-evaluation, or an error description
};

struct VerifyReport {
  std::size_t checks = 0;
  std::vector<Mismatch> mismatches;

  [[nodiscard]] bool ok() const { return mismatches.empty(); }
};

/// Re-evaluates every formula cell one step: its references are read from
/// the values document, the result is compared with the cell's own recorded
/// value. Numbers agree within kVerifyRelativeTolerance (scaled by
/// max(1, |a|, |b|)); booleans, dates and #N/A must agree exactly.
[[nodiscard]] VerifyReport verify_grid(const GridDocument& formulas, const GridDocument& values);

/// True when two values agree under the rule above.
[[nodiscard]] bool values_agree(const Value& a, const Value& b);

/// Reads manifest.json and the per-sheet CSVs of an emitted directory.
/// Throws std::runtime_error when anything is missing or malformed.
struct EmittedDirectory {
  Manifest manifest;
  GridDocument formulas;
  GridDocument values;
};
[[nodiscard]] EmittedDirectory read_emitted_directory(const std::filesystem::path& dir);

}  // namespace gridspec
