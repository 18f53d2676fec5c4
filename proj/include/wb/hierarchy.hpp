#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "wb/nogo.hpp"

namespace wb {

enum class TableVariant { Original, Extended, Full };

const char* to_string(TableVariant v);  // original, extended, full
std::optional<TableVariant> parse_variant(std::string_view s);
// Theory ids in row/column order: T L M P; T I C CI L AI M P; then T+ ... P+.
std::vector<std::string> table_theories(TableVariant v);

struct VerdictTable {
  TableVariant variant = TableVariant::Original;
  std::vector<std::string> ids, labels;
  std::vector<std::vector<NoGoVerdict>> cells;  // cells[row][column]: law row . column => column . row

  const NoGoVerdict& at(std::size_t row, std::size_t column) const { return cells[row][column]; }
  // Canonical cell code: "?", "N:<theorems and citations>", "Y:<citation>",
  // items joined by '+', theorems before citations.
  std::string code(std::size_t row, std::size_t column) const;
  // Footnotes numbered in order of first appearance, row by row.
  std::vector<std::string> footnotes() const;
  std::string markdown() const;
  std::string csv() const;
};

VerdictTable build_table(TableVariant v, const Bounds& b = {});

std::string cell_code(const NoGoVerdict& v);

struct CellMismatch {
  std::string row, column, expected, got;
};

class GoldenFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class GoldenDimensionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Golden CSV: "# variant: <name>", then a header row ",T,L,..." and one row
// per theory. Throws GoldenFormatError on malformed text and
// GoldenDimensionError when the variant or labels do not match. Cells match
// when the status and the set of items agree.
std::vector<CellMismatch> diff_table(const VerdictTable& computed, std::string_view golden_csv);
std::vector<CellMismatch> diff_table_file(const VerdictTable& computed, const std::string& path);

}  // namespace wb
