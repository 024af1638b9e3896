#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace risgeom {

/// A sampled function y(x), optionally with a confidence band.
struct CurveTable {
  std::vector<double> x;
  std::vector<double> y;
  std::optional<std::vector<double>> ci_low;
  std::optional<std::vector<double>> ci_high;
  /// Free-form metadata: metric name, units, parameter hash, ...
  std::map<std::string, std::string> meta;

  /// Throws std::invalid_argument unless x is strictly increasing and all
  /// columns have equal length.
  void validate() const;
};

/// Rectangular numeric table with named columns and leading comment lines.
struct CsvTable {
  std::vector<std::string> comments;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  /// Appends a row of numbers; throws if its width differs from `columns`.
  void add_row(const std::vector<double>& values);
  /// Appends a row of preformatted cells.
  void add_cells(std::vector<std::string> cells);
};

/// Shortest decimal that round-trips, independent of the global locale.
/// NaN prints as "nan", infinities as "inf" / "-inf".
std::string format_number(double v);

/// Writes `# comment` lines, then the header row, then the data rows, with
/// ',' as separator and '\n' line endings.
void write_csv(std::ostream& out, const CsvTable& table);

/// Converts a curve to a table with columns x_name, y_name and, when present,
/// ci_low, ci_high. Metadata becomes `key=value` comment lines.
CsvTable to_csv_table(const CurveTable& curve, std::string_view x_name, std::string_view y_name);

/// ASCII P2 graymap. `pixels` is row-major with row 0 at the top.
void write_pgm(std::ostream& out, int width, int height, const std::vector<std::uint8_t>& pixels,
               const std::vector<std::string>& comments = {});

/// 64-bit FNV-1a, used to fingerprint configurations in output headers.
std::uint64_t fnv1a64(std::string_view text);

}  // namespace risgeom
