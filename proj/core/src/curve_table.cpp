#include "risgeom/curve_table.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace risgeom {

void CurveTable::validate() const {
  const std::size_t n = x.size();
  if (y.size() != n) throw std::invalid_argument("CurveTable: x and y lengths differ");
  if (ci_low && ci_low->size() != n) throw std::invalid_argument("CurveTable: ci_low length differs");
  if (ci_high && ci_high->size() != n) throw std::invalid_argument("CurveTable: ci_high length differs");
  for (std::size_t i = 1; i < n; ++i) {
    if (!(x[i] > x[i - 1])) throw std::invalid_argument("CurveTable: x must be strictly increasing");
  }
}

void CsvTable::add_row(const std::vector<double>& values) {
  if (values.size() != columns.size()) throw std::invalid_argument("CsvTable: row width mismatch");
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_number(v));
  rows.push_back(std::move(cells));
}

void CsvTable::add_cells(std::vector<std::string> cells) {
  if (cells.size() != columns.size()) throw std::invalid_argument("CsvTable: row width mismatch");
  rows.push_back(std::move(cells));
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

namespace {

void write_row(std::ostream& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out << ',';
    out << cells[i];
  }
  out << '\n';
}

}  // namespace

void write_csv(std::ostream& out, const CsvTable& table) {
  for (const auto& c : table.comments) out << "# " << c << '\n';
  write_row(out, table.columns);
  for (const auto& r : table.rows) write_row(out, r);
}

CsvTable to_csv_table(const CurveTable& curve, std::string_view x_name, std::string_view y_name) {
  curve.validate();
  CsvTable t;
  for (const auto& [k, v] : curve.meta) t.comments.push_back(k + "=" + v);
  t.columns = {std::string(x_name), std::string(y_name)};
  const bool band = curve.ci_low && curve.ci_high;
  if (band) {
    t.columns.emplace_back("ci_low");
    t.columns.emplace_back("ci_high");
  }
  for (std::size_t i = 0; i < curve.x.size(); ++i) {
    std::vector<double> row{curve.x[i], curve.y[i]};
    if (band) {
      row.push_back((*curve.ci_low)[i]);
      row.push_back((*curve.ci_high)[i]);
    }
    t.add_row(row);
  }
  return t;
}

void write_pgm(std::ostream& out, int width, int height, const std::vector<std::uint8_t>& pixels,
               const std::vector<std::string>& comments) {
  if (width <= 0 || height <= 0) throw std::invalid_argument("write_pgm: empty image");
  if (pixels.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw std::invalid_argument("write_pgm: pixel count does not match dimensions");
  }
  out << "P2\n";
  for (const auto& c : comments) out << "# " << c << '\n';
  out << width << ' ' << height << "\n255\n";
  for (int row = 0; row < height; ++row) {
    for (int col = 0; col < width; ++col) {
      if (col) out << ' ';
      out << static_cast<int>(pixels[static_cast<std::size_t>(row) * static_cast<std::size_t>(width) +
                                     static_cast<std::size_t>(col)]);
    }
    out << '\n';
  }
}

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace risgeom
