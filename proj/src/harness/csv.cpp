#include "udmac/harness/csv.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>

#include "udmac/errors.hpp"

namespace udmac::harness {

std::string format_number(double v) {
  if (!std::isfinite(v)) throw Error("refusing to write a non-finite number to CSV");
  if (v == 0.0) return "0";  // folds -0
  std::array<char, 64> buf;
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

void Table::add(std::vector<Cell> row) {
  if (row.size() != header.size()) {
    throw Error("table " + name + ": row has " + std::to_string(row.size()) + " cells, header has " +
                std::to_string(header.size()));
  }
  rows.push_back(std::move(row));
}

std::size_t Table::column(const std::string& col) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == col) return i;
  }
  throw Error("table " + name + " has no column " + col);
}

double Table::number(std::size_t row, const std::string& col) const {
  const Cell& c = rows.at(row).at(column(col));
  if (const auto* d = std::get_if<double>(&c)) return *d;
  if (const auto* i = std::get_if<std::int64_t>(&c)) return static_cast<double>(*i);
  throw Error("table " + name + ": column " + col + " is not numeric");
}

std::string to_csv(const Table& table) {
  std::string out;
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    if (i) out += ',';
    out += table.header[i];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      if (const auto* d = std::get_if<double>(&row[i])) {
        out += format_number(*d);
      } else if (const auto* n = std::get_if<std::int64_t>(&row[i])) {
        out += std::to_string(*n);
      } else {
        out += std::get<std::string>(row[i]);
      }
    }
    out += '\n';
  }
  return out;
}

std::filesystem::path write_csv(const Table& table, const std::filesystem::path& dir) {
  const auto path = dir / (table.name + ".csv");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << to_csv(table);
  out.close();
  if (!out) throw IoError("failed writing " + path.string());
  return path;
}

}  // namespace udmac::harness
