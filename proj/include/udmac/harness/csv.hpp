#pragma once

// Byte-stable CSV tables: fixed column order, shortest round-trip number
// formatting (locale independent), '\n' line ends.

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

namespace udmac::harness {

// Shortest decimal text that parses back to exactly `v`. Throws Error for
// non-finite values.
std::string format_number(double v);

using Cell = std::variant<std::int64_t, double, std::string>;

struct Table {
  std::string name;  // file stem
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row);  // checks the width against the header
  std::size_t column(const std::string& name) const;
  double number(std::size_t row, const std::string& column) const;
};

std::string to_csv(const Table& table);

// Writes `<dir>/<table.name>.csv`; IoError on failure.
std::filesystem::path write_csv(const Table& table, const std::filesystem::path& dir);

}  // namespace udmac::harness
