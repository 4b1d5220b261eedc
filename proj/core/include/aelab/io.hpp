#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace aelab {

using KeyValues = std::vector<std::pair<std::string, std::string>>;

/// Writes "key=value" lines; an optional leading comment line starts with '#'.
void write_key_values(const KeyValues& kv, const std::filesystem::path& path, const std::string& comment = {});
/// Skips blank lines and '#' comments; whitespace around keys and values is trimmed.
KeyValues read_key_values(const std::filesystem::path& path);
const std::string* find_value(const KeyValues& kv, const std::string& key);

/// 15 significant digits.
std::string format_real(double v);

using Cell = std::variant<double, long long, std::string>;

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row);
};

void write_csv(const CsvTable& table, const std::filesystem::path& path);
std::string to_csv_string(const CsvTable& table);

std::string trim(const std::string& s);

}  // namespace aelab
