#include "aelab/io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include "aelab/error.hpp"

namespace aelab {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

void write_key_values(const KeyValues& kv, const std::filesystem::path& path, const std::string& comment) {
  std::ofstream out(path);
  if (!out) throw StateError("cannot write " + path.string());
  if (!comment.empty()) out << "# " << comment << '\n';
  for (const auto& [k, v] : kv) out << k << '=' << v << '\n';
}

KeyValues read_key_values(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw StateError("cannot read " + path.string());
  KeyValues kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw UsageError(path.string() + ":" + std::to_string(lineno) + ": expected key=value");
    kv.emplace_back(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
  }
  return kv;
}

const std::string* find_value(const KeyValues& kv, const std::string& key) {
  for (const auto& [k, v] : kv)
    if (k == key) return &v;
  return nullptr;
}

std::string format_real(double v) {
  std::ostringstream out;
  out << std::setprecision(15) << v;
  return out.str();
}

void CsvTable::add(std::vector<Cell> row) {
  if (row.size() != header.size()) throw DimensionError("CsvTable::add: row width does not match header");
  rows.push_back(std::move(row));
}

std::string to_csv_string(const CsvTable& table) {
  std::ostringstream out;
  for (std::size_t i = 0; i < table.header.size(); ++i) out << (i ? "," : "") << table.header[i];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      std::visit(
          [&out](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) {
              out << format_real(v);
            } else {
              out << v;
            }
          },
          row[i]);
    }
    out << '\n';
  }
  return out.str();
}

void write_csv(const CsvTable& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw StateError("cannot write " + path.string());
  out << to_csv_string(table);
}

}  // namespace aelab
