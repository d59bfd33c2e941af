#include <charconv>
#include <fstream>
#include <sstream>

#include "bohm/cli.hpp"

namespace bohm::cli {

namespace {

char delimiter(OutputFormat format) { return format == OutputFormat::csv ? ',' : '\t'; }

std::vector<std::string> split(const std::string& line, char delim) {
  std::vector<std::string> out;
  std::string item;
  std::stringstream ss(line);
  while (std::getline(ss, item, delim)) out.push_back(item);
  if (!line.empty() && line.back() == delim) out.emplace_back();
  return out;
}

}  // namespace

std::string format_number(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void write_table(const DataTable& table, const std::filesystem::path& path,
                 OutputFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  const char delim = delimiter(format);
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c) out << delim;
    out << table.columns[c];
  }
  out << '\n';
  std::string line;
  for (const auto& row : table.rows) {
    line.clear();
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) line += delim;
      line += format_number(row[c]);
    }
    line += '\n';
    out << line;
  }
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

DataTable read_table(const std::filesystem::path& path, OutputFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  const char delim = delimiter(format);
  DataTable table;
  table.name = path.stem().string();
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty table " + path.string());
  table.columns = split(line, delim);
  while (std::getline(in, line)) {
    std::vector<double> row;
    for (const auto& cell : split(line, delim)) {
      double v = 0.0;
      const char* first = cell.data();
      const char* last = cell.data() + cell.size();
      const auto [ptr, ec] = std::from_chars(first, last, v);
      if (ec != std::errc() || ptr != last) {
        throw std::runtime_error("bad number '" + cell + "' in " + path.string());
      }
      row.push_back(v);
    }
    table.add_row(std::move(row));
  }
  return table;
}

}  // namespace bohm::cli
