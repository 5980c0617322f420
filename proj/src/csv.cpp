#include "vlgc/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>
#include <vector>

namespace vlgc {

namespace {

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    cells.push_back(line.substr(start, comma == std::string_view::npos ? comma : comma - start));
    if (comma == std::string_view::npos) return cells;
    start = comma + 1;
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::string where(std::size_t row, const std::string& column) {
  return "row " + std::to_string(row) + ", column '" + column + "'";
}

}  // namespace

TimeSeriesSet read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidInput("CSV input is empty");
  std::vector<std::string> names;
  for (auto cell : split(line)) names.emplace_back(trim(cell));
  for (std::size_t c = 0; c < names.size(); ++c) {
    if (names[c].empty()) throw InvalidInput("row 1, column " + std::to_string(c + 1) + ": empty series name");
  }

  std::vector<std::vector<double>> columns(names.size());
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    const auto cells = split(line);
    if (cells.size() != names.size()) {
      throw InvalidInput("row " + std::to_string(row) + ": expected " + std::to_string(names.size()) +
                         " cells, found " + std::to_string(cells.size()));
    }
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const std::string_view text = trim(cells[c]);
      if (text.empty()) throw InvalidInput(where(row, names[c]) + ": missing value");
      double value = 0.0;
      const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
      if (ec != std::errc{} || end != text.data() + text.size()) {
        throw InvalidInput(where(row, names[c]) + ": '" + std::string(text) + "' is not a number");
      }
      if (!std::isfinite(value)) throw InvalidInput(where(row, names[c]) + ": value is not finite");
      columns[c].push_back(value);
    }
  }
  if (columns.front().empty()) throw InvalidInput("CSV input has a header but no data rows");

  std::vector<TimeSeries> members;
  for (std::size_t c = 0; c < names.size(); ++c) members.emplace_back(names[c], std::move(columns[c]));
  return TimeSeriesSet(std::move(members));
}

TimeSeriesSet read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open '" + path + "'");
  return read_csv(in);
}

void write_csv(std::ostream& out, const TimeSeriesSet& set) {
  for (std::size_t c = 0; c < set.size(); ++c) out << (c ? "," : "") << set[c].name();
  out << '\n';
  char buf[64];
  for (std::size_t t = 0; t < set.length(); ++t) {
    for (std::size_t c = 0; c < set.size(); ++c) {
      const auto res = std::to_chars(buf, buf + sizeof buf, set[c][t]);
      if (c) out << ',';
      out.write(buf, res.ptr - buf);
    }
    out << '\n';
  }
}

void write_csv_file(const std::string& path, const TimeSeriesSet& set) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write '" + path + "'");
  write_csv(out, set);
  if (!out) throw InvalidInput("failed while writing '" + path + "'");
}

}  // namespace vlgc
