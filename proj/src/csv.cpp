#include "tsa/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "tsa/errors.hpp"

namespace tsa {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
  if (text == "nan") return std::nan("");
  if (text == "inf") return HUGE_VAL;
  if (text == "-inf") return -HUGE_VAL;
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw ConfigError("not a number: '" + std::string(text) + "'");
  }
  return v;
}

CsvTable::CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {
  if (columns_.empty()) throw ConfigError("csv: header must name at least one column");
}

CsvTable::RowBuilder& CsvTable::RowBuilder::add(double v) {
  cells_.push_back(format_double(v));
  return *this;
}

CsvTable::RowBuilder& CsvTable::RowBuilder::add(std::int64_t v) {
  cells_.push_back(std::to_string(v));
  return *this;
}

CsvTable::RowBuilder& CsvTable::RowBuilder::add(std::size_t v) {
  cells_.push_back(std::to_string(v));
  return *this;
}

CsvTable::RowBuilder& CsvTable::RowBuilder::add(bool v) {
  cells_.emplace_back(v ? "true" : "false");
  return *this;
}

CsvTable::RowBuilder& CsvTable::RowBuilder::add(std::string_view v) {
  cells_.emplace_back(v);
  return *this;
}

void CsvTable::check_last_row() const {
  if (!rows_.empty() && rows_.back().size() != columns_.size()) {
    throw ConfigError("csv: row has " + std::to_string(rows_.back().size()) + " cells, header has " +
                      std::to_string(columns_.size()));
  }
}

CsvTable::RowBuilder CsvTable::row() {
  check_last_row();
  rows_.emplace_back();
  return RowBuilder(rows_.back());
}

std::size_t CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i] == name) return i;
  }
  throw ConfigError("csv: no column named '" + std::string(name) + "'");
}

namespace {

void write_cell(std::ostream& os, const std::string& cell) {
  if (cell.find_first_of(",\"\r\n") == std::string::npos) {
    os << cell;
    return;
  }
  os << '"';
  for (char c : cell) {
    if (c == '"') os << '"';
    os << c;
  }
  os << '"';
}

void write_record(std::ostream& os, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) os << ',';
    write_cell(os, cells[i]);
  }
  os << '\n';
}

}  // namespace

void CsvTable::write(std::ostream& os) const {
  check_last_row();
  write_record(os, columns_);
  for (const auto& r : rows_) write_record(os, r);
}

std::string CsvTable::str() const {
  std::ostringstream os;
  write(os);
  return os.str();
}

void CsvTable::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open '" + path.string() + "' for writing");
  write(out);
  if (!out) throw ConfigError("failed writing '" + path.string() + "'");
}

CsvTable parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string cell;
  bool quoted = false;
  bool any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          cell += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cell += c;
      }
      continue;
    }
    any = true;
    if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      record.push_back(std::move(cell));
      cell.clear();
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      record.push_back(std::move(cell));
      cell.clear();
      records.push_back(std::move(record));
      record.clear();
      any = false;
    } else {
      cell += c;
    }
  }
  if (quoted) throw ConfigError("csv: unterminated quoted field");
  if (any || !cell.empty() || !record.empty()) {
    record.push_back(std::move(cell));
    records.push_back(std::move(record));
  }
  if (records.empty()) throw ConfigError("csv: no header");

  CsvTable table(records.front());
  for (std::size_t r = 1; r < records.size(); ++r) {
    auto b = table.row();
    for (auto& c : records[r]) b.add(std::string_view(c));
  }
  return table;
}

}  // namespace tsa
