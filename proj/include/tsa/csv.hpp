#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace tsa {

/// Shortest decimal text that parses back to exactly the same double
/// ("inf", "-inf", "nan" for non-finite values).
std::string format_double(double v);

/// Inverse of format_double. Throws ConfigError on malformed input.
double parse_double(std::string_view text);

/// Header-first table written as RFC-4180 CSV (CRLF-free: rows end in '\n').
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns);

  class RowBuilder {
   public:
    RowBuilder& add(double v);
    RowBuilder& add(std::int64_t v);
    RowBuilder& add(std::size_t v);
    RowBuilder& add(int v) { return add(static_cast<std::int64_t>(v)); }
    RowBuilder& add(bool v);
    RowBuilder& add(std::string_view v);
    RowBuilder& add(const char* v) { return add(std::string_view(v)); }

   private:
    friend class CsvTable;
    explicit RowBuilder(std::vector<std::string>& cells) : cells_(cells) {}
    std::vector<std::string>& cells_;
  };

  /// Starts a new row; the previous row must be complete.
  RowBuilder row();

  const std::vector<std::string>& columns() const noexcept { return columns_; }
  const std::vector<std::vector<std::string>>& rows() const noexcept { return rows_; }

  /// Index of a column; throws ConfigError if absent.
  std::size_t column(std::string_view name) const;

  void write(std::ostream& os) const;
  std::string str() const;
  void save(const std::filesystem::path& path) const;

 private:
  void check_last_row() const;

  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

/// Parses RFC-4180 text into a table (first record is the header).
CsvTable parse_csv(std::string_view text);

}  // namespace tsa
