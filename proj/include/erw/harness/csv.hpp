#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace erw::harness {

/// Shortest decimal that round-trips to the same double ("inf", "-inf", "nan" otherwise).
std::string format_real(double x);
/// Lower-case 16-digit hex.
std::string format_hash(std::uint64_t h);

/// Comma-separated table with a header row and LF line endings. The first
/// column is always config_hash and is filled in automatically.
class CsvTable {
 public:
  CsvTable(std::uint64_t config_hash, std::vector<std::string> columns);

  class Row {
   public:
    Row& operator<<(double x);
    Row& operator<<(std::uint64_t x);
    Row& operator<<(std::int64_t x);
    Row& operator<<(int x) { return *this << static_cast<std::int64_t>(x); }
    Row& operator<<(unsigned x) { return *this << static_cast<std::uint64_t>(x); }
    Row& operator<<(bool x) { return *this << std::uint64_t{x ? 1u : 0u}; }
    Row& operator<<(std::string_view s);
    Row& operator<<(const char* s) { return *this << std::string_view(s); }

   private:
    friend class CsvTable;
    explicit Row(std::vector<std::string>& cells) : cells_(&cells) {}
    std::vector<std::string>* cells_;
  };

  /// Starts a row; cells are appended with <<.
  Row row();

  std::size_t rows() const noexcept { return rows_.size(); }
  const std::vector<std::string>& columns() const noexcept { return columns_; }

  /// Throws if any row has the wrong number of cells.
  std::string str() const;
  /// Two whitespace-separated columns (x y) for gnuplot-style tools, with a
  /// leading "# config_hash" comment. `x` and `y` name columns of the table.
  std::string plot(std::string_view x, std::string_view y) const;

 private:
  std::uint64_t hash_;
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

/// Writes `text` verbatim (binary mode, so LF stays LF). Creates parent directories.
void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace erw::harness
