#include "erw/harness/csv.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace erw::harness {

std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::array<char, 32> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  if (ec != std::errc{}) throw std::runtime_error("format_real: to_chars failed");
  return std::string(buf.data(), ptr);
}

std::string format_hash(std::uint64_t h) {
  std::array<char, 17> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + 16, h, 16);
  std::string s(buf.data(), ptr);
  return std::string(16 - s.size(), '0') + s;
}

namespace {

std::string quote(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

}  // namespace

CsvTable::CsvTable(std::uint64_t config_hash, std::vector<std::string> columns)
    : hash_(config_hash), columns_(std::move(columns)) {
  columns_.insert(columns_.begin(), "config_hash");
}

CsvTable::Row CsvTable::row() {
  rows_.emplace_back();
  rows_.back().push_back(format_hash(hash_));
  return Row(rows_.back());
}

CsvTable::Row& CsvTable::Row::operator<<(double x) {
  cells_->push_back(format_real(x));
  return *this;
}
CsvTable::Row& CsvTable::Row::operator<<(std::uint64_t x) {
  cells_->push_back(std::to_string(x));
  return *this;
}
CsvTable::Row& CsvTable::Row::operator<<(std::int64_t x) {
  cells_->push_back(std::to_string(x));
  return *this;
}
CsvTable::Row& CsvTable::Row::operator<<(std::string_view s) {
  cells_->push_back(quote(s));
  return *this;
}

std::string CsvTable::str() const {
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(columns_);
  for (const auto& r : rows_) {
    if (r.size() != columns_.size())
      throw std::logic_error("CsvTable: row has " + std::to_string(r.size()) + " cells, expected " +
                             std::to_string(columns_.size()));
    line(r);
  }
  return out;
}

std::string CsvTable::plot(std::string_view x, std::string_view y) const {
  auto col = [&](std::string_view name) {
    const auto it = std::find(columns_.begin(), columns_.end(), name);
    if (it == columns_.end()) throw std::invalid_argument("CsvTable::plot: no column " + std::string(name));
    return static_cast<std::size_t>(it - columns_.begin());
  };
  const auto ix = col(x), iy = col(y);
  std::string out = "# config_hash " + format_hash(hash_) + "\n# " + std::string(x) + ' ' + std::string(y) + '\n';
  for (const auto& r : rows_) out += r.at(ix) + ' ' + r.at(iy) + '\n';
  return out;
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!f) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace erw::harness
