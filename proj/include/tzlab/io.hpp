#pragma once

// CSV and JSON emission. Numbers are written in the shortest decimal form
// that round-trips (std::to_chars), independent of the global locale, so
// identical runs give byte-identical files.

#include "tzlab/error.hpp"
#include "tzlab/surface.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace tzlab::io {

inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::string format_number(std::int64_t v) { return std::to_string(v); }

/// Quotes a CSV field when it contains a separator, quote or newline.
inline std::string csv_escape(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  class Row {
   public:
    Row& operator<<(double v) { return push(format_number(v)); }
    Row& operator<<(int v) { return push(std::to_string(v)); }
    Row& operator<<(std::int64_t v) { return push(std::to_string(v)); }
    Row& operator<<(std::size_t v) { return push(std::to_string(v)); }
    Row& operator<<(bool v) { return push(v ? "true" : "false"); }
    Row& operator<<(const char* v) { return push(csv_escape(v)); }
    Row& operator<<(const std::string& v) { return push(csv_escape(v)); }

   private:
    friend class CsvTable;
    explicit Row(std::vector<std::string>& cells) : cells_(cells) {}
    Row& push(std::string cell) {
      cells_.push_back(std::move(cell));
      return *this;
    }
    std::vector<std::string>& cells_;
  };

  Row row() {
    rows_.emplace_back();
    return Row(rows_.back());
  }

  const std::vector<std::string>& header() const { return header_; }
  std::size_t size() const { return rows_.size(); }

  std::string str() const {
    std::string out;
    append_line(out, header_);
    for (const auto& r : rows_) {
      require_width(r);
      append_line(out, r);
    }
    return out;
  }

 private:
  void require_width(const std::vector<std::string>& r) const {
    detail::require(r.size() == header_.size(), "CSV row has " + std::to_string(r.size()) +
                                                    " cells, header has " +
                                                    std::to_string(header_.size()));
  }
  static void append_line(std::string& out, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  }

  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

inline void write_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error("write to " + path.string() + " failed");
}

inline void write_csv(const std::filesystem::path& path, const CsvTable& table) {
  write_file(path, table.str());
}

inline void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& j) {
  write_file(path, j.dump(2) + "\n");
}

/// JSON number, or null when not finite (JSON has no NaN).
inline nlohmann::ordered_json json_number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

/// Grid dump: one row per node, row-major with x fastest.
inline CsvTable field_table(const ScalarField& f) {
  CsvTable t({"i", "j", "x", "y", "u"});
  const auto& g = *f.grid();
  for (std::size_t j = 0; j < g.n(); ++j) {
    for (std::size_t i = 0; i < g.n(); ++i) {
      t.row() << i << j << g.coordinate(i) << g.coordinate(j) << f.at(i, j);
    }
  }
  return t;
}

}  // namespace tzlab::io
