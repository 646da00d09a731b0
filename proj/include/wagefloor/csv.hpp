#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "wagefloor/errors.hpp"
#include "wagefloor/format.hpp"

namespace wagefloor {

// Long-format CSV: header row, one observation per data row, UTF-8, LF line
// endings, '.' decimal separator, shortest-round-trip float formatting.
struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::string> lines;  // pre-joined data rows, no trailing newline

  explicit CsvTable(std::vector<std::string> header) : columns(std::move(header)) {}

  template <class... Ts>
  void add(const Ts&... cells) {
    std::string line;
    ((append_cell(line, cells)), ...);
    lines.push_back(std::move(line));
  }

 private:
  static void append_cell(std::string& line, double v) { append_raw(line, format_double(v)); }
  static void append_cell(std::string& line, int v) { append_raw(line, format_long(v)); }
  static void append_cell(std::string& line, long v) { append_raw(line, format_long(v)); }
  static void append_cell(std::string& line, const std::string& v) { append_raw(line, quote(v)); }
  static void append_cell(std::string& line, const char* v) { append_raw(line, quote(v)); }

  static void append_raw(std::string& line, const std::string& cell) {
    if (!line.empty()) line += ',';
    line += cell;
  }

  static std::string quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += '"';
      q += c;
    }
    q += '"';
    return q;
  }
};

// Write-to-temp-then-rename, so a failed export leaves no partial file at the
// target path. The temp file lives in the same directory (rename must not
// cross filesystems).
inline void write_csv(const CsvTable& t, const std::string& path) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw io_error("cannot open for writing: " + tmp);
    for (size_t i = 0; i < t.columns.size(); ++i) {
      if (i) out << ',';
      out << t.columns[i];
    }
    out << '\n';
    for (const std::string& line : t.lines) out << line << '\n';
    out.flush();
    if (!out) {
      out.close();
      std::remove(tmp.c_str());
      throw io_error("write failed: " + tmp);
    }
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw io_error("cannot move " + tmp + " into place at " + path);
  }
}

}  // namespace wagefloor
