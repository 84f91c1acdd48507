#ifndef JSCC_CSV_HPP
#define JSCC_CSV_HPP

#include <cmath>
#include <cstdio>
#include <exception>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "jscc/error.hpp"

namespace jscc {

/// 12 significant digits, "nan"/"inf"/"-inf" for non-finite values.
inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

/// Comma-separated rows with LF endings. The header is written on
/// construction and every row must match its width.
class CsvWriter {
public:
  CsvWriter(std::ostream& os, std::vector<std::string> header) : os_(os), width_(header.size()) {
    if (header.empty()) throw DomainError("CsvWriter: empty header");
    write(header);
    rows_ = 0;
  }

  class Row {
  public:
    explicit Row(CsvWriter& w) : w_(w) {}
    Row(const Row&) = delete;
    Row& operator=(const Row&) = delete;
    ~Row() noexcept(false) {
      if (!done_ && std::uncaught_exceptions() == 0) end();
    }

    Row& operator<<(double v) { return add(format_number(v)); }
    Row& operator<<(long v) { return add(std::to_string(v)); }
    Row& operator<<(int v) { return add(std::to_string(v)); }
    Row& operator<<(std::size_t v) { return add(std::to_string(v)); }
    Row& operator<<(bool v) { return add(v ? "1" : "0"); }
    Row& operator<<(std::string_view s) { return add(std::string(s)); }
    Row& operator<<(const char* s) { return add(std::string(s)); }

    void end() {
      done_ = true;
      w_.write(cells_);
    }

  private:
    Row& add(std::string s) {
      cells_.push_back(std::move(s));
      return *this;
    }
    CsvWriter& w_;
    std::vector<std::string> cells_;
    bool done_ = false;
  };

  Row row() { return Row(*this); }
  std::size_t rows_written() const noexcept { return rows_; }

private:
  static std::string escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
      if (c == '"') out += '"';
      out += c;
    }
    return out + "\"";
  }

  void write(const std::vector<std::string>& cells) {
    if (cells.size() != width_) throw DomainError("CsvWriter: row width does not match the header");
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) os_ << ',';
      os_ << escape(cells[i]);
    }
    os_ << '\n';
    ++rows_;
  }

  std::ostream& os_;
  std::size_t width_;
  std::size_t rows_ = 0;
};

}  // namespace jscc

#endif  // JSCC_CSV_HPP
