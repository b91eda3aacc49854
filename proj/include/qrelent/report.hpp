#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace qrelent {

/// Shortest round-trip text for a double ("%.17g", "." decimal, no locale).
/// Infinities print as "inf" and "-inf", NaN as "nan".
std::string format_number(double x);
std::string format_number(std::int64_t x);
std::string format_number(const boost::multiprecision::cpp_int& x);
inline std::string format_flag(bool pass) { return pass ? "1" : "0"; }

/// CSV document: comment lines (prefixed "# "), one header row, data rows.
///
/// Cells are written verbatim; callers supply numbers through format_number
/// and plain identifiers, which never need quoting.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns);

  void add_comment(std::string line);
  /// Throws ArgumentError if the row width differs from the header.
  void add_row(std::vector<std::string> cells);

  const std::vector<std::string>& columns() const noexcept { return columns_; }
  std::size_t rows() const noexcept { return rows_.size(); }
  const std::vector<std::string>& row(std::size_t k) const { return rows_.at(k); }
  /// Cell lookup by column name.
  const std::string& cell(std::size_t k, const std::string& column) const;

  std::string str() const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::string> comments_;
  std::vector<std::vector<std::string>> rows_;
};

/// Table of named checks with columns
/// check,index,measured,bound,tolerance,margin,pass.
class CheckTable {
 public:
  explicit CheckTable(std::string title);

  /// Upper-bound check: margin = bound - measured.
  void at_most(const std::string& name, long index, double measured, double bound,
               double tolerance = 0.0);
  /// Lower-bound check: margin = measured - bound.
  void at_least(const std::string& name, long index, double measured, double bound,
                double tolerance = 0.0);

  long rows() const noexcept { return static_cast<long>(table_.rows()); }
  long failed() const noexcept { return failed_; }
  const CsvTable& table() const noexcept { return table_; }
  std::string str() const { return table_.str(); }

 private:
  void add(const std::string& name, long index, double measured, double bound, double tolerance,
           double margin);

  CsvTable table_;
  long failed_ = 0;
};

}  // namespace qrelent
