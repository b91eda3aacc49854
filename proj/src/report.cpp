#include "qrelent/report.hpp"

#include <cmath>
#include <cstdio>

#include "qrelent/errors.hpp"

namespace qrelent {

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_number(std::int64_t x) { return std::to_string(x); }

std::string format_number(const boost::multiprecision::cpp_int& x) { return x.str(); }

CsvTable::CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {
  if (columns_.empty()) throw ArgumentError("CsvTable: no columns");
}

void CsvTable::add_comment(std::string line) { comments_.push_back(std::move(line)); }

void CsvTable::add_row(std::vector<std::string> cells) {
  if (cells.size() != columns_.size()) {
    throw ArgumentError("CsvTable: row has " + std::to_string(cells.size()) + " cells, header has " +
                        std::to_string(columns_.size()));
  }
  rows_.push_back(std::move(cells));
}

const std::string& CsvTable::cell(std::size_t k, const std::string& column) const {
  for (std::size_t c = 0; c < columns_.size(); ++c) {
    if (columns_[c] == column) return rows_.at(k).at(c);
  }
  throw ArgumentError("CsvTable: no column '" + column + "'");
}

std::string CsvTable::str() const {
  std::string out;
  for (const auto& c : comments_) out += "# " + c + "\n";
  auto join = [&out](const std::vector<std::string>& cells) {
    for (std::size_t k = 0; k < cells.size(); ++k) {
      if (k) out += ',';
      out += cells[k];
    }
    out += '\n';
  };
  join(columns_);
  for (const auto& r : rows_) join(r);
  return out;
}

CheckTable::CheckTable(std::string title)
    : table_({"check", "index", "measured", "bound", "tolerance", "margin", "pass"}) {
  table_.add_comment(std::move(title));
}

void CheckTable::at_most(const std::string& name, long index, double measured, double bound,
                         double tolerance) {
  add(name, index, measured, bound, tolerance, bound - measured);
}

void CheckTable::at_least(const std::string& name, long index, double measured, double bound,
                          double tolerance) {
  add(name, index, measured, bound, tolerance, measured - bound);
}

void CheckTable::add(const std::string& name, long index, double measured, double bound,
                     double tolerance, double margin) {
  const bool pass = margin >= -tolerance;
  if (!pass) ++failed_;
  table_.add_row({name, format_number(static_cast<std::int64_t>(index)), format_number(measured),
                  format_number(bound), format_number(tolerance), format_number(margin),
                  format_flag(pass)});
}

}  // namespace qrelent
