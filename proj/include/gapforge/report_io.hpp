#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "gapforge/diffusion.hpp"
#include "gapforge/eigsolve.hpp"
#include "gapforge/moduli.hpp"

namespace gapforge {

// stable field order for byte-identical reruns
using Json = nlohmann::ordered_json;

/// Deterministic shortest round-trip formatting for doubles.
std::string format_double(double v);

Json to_json(const GapBoundReport& rep);
Json to_json(const CollapseStudy& study);
Json to_json(const DriftAuditReport& rep);
Json to_json(const PhiDecayReport& rep);
Json to_json(const Spectrum1D& sp);

/// CSV with a header row and RFC-style quoting.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}
  void add_row(std::vector<std::string> row);
  void add_row_doubles(const std::vector<double>& row);
  std::string str() const;
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }
  const std::vector<std::string>& header() const { return header_; }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

std::vector<std::string> gap_report_csv_header();
std::vector<std::string> gap_report_csv_row(const GapBoundReport& rep);

void write_text_file(const std::string& path, const std::string& content);

/// Writes <stem>.dat (whitespace table) and <stem>.plt (gnuplot script plotting
/// column 2.. against column 1).
void write_gnuplot_pair(const std::string& stem, const std::string& title,
                        const std::vector<std::string>& columns,
                        const std::vector<std::vector<double>>& rows);

/// Eigenfunction grid export: x, y, u1, u2 rows for plotting.
CsvTable eigenfunction_csv(const EigenResult2D& res);

}  // namespace gapforge
