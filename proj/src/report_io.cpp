#include "gapforge/report_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace gapforge {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Json to_json(const GapBoundReport& r) {
  Json j;
  j["branch"] = r.branch;
  j["dim"] = r.dim;
  j["diameter"] = r.diameter;
  j["curvature"] = r.curvature;
  j["D_E"] = r.D_E;
  j["model_length"] = r.model_length;
  j["R_E"] = r.R_E;
  j["r_in"] = r.r_in;
  j["lam1_upper"] = r.lam1_upper;
  j["lam1_source"] = r.lam1_source;
  j["C"] = r.C;
  j["sigma"] = r.sigma;
  j["Vbar"] = r.Vbar;
  j["lam0_bar"] = r.lam0_bar;
  j["lam1_bar"] = r.lam1_bar;
  j["min_rho_bar"] = r.min_rho_bar;
  j["max_rho_bar"] = r.max_rho_bar;
  j["min_rho"] = r.min_rho;
  j["max_rho"] = r.max_rho;
  j["gap_bar"] = r.gap_bar;
  j["gap_bar_solved"] = r.gap_bar_solved;
  j["gap_bar_closed_form"] = r.gap_bar_closed_form;
  j["osc_Rg"] = r.osc_Rg;
  j["osc_rho_inv"] = r.osc_rho_inv;
  j["correction"] = r.correction;
  j["noise_floor"] = r.noise_floor;
  j["condition2_ok"] = r.condition2_ok;
  j["kpos_ok"] = r.kpos_ok;
  j["gap_resolved"] = r.gap_resolved;
  j["vacuous"] = r.vacuous;
  j["bound"] = r.bound;
  return j;
}

Json to_json(const CollapseStudy& s) {
  Json j;
  j["L"] = s.L;
  j["ratio_limit"] = s.ratio_limit;
  j["rows"] = Json::array();
  for (const auto& r : s.rows) {
    Json row;
    row["r"] = r.r;
    row["h_used"] = r.h_used;
    row["gap_weighted"] = r.gap_weighted;
    row["gap_euclidean"] = r.gap_euclidean;
    row["height_left"] = r.height_left;
    row["height_neck"] = r.height_neck;
    row["height_ratio"] = r.height_ratio;
    j["rows"].push_back(row);
  }
  return j;
}

Json to_json(const DriftAuditReport& r) {
  Json j;
  j["increments_used"] = r.increments_used;
  j["worst_abs_z"] = r.worst_abs_z;
  j["slope_vs_xi"] = r.slope_vs_xi;
  j["coeff_vs_tn"] = r.coeff_vs_tn;
  j["qv_per_time"] = r.qv_per_time;
  j["bins_skipped"] = r.bins_skipped;
  j["bins"] = Json::array();
  for (const auto& b : r.bins) {
    Json row;
    row["xi_mid"] = b.xi_mid;
    row["count"] = b.count;
    row["observed"] = b.observed;
    row["predicted"] = b.predicted;
    row["z"] = b.z;
    j["bins"].push_back(row);
  }
  return j;
}

Json to_json(const PhiDecayReport& r) {
  Json j;
  j["phi0"] = r.phi0;
  j["rate"] = r.rate;
  j["holds"] = r.holds;
  j["checkpoints"] = Json::array();
  for (const auto& c : r.checkpoints) {
    Json row;
    row["t"] = c.t;
    row["mean_phi"] = c.mean_phi;
    row["envelope"] = c.envelope;
    row["std_err"] = c.std_err;
    row["holds"] = c.holds;
    j["checkpoints"].push_back(row);
  }
  return j;
}

Json to_json(const Spectrum1D& sp) {
  Json j;
  j["length"] = sp.length;
  j["n"] = sp.n;
  j["h"] = sp.h;
  j["lam1"] = sp.lam1;
  j["lam2"] = sp.lam2;
  j["lam1_raw"] = sp.lam1_raw;
  j["lam2_raw"] = sp.lam2_raw;
  j["gap"] = sp.gap;
  j["gap_raw"] = sp.gap_raw;
  j["residual1"] = sp.residual1;
  j["residual2"] = sp.residual2;
  j["noise_floor"] = sp.noise_floor;
  j["gap_resolved"] = sp.gap_resolved;
  return j;
}

namespace {

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

void CsvTable::add_row(std::vector<std::string> row) {
  if (row.size() != header_.size())
    throw std::invalid_argument("CsvTable: row width mismatch");
  rows_.push_back(std::move(row));
}

void CsvTable::add_row_doubles(const std::vector<double>& row) {
  std::vector<std::string> out;
  out.reserve(row.size());
  for (double v : row) out.push_back(format_double(v));
  add_row(std::move(out));
}

std::string CsvTable::str() const {
  std::ostringstream os;
  for (size_t i = 0; i < header_.size(); ++i)
    os << (i ? "," : "") << csv_escape(header_[i]);
  os << "\n";
  for (const auto& row : rows_) {
    for (size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_escape(row[i]);
    os << "\n";
  }
  return os.str();
}

std::vector<std::string> gap_report_csv_header() {
  return {"branch",      "dim",         "diameter",   "D_E",        "model_length",
          "R_E",         "r_in",        "lam1_upper", "lam1_source", "C",
          "sigma",       "Vbar",        "lam0_bar",   "lam1_bar",   "min_rho_bar",
          "max_rho_bar", "min_rho",     "max_rho",    "gap_bar",
          "gap_bar_solved", "gap_bar_closed_form",    "osc_Rg",     "osc_rho_inv",
          "correction",  "noise_floor", "condition2_ok", "kpos_ok", "gap_resolved",
          "vacuous",     "bound"};
}

std::vector<std::string> gap_report_csv_row(const GapBoundReport& r) {
  auto d = [](double v) { return format_double(v); };
  return {r.branch,
          std::to_string(r.dim),
          d(r.diameter),
          d(r.D_E),
          d(r.model_length),
          d(r.R_E),
          d(r.r_in),
          d(r.lam1_upper),
          r.lam1_source,
          d(r.C),
          d(r.sigma),
          d(r.Vbar),
          d(r.lam0_bar),
          d(r.lam1_bar),
          d(r.min_rho_bar),
          d(r.max_rho_bar),
          d(r.min_rho),
          d(r.max_rho),
          d(r.gap_bar),
          d(r.gap_bar_solved),
          d(r.gap_bar_closed_form),
          d(r.osc_Rg),
          d(r.osc_rho_inv),
          d(r.correction),
          d(r.noise_floor),
          r.condition2_ok ? "1" : "0",
          r.kpos_ok ? "1" : "0",
          r.gap_resolved ? "1" : "0",
          r.vacuous ? "1" : "0",
          d(r.bound)};
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
}

void write_gnuplot_pair(const std::string& stem, const std::string& title,
                        const std::vector<std::string>& columns,
                        const std::vector<std::vector<double>>& rows) {
  std::ostringstream dat;
  dat << "#";
  for (const auto& c : columns) dat << " " << c;
  dat << "\n";
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) dat << (i ? " " : "") << format_double(row[i]);
    dat << "\n";
  }
  write_text_file(stem + ".dat", dat.str());

  std::ostringstream plt;
  plt << "set title '" << title << "'\n";
  plt << "set key outside\n";
  plt << "set xlabel '" << (columns.empty() ? "x" : columns[0]) << "'\n";
  plt << "plot ";
  for (size_t c = 1; c < columns.size(); ++c) {
    if (c > 1) plt << ", \\\n     ";
    plt << "'" << stem << ".dat' using 1:" << c + 1 << " with linespoints title '"
        << columns[c] << "'";
  }
  plt << "\n";
  write_text_file(stem + ".plt", plt.str());
}

CsvTable eigenfunction_csv(const EigenResult2D& res) {
  CsvTable table({"x", "y", "u1", "u2"});
  for (int k = 0; k < res.grid.interior_count(); ++k) {
    const Vec p = res.grid.point(k);
    table.add_row_doubles({p(0), p(1), res.u1[k], res.u2[k]});
  }
  return table;
}

}  // namespace gapforge
