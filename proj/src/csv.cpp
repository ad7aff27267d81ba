#include "nlstokes/csv.hpp"

#include "nlstokes/error.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

namespace nlstokes {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::scientific, 11);
  return std::string(buf, res.ptr);
}

void CsvTable::add_row(std::vector<std::string> cells) {
  if (cells.size() != header_.size()) {
    throw Error(ErrorCode::shape_mismatch, "csv row width does not match the header");
  }
  rows_.push_back(std::move(cells));
}

std::string CsvTable::cell(double value) {
  if (!std::isfinite(value)) has_nan_ = true;
  return format_double(value);
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
  line(header_);
  for (const auto& r : rows_) line(r);
  return out;
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error(ErrorCode::io_failure, "cannot open " + path.string() + " for writing");
  const std::string text = table.str();
  os.write(text.data(), std::streamsize(text.size()));
  os.close();
  if (!os) throw Error(ErrorCode::io_failure, "failed writing " + path.string());
}

CsvTable symbol_table_csv(const SymbolTable& table) {
  CsvTable csv({"xi", "lambda", "b"});
  for (Eigen::Index i = 0; i < table.rows(); ++i) {
    csv.add_row({csv.cell(table.xi[i]), csv.cell(table.lambda[i]), csv.cell(table.b[i])});
  }
  return csv;
}

CsvTable scan_csv(const ScanReport& report) {
  CsvTable csv({"kind", "xi_lo", "xi_hi", "b_lo", "b_hi"});
  for (const auto& br : report.crossings) {
    csv.add_row({"crossing", csv.cell(br.lo), csv.cell(br.hi), csv.cell(br.b_lo), csv.cell(br.b_hi)});
  }
  for (const auto& nz : report.near_zeros) {
    csv.add_row({"near_zero", csv.cell(nz.xi), csv.cell(nz.xi), csv.cell(nz.b), csv.cell(nz.b)});
  }
  return csv;
}

CsvTable rate_report_csv(const RateReport& report) {
  CsvTable csv({"rung", "delta", "N", "err_u_L2", "err_p_L2", "order_u", "order_p"});
  for (std::size_t k = 0; k < report.rungs.size(); ++k) {
    const auto& r = report.rungs[k];
    // the order on row k compares rung k-1 with rung k
    std::optional<double> ou, op;
    if (k > 0 && k - 1 < report.order_u.size()) ou = report.order_u[k - 1];
    if (k > 0 && k - 1 < report.order_p.size()) op = report.order_p[k - 1];
    csv.add_row({CsvTable::cell((long long)k), csv.cell(r.delta), CsvTable::cell((long long)r.N), csv.cell(r.err_u),
                 csv.cell(r.err_p), csv.cell(ou), csv.cell(op)});
  }
  return csv;
}

CsvTable grid1d_csv(const Discretization1D& regular, const Discretization1D& staggered) {
  if (regular.N != staggered.N || regular.N <= 0) {
    throw Error(ErrorCode::invalid_argument, "grid csv needs two layouts on the same lattice");
  }
  CsvTable csv({"n", "b_regular", "b_staggered"});
  for (int n = 0; n <= regular.N / 2; ++n) {
    csv.add_row({CsvTable::cell((long long)n), csv.cell(discrete_gradient_symbol(regular, n)),
                 csv.cell(discrete_gradient_symbol(staggered, n))});
  }
  return csv;
}

CsvTable solution_modes_csv(const StokesSolution& solution) {
  const PeriodicGrid& grid = solution.velocity.grid();
  const int d = grid.dim();
  std::vector<std::string> header;
  for (int a = 0; a < d; ++a) header.push_back("xi" + std::to_string(a + 1));
  for (int a = 0; a < d; ++a) {
    header.push_back("re_u" + std::to_string(a + 1));
    header.push_back("im_u" + std::to_string(a + 1));
  }
  header.push_back("re_p");
  header.push_back("im_p");
  CsvTable csv(std::move(header));
  for (Eigen::Index m = 0; m < grid.mode_count(); ++m) {
    std::vector<std::string> row;
    for (int a = 0; a < d; ++a) row.push_back(CsvTable::cell((long long)grid.wavevectors()(a, m)));
    for (int a = 0; a < d; ++a) {
      row.push_back(csv.cell(solution.velocity(a, m).real()));
      row.push_back(csv.cell(solution.velocity(a, m).imag()));
    }
    row.push_back(csv.cell(solution.pressure(0, m).real()));
    row.push_back(csv.cell(solution.pressure(0, m).imag()));
    csv.add_row(std::move(row));
  }
  return csv;
}

CsvTable solution_points_csv(const StokesSolution& solution) {
  const PeriodicGrid& grid = solution.velocity.grid();
  const int d = grid.dim();
  std::vector<std::string> header;
  for (int a = 0; a < d; ++a) header.push_back("x" + std::to_string(a + 1));
  for (int a = 0; a < d; ++a) header.push_back("u" + std::to_string(a + 1));
  header.push_back("p");
  CsvTable csv(std::move(header));
  const Eigen::MatrixXd u = to_real_space(solution.velocity);
  const Eigen::MatrixXd p = to_real_space(solution.pressure);
  for (Eigen::Index j = 0; j < grid.point_count(); ++j) {
    const Eigen::VectorXd x = grid.point(j);
    std::vector<std::string> row;
    for (int a = 0; a < d; ++a) row.push_back(csv.cell(x[a]));
    for (int a = 0; a < d; ++a) row.push_back(csv.cell(u(a, j)));
    row.push_back(csv.cell(p(0, j)));
    csv.add_row(std::move(row));
  }
  return csv;
}

}  // namespace nlstokes
