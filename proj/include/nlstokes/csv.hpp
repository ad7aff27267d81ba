#ifndef NLSTOKES_CSV_HPP
#define NLSTOKES_CSV_HPP

#include "nlstokes/convergence.hpp"
#include "nlstokes/grid1d.hpp"
#include "nlstokes/spectral.hpp"
#include "nlstokes/symbols.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace nlstokes {

/// Scientific notation with 12 significant digits, independent of locale.
/// NaN is written as `nan`, infinities as `inf` / `-inf`.
std::string format_double(double value);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  /// Cells are pre-formatted strings; the row must match the header width.
  void add_row(std::vector<std::string> cells);

  /// Formats with format_double; records non-finite values.
  std::string cell(double value);
  std::string cell(std::optional<double> value) { return value ? cell(*value) : std::string(); }
  static std::string cell(long long value) { return std::to_string(value); }

  [[nodiscard]] const std::vector<std::string>& header() const noexcept { return header_; }
  [[nodiscard]] std::size_t rows() const noexcept { return rows_.size(); }
  [[nodiscard]] bool has_nan() const noexcept { return has_nan_; }
  [[nodiscard]] std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
  bool has_nan_ = false;
};

/// Writes header and rows with `\n` line endings; throws io_failure.
void write_csv(const std::filesystem::path& path, const CsvTable& table);

CsvTable symbol_table_csv(const SymbolTable& table);
CsvTable scan_csv(const ScanReport& report);
CsvTable rate_report_csv(const RateReport& report);
CsvTable grid1d_csv(const Discretization1D& regular, const Discretization1D& staggered);
CsvTable solution_modes_csv(const StokesSolution& solution);
CsvTable solution_points_csv(const StokesSolution& solution);

}  // namespace nlstokes

#endif  // NLSTOKES_CSV_HPP
