#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cpflab/observables.hpp"

namespace cpflab {

enum class Suite { Cr, Cpf, Fock, Gauge, Observables, All };

Suite suite_from_string(const std::string& name);
const char* suite_name(Suite suite);

enum class ReportFormat { Json, Csv };

ReportFormat format_from_string(const std::string& name);

/// One configuration layer for the verification suites. The epsilon list
/// drives convergence sweeps (interpreted as the finite-difference step for
/// the cr suite, as the delta width elsewhere); fixed-threshold checks run at
/// their own pinned resolutions so that pass/fail verdicts do not depend on
/// the sweep range.
struct RunConfig {
  Suite suite = Suite::All;
  std::vector<double> epsilon_list{1e-2, 5e-3, 2.5e-3, 1.25e-3};
  double step = 1e-4;
  int n_max = 3;
  double kappa = 1.0;
  std::optional<Chirality> beta{};  // nullopt: run both chiralities
  std::string output_path{};        // empty: no file written
  ReportFormat format = ReportFormat::Json;
  int fock_dim = 16;
  double epsilon_base = 1e-3;  // resolution anchor for pinned checks
  double hbar = 1.0;           // multiplies reported observable values

  void validate() const;
};

/// One verification check. `epsilon` records the resolution knob the check
/// ran at (delta width, or step for finite-difference checks). When
/// `expected` is 0 the rel_error column holds |value| instead of a ratio;
/// threshold (>=) checks store the floor in `expected` and a shortfall
/// fraction in `rel_error`.
struct CheckRow {
  std::string observable;
  int n = 0;
  int beta = +1;
  double kappa = 1.0;
  double epsilon = 0.0;
  double value = 0.0;
  double expected = 0.0;
  double rel_error = 0.0;
  bool pass = false;
};

struct Report {
  int schema_version = 1;
  std::string suite;
  std::map<std::string, std::string> metadata;
  std::vector<CheckRow> checks;
  bool all_pass = false;
};

/// Runs the configured suite(s). Suites execute concurrently; rows are
/// collected in a fixed suite order so identical configs produce identical
/// reports.
Report run_suite(const RunConfig& config);

std::string render_report(const Report& report, ReportFormat format);

/// Writes the rendered report to config.output_path via a temporary file and
/// an atomic rename; does nothing when the path is empty. Throws
/// std::runtime_error on I/O failure.
void write_report(const Report& report, const RunConfig& config);

struct SweepPoint {
  double epsilon = 0.0;
  double residual = 0.0;
  std::string quantity;
  int beta = +1;
  double kappa = 1.0;
  double xi_a = 0.0;
  double xi_b = 0.0;
};

/// Side-channel CSV of convergence sweep points (epsilon, residual,
/// quantity, beta, kappa, xi_a, xi_b), one row per point.
void export_sweep_csv(const std::string& path,
                      const std::vector<SweepPoint>& points);

/// Collects the sweep rows of a report (cr/cpf convergence points) in the
/// shape export_sweep_csv expects.
std::vector<SweepPoint> collect_sweep_points(const Report& report);

/// Transverse-first display tuple (x1, x2, t, x3), e.g. the gauge-solved
/// plus-chirality vector renders as "(0.7071, 0.7071i, 0, 0)".
std::string polarization_display(const PolarizationVector& pol);

struct SnapshotConfig {
  int grid = 32;
  double extent = 3.0;
  double mode_k = 1.0;
  double t = 0.0;
  int n = 1;
  double kappa = 1.0;
  Chirality beta = Chirality::Plus;
  double epsilon = 0.05;
  double x3 = 0.0;
  std::string output_path{};
  ReportFormat format = ReportFormat::Csv;

  void validate() const;
};

struct SnapshotRow {
  double x1 = 0.0;
  double x2 = 0.0;
  double x3 = 0.0;
  double t = 0.0;
  std::array<Complex, 4> a{};
};

/// Field samples of the single-mode constrained component on a symmetric
/// grid x1, x2 in [-extent, extent]^2. The occupancy amplitude sqrt(n) rides
/// on the mode amplitude, so the vacuum snapshot is identically zero.
std::vector<SnapshotRow> snapshot_rows(const SnapshotConfig& config);

void export_snapshot(const SnapshotConfig& config);

}  // namespace cpflab
