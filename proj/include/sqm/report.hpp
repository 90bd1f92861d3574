#pragma once

// Run reports and the computations behind the command-line tool.

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "sqm/connect.hpp"
#include "sqm/model.hpp"

namespace sqm {

struct CheckResult {
  std::string name;
  double defect = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string detail;
};

struct RunReport {
  ProblemConfig config;
  TransferMatrix transfer;
  std::optional<ScatteringCoefficients> scattering;  // absent when |T| is below tol
  SMatrixMap map;
  std::vector<CheckResult> checks;
  std::vector<std::pair<std::string, double>> timing;  // seconds; excluded from comparisons

  bool passed() const;
  std::vector<std::string> failing() const;
};

struct RunOptions {
  bool stabilize = true;
  bool run_checks = true;
};

RunReport run_solve(const ValidatedConfig& config, const RunOptions& options = {});

/// Every invariant applicable to the configuration, at thresholds derived from tol.
std::vector<CheckResult> run_checks(const ValidatedConfig& config, const TransferMatrix& m,
                                    const RunOptions& options = {});

nlohmann::ordered_json report_to_json(const RunReport& report, bool include_timing = true);
RunReport report_from_json(const nlohmann::json& j);

/// Flat (column, value) view used for CSV output. Numbers use %.17g.
std::vector<std::pair<std::string, std::string>> flatten_report(const RunReport& report);
void write_report_csv(std::ostream& out, const RunReport& report);
std::vector<std::pair<std::string, std::string>> read_report_csv(std::istream& in);

enum class SweepAxis { omega, k, theta };

struct SweepSpec {
  SweepAxis axis = SweepAxis::omega;
  std::vector<double> grid;    // chi for omega sweeps, k or Theta otherwise
  double modulus = 1.0;        // |Omega| for omega sweeps over a chi grid
  std::vector<cplx> omegas;    // explicit Omega list; for k/Theta sweeps the first is used
  bool stabilize = true;
};

struct SweepRow {
  double axis_value = 0.0;
  cplx omega{};
  cplx s{};
  double abs_r = 0.0;
  double abs_t = 0.0;
  bool sign_ok = false;
  std::string error;  // error name when the row could not be computed
};

/// Rows in axis order; independent configurations are solved concurrently.
std::vector<SweepRow> run_sweep(const ValidatedConfig& config, const SweepSpec& spec);
void write_sweep_csv(std::ostream& out, SweepAxis axis, const std::vector<SweepRow>& rows);

struct ReconstructRow {
  std::string kind;  // "cauchy" or "uniform_average"
  cplx omega{};
  cplx reconstructed{};
  cplx direct{};
  double difference = 0.0;
  double error_estimate = 0.0;
  bool valid = true;
  std::string error;
};

std::vector<ReconstructRow> run_reconstruct(const ValidatedConfig& config, std::size_t nodes,
                                            const std::vector<cplx>& omegas, bool stabilize = true);
void write_reconstruct_csv(std::ostream& out, const std::vector<ReconstructRow>& rows);

/// "start:stop:count", inclusive at both ends. Throws BadGrid.
std::vector<double> parse_grid(const std::string& spec);
/// "re,im" or "re". Throws BadParameter.
cplx parse_complex(const std::string& text);

/// Sign of x with |x| <= band mapped to 0.
int dead_band_sign(double x, double band);

}  // namespace sqm
