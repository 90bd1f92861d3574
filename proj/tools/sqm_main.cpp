// sqm: S-matrix of singular power-law potentials from the command line.
//
//   sqm solve       --config cfg.json [--output out] [--format json|csv]
//   sqm sweep       --config cfg.json --axis omega|k|theta [--grid A:B:N] [--modulus m] [--omega re,im]...
//   sqm reconstruct --config cfg.json [--nodes N] [--omega re,im]...
//   sqm verify      --config cfg.json [--output report.json]
//
// Exit status: 0 success, 1 failed invariant or numerical error, 2 usage or config error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sqm/config_io.hpp"
#include "sqm/errors.hpp"
#include "sqm/report.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kUsage = 2;

bool is_usage_error(sqm::ErrorCode code) {
  using sqm::ErrorCode;
  switch (code) {
    case ErrorCode::MalformedConfig:
    case ErrorCode::SubcriticalCoupling:
    case ErrorCode::NonSingular:
    case ErrorCode::BadGrid:
    case ErrorCode::BadParameter:
      return true;
    default:
      return false;
  }
}

// Writes to the named file, or stdout for "" and "-".
template <typename Fn>
void emit(const std::string& path, Fn&& write) {
  if (path.empty() || path == "-") {
    write(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path);
  if (!out) throw sqm::Error(sqm::ErrorCode::BadParameter, "cannot write '" + path + "'");
  write(out);
}

std::vector<sqm::cplx> parse_omegas(const std::vector<std::string>& texts) {
  std::vector<sqm::cplx> out;
  for (const auto& t : texts) out.push_back(sqm::parse_complex(t));
  return out;
}

void print_checks(const sqm::RunReport& report) {
  std::printf("%-24s %-6s %-12s %-12s\n", "check", "status", "defect", "tolerance");
  for (const auto& c : report.checks) {
    std::printf("%-24s %-6s %-12.3e %-12.3e\n", c.name.c_str(), c.pass ? "pass" : "FAIL", c.defect,
                c.tolerance);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"S-matrix of singular power-law potentials"};
  app.require_subcommand(1);

  std::string config_path, output_path, format = "json", axis, grid;
  std::vector<std::string> omega_texts;
  std::size_t nodes = 128;
  double modulus = 1.0;
  bool no_stabilize = false;

  const auto common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON problem configuration")->required();
    cmd->add_option("--output", output_path, "output file (default: stdout)");
    cmd->add_flag("--no-stabilize", no_stabilize, "use r_min/r_max as configured (testing only)");
  };

  auto* solve = app.add_subcommand("solve", "transfer matrix, scattering data and S-matrix map");
  common(solve);
  solve->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  auto* sweep = app.add_subcommand("sweep", "tabulate S over Omega, k or Theta");
  common(sweep);
  sweep->add_option("--axis", axis, "omega, k or theta")
      ->required()
      ->check(CLI::IsMember({"omega", "k", "theta"}));
  sweep->add_option("--grid", grid, "START:STOP:COUNT, inclusive");
  sweep->add_option("--modulus", modulus, "|Omega| for an omega sweep over phases");
  sweep->add_option("--omega", omega_texts, "explicit Omega as \"re,im\" (repeatable)");

  auto* reconstruct = app.add_subcommand("reconstruct", "Cauchy reconstruction from boundary samples");
  common(reconstruct);
  reconstruct->add_option("--nodes", nodes, "boundary nodes (>= 8)");
  reconstruct->add_option("--omega", omega_texts, "interior Omega as \"re,im\" (repeatable)");

  auto* verify = app.add_subcommand("verify", "run every invariant check");
  common(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    const sqm::ValidatedConfig config = sqm::validate(sqm::load_config(config_path));
    sqm::RunOptions options;
    options.stabilize = !no_stabilize;

    if (solve->parsed()) {
      const sqm::RunReport report = sqm::run_solve(config, options);
      emit(output_path, [&](std::ostream& out) {
        if (format == "csv") {
          sqm::write_report_csv(out, report);
        } else {
          out << sqm::report_to_json(report).dump(2) << '\n';
        }
      });
      return kOk;
    }

    if (sweep->parsed()) {
      sqm::SweepSpec spec;
      spec.axis = axis == "omega" ? sqm::SweepAxis::omega
                  : axis == "k"   ? sqm::SweepAxis::k
                                  : sqm::SweepAxis::theta;
      spec.omegas = parse_omegas(omega_texts);
      spec.modulus = modulus;
      spec.stabilize = options.stabilize;
      if (!grid.empty()) spec.grid = sqm::parse_grid(grid);
      if (spec.grid.empty() && (spec.axis != sqm::SweepAxis::omega || spec.omegas.empty())) {
        throw sqm::Error(sqm::ErrorCode::BadGrid, "--grid is required for this sweep");
      }
      const auto rows = sqm::run_sweep(config, spec);
      emit(output_path, [&](std::ostream& out) { sqm::write_sweep_csv(out, spec.axis, rows); });
      return kOk;
    }

    if (reconstruct->parsed()) {
      std::vector<sqm::cplx> omegas = parse_omegas(omega_texts);
      if (omegas.empty()) omegas = {0.0, 0.3, {0.5, 0.2}, 0.9};
      const auto rows = sqm::run_reconstruct(config, nodes, omegas, options.stabilize);
      emit(output_path, [&](std::ostream& out) { sqm::write_reconstruct_csv(out, rows); });
      return kOk;
    }

    const sqm::RunReport report = sqm::run_solve(config, options);
    print_checks(report);
    if (!output_path.empty()) {
      emit(output_path, [&](std::ostream& out) { out << sqm::report_to_json(report).dump(2) << '\n'; });
    }
    if (report.passed()) return kOk;
    std::fprintf(stderr, "failing invariants:");
    for (const auto& name : report.failing()) std::fprintf(stderr, " %s", name.c_str());
    std::fprintf(stderr, "\n");
    return kFailed;
  } catch (const sqm::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return is_usage_error(e.code()) ? kUsage : kFailed;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kFailed;
  }
}
