#include "sqm/report.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include "sqm/bases.hpp"
#include "sqm/config_io.hpp"
#include "sqm/currents.hpp"
#include "sqm/disk.hpp"
#include "sqm/errors.hpp"
#include "sqm/oracle.hpp"

namespace sqm {

namespace {

using ojson = nlohmann::ordered_json;
using nlohmann::json;

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Threshold classes: structural checks carry accumulated integration error,
// oracle checks compare against an independent computation, exact checks are
// algebraic identities.
double structural(double tol) { return 100.0 * tol; }
double oracle_level(double tol) { return 1e4 * tol; }

CheckResult make_check(std::string name, double defect, double tolerance, std::string detail = {}) {
  CheckResult c;
  c.name = std::move(name);
  c.defect = defect;
  c.tolerance = tolerance;
  c.pass = std::isfinite(defect) && defect <= tolerance;
  c.detail = std::move(detail);
  return c;
}

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

ojson cjson(cplx z) { return ojson::array({z.real(), z.imag()}); }

cplx cparse(const json& j) {
  // Non-finite values serialize as null.
  const auto part = [](const json& v) { return v.is_null() ? kNaN : v.get<double>(); };
  return {part(j.at(0)), part(j.at(1))};
}

ojson omega_json(const std::optional<Omega>& w) {
  if (!w) return nullptr;
  if (w->is_infinite()) return "infinity";
  return cjson(w->value());
}

std::optional<Omega> omega_parse(const json& j) {
  if (j.is_null()) return std::nullopt;
  if (j.is_string()) return Omega::infinity();
  return Omega(cparse(j));
}

double wrap_angle(double x) { return std::remainder(x, 2.0 * kPi); }

// Unit-circle and off-circle sample points shared by several checks.
std::vector<cplx> ring(double modulus, int count, double offset) {
  std::vector<cplx> out;
  for (int j = 0; j < count; ++j) out.push_back(std::polar(modulus, 2.0 * kPi * (j + offset) / count));
  return out;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int dead_band_sign(double x, double band) {
  if (std::abs(x) <= band) return 0;
  return x > 0.0 ? 1 : -1;
}

bool RunReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

std::vector<std::string> RunReport::failing() const {
  std::vector<std::string> out;
  for (const auto& c : checks) {
    if (!c.pass) out.push_back(c.name);
  }
  return out;
}

std::vector<CheckResult> run_checks(const ValidatedConfig& config, const TransferMatrix& m,
                                    const RunOptions& options) {
  const double tol = config.tol();
  const auto& res = m.residuals;
  const double scale_a = std::max(1.0, std::abs(m.a));
  const SMatrixMap map = blaschke_params(m);
  const ScatteringCoefficients s = scattering_coefficients_unchecked(m);
  std::vector<CheckResult> out;

  {
    const BasisPair origin = eval_singularity(config, res.r_min, BasisOrder::corrected, false);
    const BasisPair far = eval_asymptotic(config, res.r_max, BasisOrder::corrected, false);
    const double d = std::max({std::abs(current(origin.first.state()) - 2.0),
                               std::abs(current(origin.second.state()) + 2.0),
                               std::abs(current(far.first.state()) - 2.0),
                               std::abs(current(far.second.state()) + 2.0)});
    out.push_back(make_check("BasisCurrents", d, structural(tol)));
    const double c = std::max({std::abs(origin.second.u - std::conj(origin.first.u)),
                               std::abs(origin.second.du - std::conj(origin.first.du)),
                               std::abs(far.second.u - std::conj(far.first.u)),
                               std::abs(far.second.du - std::conj(far.first.du))});
    out.push_back(make_check("BasisConjugation", c, tol));
  }
  out.push_back(make_check("WronskianDrift", res.wronskian_drift, 10.0 * tol));
  out.push_back(make_check("SU11", std::abs(res.su11_defect) / (scale_a * scale_a), structural(tol)));
  out.push_back(make_check("TimeReversalStructure", res.structure_defect / scale_a, structural(tol)));
  out.push_back(make_check("Stabilization", res.stabilization_delta / scale_a, tol,
                           options.stabilize ? "" : "r_max used as configured"));

  out.push_back(make_check("UnitarityRight", std::abs(std::norm(s.R) + std::norm(s.T) - 1.0),
                           structural(tol)));
  out.push_back(make_check("UnitarityLeft", std::abs(std::norm(s.Rp) + std::norm(s.Tp) - 1.0),
                           structural(tol)));
  out.push_back(make_check("StokesReciprocity",
                           std::abs(std::conj(s.R) * s.Tp + std::conj(s.T) * s.Rp), structural(tol)));
  out.push_back(make_check("TransmissionSymmetry", std::abs(s.T - s.Tp), structural(tol)));

  if (!map.degenerate) {
    const cplx z = map.zero->value();
    double d = std::abs(s_matrix(m, z));
    if (!(std::abs(z) < 1.0)) d = std::numeric_limits<double>::infinity();
    out.push_back(make_check("UniqueZero", d, structural(tol)));

    double p = 0.0;
    if (!map.pole->is_infinite()) {
      const cplx w = map.pole->value();
      p = std::abs(std::conj(m.b) * w + std::conj(m.a)) / std::abs(m.a);
      if (!(std::abs(w) > 1.0)) p = std::numeric_limits<double>::infinity();
    }
    out.push_back(make_check("PoleLocation", p, structural(tol)));
  }

  {
    double d = std::max(std::abs(map.delta + s.T / std::conj(s.T)), std::abs(std::abs(map.delta) - 1.0));
    if (std::abs(s.R) > 0.0) d = std::max(d, std::abs(map.delta - s.Rp / std::conj(s.R)));
    out.push_back(make_check("PhaseIdentities", d, structural(tol)));
  }

  {
    double d = 0.0;
    for (const cplx& w : ring(1.0, 64, 0.0)) d = std::max(d, std::abs(std::abs(map.evaluate(w)) - 1.0));
    out.push_back(make_check("CircleMapping", d, structural(tol)));
  }

  if (!map.degenerate) {
    int violations = 0;
    for (double modulus : {0.5, 2.0}) {
      for (const cplx& w : ring(modulus, 16, 0.5)) {
        double s2 = std::numeric_limits<double>::infinity();
        try {
          s2 = std::norm(map.evaluate(w));
        } catch (const Error&) {
        }
        if (dead_band_sign(s2 - 1.0, 1e-10) != dead_band_sign(std::norm(w) - 1.0, 1e-10)) ++violations;
      }
    }
    out.push_back(make_check("SignCorrespondence", violations, 0.0, "violations over 32 points"));

    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> box(-2.0, 2.0);
    double d = 0.0;
    const bool finite_pole = !map.pole->is_infinite();
    for (int i = 0; i < 100;) {
      const cplx w(box(rng), box(rng));
      if (finite_pole && std::abs(w - map.pole->value()) < 1e-3 * std::abs(map.pole->value())) continue;
      ++i;
      const cplx direct = s_matrix(m, w);
      const cplx blaschke = map.delta * (w - std::conj(s.R)) / (s.R * w - 1.0);
      d = std::max(d, std::abs(direct - blaschke) / std::max(1.0, std::abs(direct)));
    }
    out.push_back(make_check("MobiusForm", d, structural(tol)));

    double r = 0.0;
    for (double rho : {0.1, 0.3, 0.5, 0.7, 0.9}) {
      for (const cplx& w : ring(rho, 8, 0.25)) {
        const cplx v = s_matrix(m, w);
        const Omega back = s_matrix_inverse(m, v);
        const double e = !(std::abs(v) < 1.0) || back.is_infinite()
                             ? std::numeric_limits<double>::infinity()
                             : std::abs(back.value() - w);
        r = std::max(r, e);
      }
    }
    out.push_back(make_check("DiskAutomorphism", r, structural(tol)));
  }

  {
    const auto eval = [&map](cplx w) { return map.evaluate(w); };
    const UnitaryFamilySample samples = sample_unit_circle(eval, 128);
    double d = 0.0;
    for (const cplx w : {cplx(0.0), cplx(0.3), cplx(0.5, 0.2), cplx(0.9)}) {
      d = std::max(d, std::abs(cauchy_reconstruct(samples, w).value - map.evaluate(w)));
    }
    out.push_back(make_check("CauchyReconstruction", d, structural(tol), "128 nodes"));
    out.push_back(make_check("UniformAverage", std::abs(absorption_average(samples) - s.Rp), tol));
  }

  {
    const auto exact = [&m](cplx w) { return s_matrix(m, w); };
    std::vector<cplx> omegas = ring(1.0, 4, 0.1);
    std::vector<cplx> values;
    for (const cplx& w : omegas) values.push_back(exact(w));
    if (map.degenerate) {
      bool rank_deficient = false;
      try {
        fit_mobius(omegas, values);
      } catch (const Error& e) {
        rank_deficient = e.code() == ErrorCode::RankDeficient;
      }
      out.push_back(make_check("MobiusFit", rank_deficient ? 0.0 : 1.0, 0.0,
                               "degenerate map must give a rank-deficient fit"));
    } else {
      const MobiusFit fit = fit_mobius(omegas, values);
      double d = 0.0;
      for (double rho : {0.2, 0.4, 0.6, 0.8}) {
        for (const cplx& w : ring(rho, 8, 0.3)) d = std::max(d, std::abs(fit(w) - exact(w)));
      }
      out.push_back(make_check("MobiusFit", d, structural(tol), "4 boundary samples, 32 interior points"));
    }
  }

  if (map.degenerate) {
    const cplx first = s_matrix(m, 0.0);
    double spread = std::abs(std::abs(map.constant) - 1.0);
    for (int j = 0; j < 16; ++j) {
      const cplx w = std::polar(0.05 + 0.05 * j, 2.0 * kPi * 0.618 * j);
      spread = std::max(spread, std::abs(s_matrix(m, w) - first));
    }
    out.push_back(make_check("DegenerateConstant", spread, oracle_level(tol), "16 interior points"));
  }

  if (config.conformal()) {
    const double mu = config.config().mu;
    const ValidatedConfig doubled = config.with_mu(2.0 * mu);
    TransferOptions topt;
    topt.stabilize = options.stabilize;
    const TransferMatrix m2 = transfer_matrix(doubled, topt);
    const ScatteringCoefficients s2 = scattering_coefficients_unchecked(m2);
    const double theta = config.theta();
    const double shift = 2.0 * theta * std::log(2.0);
    double d = std::abs(wrap_angle(std::arg(s2.R / s.R) - shift));
    d = std::max({d, std::abs(std::abs(s2.R) - std::abs(s.R)), std::abs(std::abs(s2.T) - std::abs(s.T))});
    const cplx rotate = std::polar(1.0, -shift);
    for (const cplx w : {cplx(0.0), cplx(0.3, -0.4), cplx(0.7), cplx(-0.2, 0.9)}) {
      d = std::max(d, std::abs(s_matrix(m2, w * rotate) - s_matrix(m, w)));
    }
    out.push_back(make_check("MuCovariance", d, structural(tol), "mu -> 2 mu"));

    if (config.config().extra_potential.empty()) {
      const IspExactResult o = isp_exact(theta, config.k(), mu);
      const double e = std::max({std::abs(s.R - o.R), std::abs(s.T - o.T), std::abs(s.Rp - o.Rp),
                                 std::abs(s.Tp - o.Tp)});
      out.push_back(make_check("OracleAgreement", e, oracle_level(tol)));
    }
  }
  return out;
}

RunReport run_solve(const ValidatedConfig& config, const RunOptions& options) {
  RunReport report;
  report.config = config.config();
  TransferOptions topt;
  topt.stabilize = options.stabilize;
  auto t0 = std::chrono::steady_clock::now();
  report.transfer = transfer_matrix(config, topt);
  report.timing.emplace_back("transfer_seconds", seconds_since(t0));
  try {
    report.scattering = scattering_coefficients(report.transfer);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::DegenerateTransmission) throw;
  }
  report.map = blaschke_params(report.transfer);
  if (options.run_checks) {
    t0 = std::chrono::steady_clock::now();
    report.checks = run_checks(config, report.transfer, options);
    report.timing.emplace_back("checks_seconds", seconds_since(t0));
  }
  return report;
}

ojson report_to_json(const RunReport& r, bool include_timing) {
  ojson j;
  j["config"] = config_to_json(r.config);

  const auto& res = r.transfer.residuals;
  ojson residuals;
  residuals["su11_defect"] = res.su11_defect;
  residuals["structure_defect"] = res.structure_defect;
  residuals["stabilization_delta"] = res.stabilization_delta;
  residuals["wronskian_drift"] = res.wronskian_drift;
  residuals["origin_truncation"] = res.origin_truncation;
  residuals["asymptotic_truncation"] = res.asymptotic_truncation;
  residuals["r_min"] = res.r_min;
  residuals["r_max"] = res.r_max;
  residuals["doublings"] = res.doublings;
  residuals["steps"] = res.steps;
  j["transfer_matrix"] = {{"a", cjson(r.transfer.a)}, {"b", cjson(r.transfer.b)}, {"residuals", residuals}};

  if (r.scattering) {
    j["scattering"] = {{"R", cjson(r.scattering->R)},
                       {"T", cjson(r.scattering->T)},
                       {"Rp", cjson(r.scattering->Rp)},
                       {"Tp", cjson(r.scattering->Tp)}};
  } else {
    j["scattering"] = nullptr;
  }

  ojson map;
  map["delta"] = cjson(r.map.delta);
  map["zero"] = omega_json(r.map.zero);
  map["pole"] = omega_json(r.map.pole);
  map["degenerate"] = r.map.degenerate;
  map["constant"] = cjson(r.map.constant);
  j["s_matrix_map"] = map;

  auto checks = ojson::array();
  for (const auto& c : r.checks) {
    ojson o;
    o["name"] = c.name;
    o["defect"] = c.defect;
    o["tolerance"] = c.tolerance;
    o["pass"] = c.pass;
    o["detail"] = c.detail;
    checks.push_back(std::move(o));
  }
  j["checks"] = std::move(checks);
  j["status"] = r.passed() ? "pass" : "fail";
  if (include_timing) {
    ojson timing = ojson::object();
    for (const auto& [name, value] : r.timing) timing[name] = value;
    j["timing"] = std::move(timing);
  }
  return j;
}

RunReport report_from_json(const json& j) {
  RunReport r;
  r.config = parse_config(j.at("config"));
  const auto& tm = j.at("transfer_matrix");
  r.transfer.a = cparse(tm.at("a"));
  r.transfer.b = cparse(tm.at("b"));
  r.transfer.tol = r.config.tol;
  const auto& res = tm.at("residuals");
  const auto num = [](const json& v) { return v.is_null() ? kNaN : v.get<double>(); };
  auto& out = r.transfer.residuals;
  out.su11_defect = num(res.at("su11_defect"));
  out.structure_defect = num(res.at("structure_defect"));
  out.stabilization_delta = num(res.at("stabilization_delta"));
  out.wronskian_drift = num(res.at("wronskian_drift"));
  out.origin_truncation = num(res.at("origin_truncation"));
  out.asymptotic_truncation = num(res.at("asymptotic_truncation"));
  out.r_min = num(res.at("r_min"));
  out.r_max = num(res.at("r_max"));
  out.doublings = res.at("doublings").get<int>();
  out.steps = res.at("steps").get<std::size_t>();

  if (const auto& s = j.at("scattering"); !s.is_null()) {
    r.scattering = ScatteringCoefficients{cparse(s.at("R")), cparse(s.at("T")), cparse(s.at("Rp")),
                                          cparse(s.at("Tp"))};
  }
  const auto& map = j.at("s_matrix_map");
  r.map.a = r.transfer.a;
  r.map.b = r.transfer.b;
  r.map.tol = r.config.tol;
  r.map.delta = cparse(map.at("delta"));
  r.map.zero = omega_parse(map.at("zero"));
  r.map.pole = omega_parse(map.at("pole"));
  r.map.degenerate = map.at("degenerate").get<bool>();
  r.map.constant = cparse(map.at("constant"));

  for (const auto& c : j.at("checks")) {
    CheckResult check;
    check.name = c.at("name").get<std::string>();
    check.defect = num(c.at("defect"));
    check.tolerance = num(c.at("tolerance"));
    check.pass = c.at("pass").get<bool>();
    check.detail = c.at("detail").get<std::string>();
    r.checks.push_back(std::move(check));
  }
  if (const auto it = j.find("timing"); it != j.end()) {
    for (const auto& [name, value] : it->items()) r.timing.emplace_back(name, value.get<double>());
  }
  return r;
}

std::vector<std::pair<std::string, std::string>> flatten_report(const RunReport& r) {
  std::vector<std::pair<std::string, std::string>> out;
  const auto num = [&out](const std::string& key, double v) { out.emplace_back(key, fmt17(v)); };
  const auto cnum = [&num](const std::string& key, cplx z) {
    num(key + "_re", z.real());
    num(key + "_im", z.imag());
  };
  const auto omega = [&out, &cnum](const std::string& key, const std::optional<Omega>& w) {
    if (w && !w->is_infinite()) {
      cnum(key, w->value());
    } else {
      const std::string token = w ? "infinity" : "";
      out.emplace_back(key + "_re", token);
      out.emplace_back(key + "_im", token);
    }
  };

  const auto& c = r.config;
  num("p", c.p);
  num("lambda", c.lambda);
  num("k", c.k);
  num("l_plus_nu", c.l_plus_nu);
  num("mu", c.mu);
  out.emplace_back("extra_terms", std::to_string(c.extra_potential.terms().size()));
  num("r_min", c.r_min);
  num("r_max", c.r_max);
  num("tol", c.tol);

  cnum("a", r.transfer.a);
  cnum("b", r.transfer.b);
  const auto& res = r.transfer.residuals;
  num("su11_defect", res.su11_defect);
  num("structure_defect", res.structure_defect);
  num("stabilization_delta", res.stabilization_delta);
  num("wronskian_drift", res.wronskian_drift);
  num("origin_truncation", res.origin_truncation);
  num("asymptotic_truncation", res.asymptotic_truncation);
  num("r_min_used", res.r_min);
  num("r_max_used", res.r_max);
  out.emplace_back("doublings", std::to_string(res.doublings));
  out.emplace_back("steps", std::to_string(res.steps));

  const ScatteringCoefficients s = r.scattering.value_or(
      ScatteringCoefficients{cplx(kNaN, kNaN), cplx(kNaN, kNaN), cplx(kNaN, kNaN), cplx(kNaN, kNaN)});
  cnum("R", s.R);
  cnum("T", s.T);
  cnum("Rp", s.Rp);
  cnum("Tp", s.Tp);

  cnum("delta", r.map.delta);
  omega("zero", r.map.zero);
  omega("pole", r.map.pole);
  out.emplace_back("degenerate", r.map.degenerate ? "true" : "false");
  cnum("constant", r.map.constant);

  for (const auto& check : r.checks) {
    num(check.name + "_defect", check.defect);
    num(check.name + "_tolerance", check.tolerance);
    out.emplace_back(check.name + "_pass", check.pass ? "true" : "false");
  }
  out.emplace_back("status", r.passed() ? "pass" : "fail");
  return out;
}

void write_report_csv(std::ostream& out, const RunReport& report) {
  const auto flat = flatten_report(report);
  for (std::size_t i = 0; i < flat.size(); ++i) out << (i ? "," : "") << flat[i].first;
  out << '\n';
  for (std::size_t i = 0; i < flat.size(); ++i) out << (i ? "," : "") << flat[i].second;
  out << '\n';
}

std::vector<std::pair<std::string, std::string>> read_report_csv(std::istream& in) {
  const auto split = [](const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
  };
  std::string header, values;
  if (!std::getline(in, header) || !std::getline(in, values)) {
    throw Error(ErrorCode::MalformedConfig, "report CSV needs a header row and a value row");
  }
  const auto keys = split(header);
  const auto cells = split(values);
  if (keys.size() != cells.size()) {
    throw Error(ErrorCode::MalformedConfig, "report CSV rows differ in width");
  }
  std::vector<std::pair<std::string, std::string>> out;
  for (std::size_t i = 0; i < keys.size(); ++i) out.emplace_back(keys[i], cells[i]);
  return out;
}

std::vector<SweepRow> run_sweep(const ValidatedConfig& config, const SweepSpec& spec) {
  const double band = std::max(1e-10, structural(config.tol()));
  TransferOptions topt;
  topt.stabilize = spec.stabilize;
  std::vector<SweepRow> rows;

  const auto fill = [band](SweepRow& row, const TransferMatrix& m) {
    const ScatteringCoefficients s = scattering_coefficients_unchecked(m);
    row.abs_r = std::abs(s.R);
    row.abs_t = std::abs(s.T);
    row.s = blaschke_params(m).evaluate(row.omega);
    row.sign_ok = dead_band_sign(std::norm(row.s) - 1.0, band) ==
                  dead_band_sign(std::norm(row.omega) - 1.0, band);
  };

  if (spec.axis == SweepAxis::omega) {
    const TransferMatrix m = transfer_matrix(config, topt);
    if (!spec.omegas.empty()) {
      for (std::size_t j = 0; j < spec.omegas.size(); ++j) {
        SweepRow row;
        row.axis_value = static_cast<double>(j);
        row.omega = spec.omegas[j];
        rows.push_back(row);
      }
    } else {
      for (double chi : spec.grid) {
        SweepRow row;
        row.axis_value = chi;
        row.omega = std::polar(spec.modulus, chi);
        rows.push_back(row);
      }
    }
    for (auto& row : rows) {
      try {
        fill(row, m);
      } catch (const Error& e) {
        row.error = std::string(e.name());
      }
    }
    return rows;
  }

  if (spec.axis == SweepAxis::theta && !config.conformal()) {
    throw Error(ErrorCode::BadParameter, "a theta sweep needs p = 2");
  }
  const cplx omega = spec.omegas.empty() ? cplx{} : spec.omegas.front();
  rows.resize(spec.grid.size());
  for (std::size_t j = 0; j < rows.size(); ++j) {
    rows[j].axis_value = spec.grid[j];
    rows[j].omega = omega;
  }
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t j = next++; j < rows.size(); j = next++) {
      SweepRow& row = rows[j];
      try {
        ValidatedConfig v = config;
        if (spec.axis == SweepAxis::k) {
          v = config.with_k(row.axis_value);
        } else {
          ProblemConfig c = config.config();
          c.lambda = row.axis_value * row.axis_value + 0.25;
          v = validate(c);
        }
        fill(row, transfer_matrix(v, topt));
      } catch (const Error& e) {
        row.error = std::string(e.name());
      }
    }
  };
  const std::size_t threads =
      std::min<std::size_t>(rows.size(), std::max(1u, std::thread::hardware_concurrency()));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return rows;
}

void write_sweep_csv(std::ostream& out, SweepAxis axis, const std::vector<SweepRow>& rows) {
  const char* name = axis == SweepAxis::omega ? "chi" : axis == SweepAxis::k ? "k" : "theta";
  out << name << ",re_omega,im_omega,re_s,im_s,abs_s,abs_r,abs_t,sign_ok,error\n";
  for (const auto& r : rows) {
    const bool ok = r.error.empty();
    out << fmt17(r.axis_value) << ',' << fmt17(r.omega.real()) << ',' << fmt17(r.omega.imag()) << ','
        << fmt17(ok ? r.s.real() : kNaN) << ',' << fmt17(ok ? r.s.imag() : kNaN) << ','
        << fmt17(ok ? std::abs(r.s) : kNaN) << ',' << fmt17(ok ? r.abs_r : kNaN) << ','
        << fmt17(ok ? r.abs_t : kNaN) << ',' << (ok && r.sign_ok ? "pass" : "fail") << ',' << r.error
        << '\n';
  }
}

std::vector<ReconstructRow> run_reconstruct(const ValidatedConfig& config, std::size_t nodes,
                                            const std::vector<cplx>& omegas, bool stabilize) {
  if (nodes < 8) throw Error(ErrorCode::BadParameter, "nodes must be at least 8");
  TransferOptions topt;
  topt.stabilize = stabilize;
  const TransferMatrix m = transfer_matrix(config, topt);
  const SMatrixMap map = blaschke_params(m);
  const UnitaryFamilySample samples =
      sample_unit_circle([&map](cplx w) { return map.evaluate(w); }, nodes);

  std::vector<ReconstructRow> rows;
  for (const cplx& w : omegas) {
    ReconstructRow row;
    row.kind = "cauchy";
    row.omega = w;
    try {
      const CauchyResult c = cauchy_reconstruct(samples, w);
      row.reconstructed = c.value;
      row.error_estimate = c.error_estimate;
      row.direct = map.evaluate(w);
      row.difference = std::abs(row.reconstructed - row.direct);
    } catch (const Error& e) {
      row.valid = false;
      row.error = std::string(e.name());
      row.reconstructed = row.direct = cplx(kNaN, kNaN);
      row.difference = row.error_estimate = kNaN;
    }
    rows.push_back(row);
  }
  ReconstructRow avg;
  avg.kind = "uniform_average";
  avg.reconstructed = absorption_average(samples);
  avg.direct = scattering_coefficients_unchecked(m).Rp;
  avg.difference = std::abs(avg.reconstructed - avg.direct);
  avg.error_estimate = kNaN;
  rows.push_back(avg);
  return rows;
}

void write_reconstruct_csv(std::ostream& out, const std::vector<ReconstructRow>& rows) {
  out << "kind,re_omega,im_omega,re_reconstructed,im_reconstructed,re_direct,im_direct,"
         "abs_difference,error_estimate,valid,error\n";
  for (const auto& r : rows) {
    out << r.kind << ',' << fmt17(r.omega.real()) << ',' << fmt17(r.omega.imag()) << ','
        << fmt17(r.reconstructed.real()) << ',' << fmt17(r.reconstructed.imag()) << ','
        << fmt17(r.direct.real()) << ',' << fmt17(r.direct.imag()) << ',' << fmt17(r.difference) << ','
        << fmt17(r.error_estimate) << ',' << (r.valid ? "true" : "false") << ',' << r.error << '\n';
  }
}

std::vector<double> parse_grid(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  std::string part;
  while (std::getline(ss, part, ':')) parts.push_back(part);
  const auto bad = [&spec](const std::string& why) {
    return Error(ErrorCode::BadGrid, "grid '" + spec + "': " + why);
  };
  if (parts.size() != 3) throw bad("expected START:STOP:COUNT");
  const auto real = [&bad](const std::string& text) {
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (text.empty() || *end != '\0' || !std::isfinite(v)) throw bad("'" + text + "' is not a number");
    return v;
  };
  const double start = real(parts[0]);
  const double stop = real(parts[1]);
  char* end = nullptr;
  const long count = std::strtol(parts[2].c_str(), &end, 10);
  if (parts[2].empty() || *end != '\0' || count < 1) throw bad("COUNT must be a positive integer");
  std::vector<double> grid;
  for (long i = 0; i < count; ++i) {
    grid.push_back(count == 1 ? start : start + (stop - start) * static_cast<double>(i) / (count - 1));
  }
  return grid;
}

cplx parse_complex(const std::string& text) {
  const auto comma = text.find(',');
  const auto real = [&text](const std::string& s) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || *end != '\0' || !std::isfinite(v)) {
      throw Error(ErrorCode::BadParameter, "'" + text + "' is not a complex number \"re,im\"");
    }
    return v;
  };
  if (comma == std::string::npos) return {real(text), 0.0};
  return {real(text.substr(0, comma)), real(text.substr(comma + 1))};
}

}  // namespace sqm
