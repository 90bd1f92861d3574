// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "sqm/connect.hpp"
#include "sqm/disk.hpp"
#include "sqm/errors.hpp"
#include "sqm/model.hpp"
#include "sqm/oracle.hpp"
#include "sqm/report.hpp"

using namespace sqm;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  // Keeps the worst defect/limit ratio while passing and the first failure otherwise.
  void bound(const std::string& what, double defect, double limit) {
    const bool ok = std::isfinite(defect) && defect < limit;
    const double ratio = std::isfinite(defect) ? defect / limit : INFINITY;
    if (pass && (!ok || ratio > worst_ratio)) {
      char buf[200];
      std::snprintf(buf, sizeof buf, "worst %s = %.3g (limit %.0e)", what.c_str(), defect, limit);
      detail = buf;
      worst_ratio = ratio;
    }
    if (!ok) pass = false;
  }

  void require(const std::string& what, bool ok) {
    if (!ok && pass) {
      pass = false;
      detail = what;
    }
  }

  double worst_ratio = -1.0;
};

ProblemConfig isp_config(double theta, double mu = 1.0) {
  ProblemConfig c;
  c.p = 2.0;
  c.lambda = theta * theta + 0.25;
  c.k = 1.0;
  c.mu = mu;
  return c;
}

ProblemConfig power4_config() {
  ProblemConfig c;
  c.p = 4.0;
  c.lambda = 1.0;
  c.k = 1.0;
  c.l_plus_nu = 0.5;
  return c;
}

ProblemConfig opaque_config() {
  ProblemConfig c = power4_config();
  c.extra_potential = ExtraPotential({BarrierTerm{10.0, 2.0, 12.0, 0.25}});
  return c;
}

// Transfer matrices are computed once per configuration and shared by criteria.
struct Problem {
  std::string name;
  ProblemConfig config;
  TransferMatrix m;
};

class Cache {
 public:
  const Problem& get(const std::string& name, const ProblemConfig& c) {
    auto it = problems_.find(name);
    if (it == problems_.end()) {
      it = problems_.emplace(name, Problem{name, c, transfer_matrix(validate(c))}).first;
    }
    return it->second;
  }
  const std::map<std::string, Problem>& all() const { return problems_; }

 private:
  std::map<std::string, Problem> problems_;
};

Cache cache;

std::string isp_name(double theta) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "conformal(Theta=%g)", theta);
  return buf;
}

const std::vector<double> kThetas{0.5, 1.0, 2.0};

std::vector<const Problem*> both_potentials() {
  return {&cache.get(isp_name(1.0), isp_config(1.0)), &cache.get("power4", power4_config())};
}

std::vector<const Problem*> network_set() {
  std::vector<const Problem*> out;
  for (double t : kThetas) out.push_back(&cache.get(isp_name(t), isp_config(t)));
  out.push_back(&cache.get("power4", power4_config()));
  return out;
}

double wrap(double angle) { return std::remainder(angle, 2.0 * M_PI); }

Outcome oracle_equivalence() {
  Outcome o;
  for (double theta : kThetas) {
    const Problem& p = cache.get(isp_name(theta), isp_config(theta));
    const ScatteringCoefficients s = scattering_coefficients(p.m);
    const IspExactResult exact = isp_exact(theta, 1.0, 1.0);
    const double target = std::exp(-M_PI * theta);
    o.bound("|R| rel", std::abs(std::abs(s.R) - target) / target, 1e-6);
    o.bound("|T|^2", std::abs(std::norm(s.T) - (1.0 - std::exp(-2.0 * M_PI * theta))), 1e-6);
    o.bound("R vs closed form", std::abs(s.R - exact.R), 1e-6);
  }
  return o;
}

Outcome conservation() {
  Outcome o;
  network_set();
  for (double t : kThetas) cache.get(isp_name(t) + " mu=2", isp_config(t, 2.0));
  for (const auto& [name, p] : cache.all()) {
    o.bound(name + " drift", p.m.residuals.wronskian_drift, 1e-9);
    o.bound(name + " SU(1,1)", std::abs(p.m.residuals.su11_defect), 1e-8);
    o.bound(name + " structure", p.m.residuals.structure_defect, 1e-8);
  }
  return o;
}

Outcome unitarity() {
  Outcome o;
  for (const Problem* p : network_set()) {
    const ScatteringCoefficients s = scattering_coefficients(p->m);
    o.bound(p->name + " |R|^2+|T|^2-1", std::abs(std::norm(s.R) + std::norm(s.T) - 1.0), 1e-8);
    o.bound(p->name + " |R'|^2+|T'|^2-1", std::abs(std::norm(s.Rp) + std::norm(s.Tp) - 1.0), 1e-8);
    o.bound(p->name + " R*T'+T*R'", std::abs(std::conj(s.R) * s.Tp + std::conj(s.T) * s.Rp), 1e-8);
    o.bound(p->name + " T-T'", std::abs(s.T - s.Tp), 1e-8);
  }
  return o;
}

Outcome circle_mapping() {
  Outcome o;
  for (const Problem* p : both_potentials()) {
    double worst = 0.0;
    for (int j = 0; j < 64; ++j) {
      const cplx w = std::polar(1.0, 2.0 * M_PI * j / 64);
      worst = std::max(worst, std::abs(std::abs(s_matrix(p->m, w)) - 1.0));
    }
    o.bound(p->name + " ||S|-1|", worst, 1e-8);
  }
  return o;
}

// Newton iteration on S^(Omega) from Omega = 0.
cplx find_zero(const TransferMatrix& m) {
  cplx w = 0.0;
  for (int it = 0; it < 50; ++it) {
    const double h = 1e-6;
    const cplx f = s_matrix(m, w);
    const cplx df = (s_matrix(m, w + h) - s_matrix(m, w - h)) / (2.0 * h);
    const cplx step = f / df;
    w -= step;
    if (std::abs(step) < 1e-15) break;
  }
  return w;
}

Outcome blaschke_structure() {
  Outcome o;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (const Problem* p : both_potentials()) {
    const TransferMatrix& m = p->m;
    const UnitaryFamilySample boundary = sample_unit_circle([&m](cplx w) { return s_matrix(m, w); }, 4);
    const MobiusFit fit = fit_mobius(boundary);
    double worst = 0.0;
    for (int i = 0; i < 32; ++i) {
      const cplx w = std::polar(std::sqrt(unit(rng)) * 0.95, 2.0 * M_PI * unit(rng));
      worst = std::max(worst, std::abs(fit(w) - s_matrix(m, w)));
    }
    o.bound(p->name + " held-out fit", worst, 1e-8);

    const ScatteringCoefficients s = scattering_coefficients(m);
    const cplx zero = find_zero(m);
    o.bound(p->name + " Newton zero vs R*", std::abs(zero - std::conj(s.R)), 1e-6);
    o.bound(p->name + " |S(R*)|", std::abs(s_matrix(m, std::conj(s.R))), 1e-6);

    const cplx pole = 1.0 / s.R;
    double smallest = INFINITY;
    for (int j = 0; j < 8; ++j) {
      const cplx near = pole + std::polar(5e-7, 2.0 * M_PI * j / 8);
      smallest = std::min(smallest, std::abs(s_matrix(m, near)));
    }
    o.bound(p->name + " 1e6/|S| near 1/R", 1e6 / smallest, 1.0);
  }
  return o;
}

Outcome phase_identities() {
  Outcome o;
  for (const Problem* p : both_potentials()) {
    const ScatteringCoefficients s = scattering_coefficients(p->m);
    const SMatrixMap map = blaschke_params(p->m);
    o.bound(p->name + " |Delta+T/T*|", std::abs(map.delta + s.T / std::conj(s.T)), 1e-8);
    o.bound(p->name + " |Delta-R'/R*|", std::abs(map.delta - s.Rp / std::conj(s.R)), 1e-8);
    o.bound(p->name + " ||Delta|-1|", std::abs(std::abs(map.delta) - 1.0), 1e-10);
  }
  return o;
}

Outcome cauchy() {
  Outcome o;
  for (const Problem* p : both_potentials()) {
    const TransferMatrix& m = p->m;
    const UnitaryFamilySample samples = sample_unit_circle([&m](cplx w) { return s_matrix(m, w); }, 128);
    for (const cplx w : {cplx(0.0), cplx(0.3), cplx(0.5, 0.2), cplx(0.9)}) {
      o.bound(p->name + " reconstruction", std::abs(cauchy_reconstruct(samples, w).value - s_matrix(m, w)), 1e-8);
    }
    const ScatteringCoefficients s = scattering_coefficients(m);
    o.bound(p->name + " average vs R'", std::abs(absorption_average(samples) - s.Rp), 1e-10);
  }
  return o;
}

Outcome sign_correspondence() {
  Outcome o;
  for (const Problem* p : both_potentials()) {
    int mismatches = 0;
    for (double radius : {0.5, 2.0}) {
      for (int j = 0; j < 64; ++j) {
        const cplx w = std::polar(radius, 2.0 * M_PI * (j + 0.5) / 64);
        const int lhs = dead_band_sign(std::norm(s_matrix(p->m, w)) - 1.0, 1e-10);
        const int rhs = dead_band_sign(std::norm(w) - 1.0, 1e-10);
        if (lhs != rhs) ++mismatches;
      }
    }
    o.require(p->name + ": " + std::to_string(mismatches) + " sign mismatches", mismatches == 0);
  }
  if (o.pass) o.detail = "256 points, no mismatches";
  return o;
}

// Doubling mu rotates the zero Omega_1 = R* by -2 Theta ln 2 and R itself by
// +2 Theta ln 2; both are checked.
Outcome mu_covariance() {
  Outcome o;
  for (double theta : kThetas) {
    const ScatteringCoefficients s1 = scattering_coefficients(
        cache.get(isp_name(theta), isp_config(theta)).m);
    const TransferMatrix& m2 = cache.get(isp_name(theta) + " mu=2", isp_config(theta, 2.0)).m;
    const ScatteringCoefficients s2 = scattering_coefficients(m2);
    const double shift = 2.0 * theta * std::log(2.0);
    const SMatrixMap map1 = blaschke_params(cache.get(isp_name(theta), isp_config(theta)).m);
    const SMatrixMap map2 = blaschke_params(m2);
    const double zero_shift = std::arg(map2.zero->value()) - std::arg(map1.zero->value());
    o.bound("arg Omega_1 shift", std::abs(wrap(zero_shift + shift)), 1e-8);
    o.bound("arg R shift", std::abs(wrap(std::arg(s2.R) - std::arg(s1.R) - shift)), 1e-8);
    o.bound("|R|", std::abs(std::abs(s2.R) - std::abs(s1.R)), 1e-10);
    o.bound("|T|", std::abs(std::abs(s2.T) - std::abs(s1.T)), 1e-10);
  }
  return o;
}

Outcome degenerate_branch() {
  Outcome o;
  const Problem& p = cache.get("opaque", opaque_config());
  const SMatrixMap map = blaschke_params(p.m);
  o.require("degenerate flag not set", map.degenerate);
  o.bound("||constant|-1|", std::abs(std::abs(map.constant) - 1.0), 1e-12);

  std::vector<cplx> omegas, values;
  for (int j = 0; j < 16; ++j) {
    omegas.push_back(std::polar(0.05 + 0.03 * j, 2.399963 * j));
    values.push_back(s_matrix(p.m, omegas.back()));
  }
  double spread = 0.0;
  for (const cplx& v : values) spread = std::max(spread, std::abs(v - values.front()));
  o.bound("spread", spread, 1e-6);
  o.bound("distance to constant", std::abs(values.front() - map.constant), 1e-6);
  for (const cplx& v : values) o.bound("||S|-1|", std::abs(std::abs(v) - 1.0), 1e-6);

  bool rank_deficient = false;
  try {
    fit_mobius(omegas, values);
  } catch (const Error& e) {
    rank_deficient = e.code() == ErrorCode::RankDeficient;
  }
  o.require("Mobius fit did not report RankDeficient", rank_deficient);
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"conformal oracle equivalence", oracle_equivalence},
      {"conservation", conservation},
      {"unitarity network", unitarity},
      {"circle mapping", circle_mapping},
      {"Blaschke structure", blaschke_structure},
      {"phase identities", phase_identities},
      {"Cauchy reconstruction", cauchy},
      {"sign correspondence", sign_correspondence},
      {"mu covariance", mu_covariance},
      {"degenerate branch", degenerate_branch},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = criteria[i].second();
    } catch (const std::exception& e) {
      outcome.pass = false;
      outcome.detail = std::string("exception: ") + e.what();
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!outcome.pass) ++failures;
    std::printf("%s  %2zu  %-30s %7.2fs  %s\n", outcome.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                seconds, outcome.detail.c_str());
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
