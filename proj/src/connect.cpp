#include "sqm/connect.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "sqm/bases.hpp"
#include "sqm/currents.hpp"
#include "sqm/errors.hpp"
#include "sqm/integrate.hpp"

namespace sqm {

namespace {

// Raw columns: u+ = c1p u1 + c2p u2, u- = c1m u1 + c2m u2.
struct Columns {
  cplx c1p, c2p, c1m, c2m;
  double truncation = 0.0;

  cplx a() const { return 0.5 * (c1p + std::conj(c2m)); }
  cplx b() const { return 0.5 * (c1m + std::conj(c2p)); }
};

Columns project(const ValidatedConfig& cfg, const StateVector& plus, const StateVector& minus) {
  const BasisPair basis = eval_asymptotic(cfg, plus.r, BasisOrder::corrected, false);
  const StateVector u1 = basis.first.state();
  const StateVector u2 = basis.second.state();
  const cplx w21 = wronskian(u2, u1);
  const cplx w12 = -w21;
  Columns c;
  c.c1p = wronskian(u2, plus) / w21;
  c.c2p = wronskian(u1, plus) / w12;
  c.c1m = wronskian(u2, minus) / w21;
  c.c2m = wronskian(u1, minus) / w12;
  c.truncation = basis.truncation_error;
  return c;
}

// Averages the projections over radii spread across half a wavelength, which
// cancels the leading e^(2ikr) ripple of the residual error.
Columns measure(const ValidatedConfig& cfg, Integrator& integrator, double r, int radii) {
  const double spacing = std::numbers::pi / (cfg.k() * radii);
  Columns sum{};
  for (int j = 0; j < radii; ++j) {
    integrator.advance_to(r + j * spacing);
    const Columns c = project(cfg, integrator.state(), *integrator.companion());
    sum.c1p += c.c1p;
    sum.c2p += c.c2p;
    sum.c1m += c.c1m;
    sum.c2m += c.c2m;
    sum.truncation = std::max(sum.truncation, c.truncation);
  }
  const double inv = 1.0 / radii;
  sum.c1p *= inv;
  sum.c2p *= inv;
  sum.c1m *= inv;
  sum.c2m *= inv;
  return sum;
}

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

TransferMatrix transfer_matrix(const ValidatedConfig& config, const TransferOptions& options) {
  const double tol = config.tol();
  double r_min = config.config().r_min;
  double r_max = config.config().r_max;
  const int radii = std::max(1, options.projection_radii);

  double origin_error = singular_truncation(config, r_min);
  if (options.stabilize) {
    for (int i = 0; !(origin_error <= 0.5 * tol); ++i) {
      if (i >= options.max_halvings) {
        std::ostringstream msg;
        msg << "origin truncation " << origin_error << " still above tol at r = " << r_min;
        throw Error(ErrorCode::SingularRegionTooFar, msg.str());
      }
      r_min *= 0.5;
      origin_error = singular_truncation(config, r_min);
    }
    double tail_error = asymptotic_truncation(config, r_max);
    for (int i = 0; !(tail_error <= 0.5 * tol); ++i) {
      if (i >= options.max_halvings) {
        std::ostringstream msg;
        msg << "asymptotic truncation " << tail_error << " still above tol at r = " << r_max;
        throw Error(ErrorCode::AsymptoticRegionTooClose, msg.str());
      }
      r_max *= 2.0;
      tail_error = asymptotic_truncation(config, r_max);
    }
  }

  const BasisPair start = eval_singularity(config, r_min, BasisOrder::corrected, false);
  IntegratorOptions iopt;
  iopt.tol = std::max(1e-3 * tol, 1e-15);
  iopt.record_samples = false;
  iopt.check_drift = false;
  Integrator integrator(config, start.first.state(), start.second.state(), iopt);

  Columns previous = measure(config, integrator, r_max, radii);
  double previous_r = r_max;
  Columns current = previous;
  double delta = 0.0;
  int doublings = 0;
  for (;;) {
    const double r_next = 2.0 * previous_r;
    current = measure(config, integrator, r_next, radii);
    ++doublings;
    delta = std::max(std::abs(current.a() - previous.a()), std::abs(current.b() - previous.b()));
    if (!options.stabilize) break;
    if (delta < tol * std::max(1.0, std::abs(current.a()))) {
      previous_r = r_next;
      break;
    }
    if (doublings >= options.max_doublings) {
      std::ostringstream msg;
      msg << "(a, b) still moving by " << delta << " after " << doublings << " doublings of r_max";
      throw Error(ErrorCode::NoStabilization, msg.str());
    }
    previous = current;
    previous_r = r_next;
  }
  const Columns& used = options.stabilize ? current : previous;

  TransferMatrix m;
  m.a = used.a();
  m.b = used.b();
  m.tol = tol;
  if (!finite(m.a) || !finite(m.b) || !finite(used.c1p) || !finite(used.c2m) ||
      std::abs(m.a) < 0.5) {
    std::ostringstream msg;
    msg << "propagated columns lost independence (a = " << m.a << ", b = " << m.b << ")";
    throw Error(ErrorCode::DegenerateColumns, msg.str());
  }
  auto& res = m.residuals;
  res.su11_defect = std::norm(m.a) - std::norm(m.b) - 1.0;
  res.structure_defect =
      std::max({std::abs(used.c1p - m.a), std::abs(used.c1m - m.b),
                std::abs(used.c2p - std::conj(m.b)), std::abs(used.c2m - std::conj(m.a))});
  res.stabilization_delta = delta;
  res.wronskian_drift = integrator.wronskian_drift();
  res.origin_truncation = origin_error;
  res.asymptotic_truncation = used.truncation;
  res.r_min = r_min;
  res.r_max = options.stabilize ? previous_r : r_max;
  res.doublings = doublings;
  res.steps = integrator.stats().accepted;

  if (options.stabilize && res.wronskian_drift > 10.0 * tol) {
    std::ostringstream msg;
    msg << "Wronskian drift " << res.wronskian_drift << " exceeds " << 10.0 * tol;
    throw Error(ErrorCode::DriftExceeded, msg.str());
  }
  return m;
}

ScatteringCoefficients scattering_coefficients_unchecked(const TransferMatrix& m) {
  const cplx ac = std::conj(m.a);
  ScatteringCoefficients s;
  s.R = -std::conj(m.b) / ac;
  s.T = 1.0 / ac;
  s.Rp = m.b / ac;
  s.Tp = s.T;
  return s;
}

ScatteringCoefficients scattering_coefficients(const TransferMatrix& m) {
  if (std::abs(m.a) > 1.0 / m.tol) {
    std::ostringstream msg;
    msg << "|a| = " << std::abs(m.a) << " exceeds 1/tol; |T| is below tol";
    throw Error(ErrorCode::DegenerateTransmission, msg.str());
  }
  return scattering_coefficients_unchecked(m);
}

cplx s_matrix(const TransferMatrix& m, const Omega& omega) {
  const cplx bc = std::conj(m.b);
  if (omega.is_infinite()) {
    if (std::abs(bc) <= m.tol * std::abs(m.a)) {
      throw Error(ErrorCode::PoleProximity, "pole at Omega = infinity");
    }
    return m.a / bc;
  }
  const cplx w = omega.value();
  const cplx den = bc * w + std::conj(m.a);
  // |Omega - Omega_2| = |den| / |b| and |Omega_2| = |a| / |b|.
  if (std::abs(den) < m.tol * std::abs(m.a)) {
    std::ostringstream msg;
    msg << "Omega = " << w << " is within tol of the pole";
    throw Error(ErrorCode::PoleProximity, msg.str());
  }
  return (m.a * w + m.b) / den;
}

Omega s_matrix_inverse(const TransferMatrix& m, cplx w) {
  const cplx den = m.a - std::conj(m.b) * w;
  if (den == cplx{}) return Omega::infinity();
  return Omega((std::conj(m.a) * w - m.b) / den);
}

SMatrixMap blaschke_params(const TransferMatrix& m) {
  SMatrixMap map;
  map.a = m.a;
  map.b = m.b;
  map.tol = m.tol;
  map.delta = -m.a / std::conj(m.a);
  const ScatteringCoefficients s = scattering_coefficients_unchecked(m);
  map.degenerate = std::abs(s.R) > 1.0 - std::sqrt(m.tol);
  map.constant = std::abs(s.Rp) > 0.0 ? s.Rp / std::abs(s.Rp) : map.delta;
  if (!map.degenerate) {
    map.zero = Omega(std::conj(s.R));
    map.pole = m.b == cplx{} ? Omega::infinity() : Omega(-std::conj(m.a) / std::conj(m.b));
  }
  return map;
}

cplx SMatrixMap::evaluate(const Omega& omega) const {
  if (degenerate) return constant;
  TransferMatrix m;
  m.a = a;
  m.b = b;
  m.tol = tol;
  return s_matrix(m, omega);
}

cplx full_s_matrix(const ValidatedConfig& config, const TransferMatrix& m, const Omega& omega) {
  return std::polar(1.0, std::numbers::pi * config.config().l_plus_nu) * s_matrix(m, omega);
}

}  // namespace sqm
