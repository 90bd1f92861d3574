#include "sqm/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sqm/errors.hpp"

namespace sqm {

namespace {

double term_value(const ExtraTerm& term, double r) {
  return std::visit(
      [r](const auto& t) -> double {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, GaussianTerm>) {
          const double x = (r - t.center) / t.width;
          return t.height * std::exp(-x * x);
        } else if constexpr (std::is_same_v<T, BarrierTerm>) {
          return 0.5 * t.height *
                 (std::tanh((r - t.r_left) / t.edge) - std::tanh((r - t.r_right) / t.edge));
        } else {
          return t.height * std::exp(-r / t.range);
        }
      },
      term);
}

double sech2(double x) {
  const double c = std::cosh(x);
  return std::isfinite(c) ? 1.0 / (c * c) : 0.0;
}

double term_derivative(const ExtraTerm& term, double r) {
  return std::visit(
      [r](const auto& t) -> double {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, GaussianTerm>) {
          const double x = (r - t.center) / t.width;
          return -2.0 * x / t.width * t.height * std::exp(-x * x);
        } else if constexpr (std::is_same_v<T, BarrierTerm>) {
          return 0.5 * t.height / t.edge *
                 (sech2((r - t.r_left) / t.edge) - sech2((r - t.r_right) / t.edge));
        } else {
          return -t.height / t.range * std::exp(-r / t.range);
        }
      },
      term);
}

// Each built-in is unimodal in r, so its sup over an interval sits at the peak
// (if inside) or at the nearer endpoint.
double term_sup_abs(const ExtraTerm& term, double lo, double hi) {
  const double peak = std::visit(
      [lo](const auto& t) -> double {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, GaussianTerm>) {
          return t.center;
        } else if constexpr (std::is_same_v<T, BarrierTerm>) {
          return 0.5 * (t.r_left + t.r_right);
        } else {
          return lo;
        }
      },
      term);
  const double at = std::clamp(peak, lo, hi);
  return std::max({std::abs(term_value(term, at)), std::abs(term_value(term, lo)),
                   std::abs(term_value(term, hi))});
}

void check_term(const ExtraTerm& term) {
  std::visit(
      [](const auto& t) {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, GaussianTerm>) {
          if (!(t.width > 0.0)) throw Error(ErrorCode::BadParameter, "gaussian width must be > 0");
        } else if constexpr (std::is_same_v<T, BarrierTerm>) {
          if (!(t.edge > 0.0)) throw Error(ErrorCode::BadParameter, "barrier edge must be > 0");
          if (!(t.r_right > t.r_left))
            throw Error(ErrorCode::BadParameter, "barrier needs r_left < r_right");
        } else {
          if (!(t.range > 0.0)) throw Error(ErrorCode::BadParameter, "exponential range must be > 0");
        }
      },
      term);
}

}  // namespace

double ExtraPotential::value(double r) const {
  double w = 0.0;
  for (const auto& t : terms_) w += term_value(t, r);
  return w;
}

double ExtraPotential::derivative(double r) const {
  double w = 0.0;
  for (const auto& t : terms_) w += term_derivative(t, r);
  return w;
}

double ExtraPotential::sup_abs(double lo, double hi) const {
  double s = 0.0;
  for (const auto& t : terms_) s += term_sup_abs(t, lo, hi);
  return s;
}

double NormalInvariant::operator()(double r) const {
  return k * k + lambda * std::pow(r, -p) - extra.value(r) - centrifugal / (r * r);
}

double NormalInvariant::derivative(double r) const {
  return -p * lambda * std::pow(r, -p - 1.0) - extra.derivative(r) +
         2.0 * centrifugal / (r * r * r);
}

double ValidatedConfig::tail_coefficient() const noexcept {
  return conformal_ ? -config_.lambda : invariant_.centrifugal;
}

double ValidatedConfig::wkb_invariant(double r) const {
  return invariant_(r) - langer_shift() / (r * r);
}

ValidatedConfig ValidatedConfig::with_k(double k) const {
  ProblemConfig c = config_;
  c.k = k;
  return validate(c);
}

ValidatedConfig ValidatedConfig::with_mu(double mu) const {
  ProblemConfig c = config_;
  c.mu = mu;
  return validate(c);
}

ValidatedConfig validate(const ProblemConfig& config) {
  const auto finite = [](double x) { return std::isfinite(x); };
  if (!finite(config.p) || !finite(config.lambda) || !finite(config.k) ||
      !finite(config.l_plus_nu) || !finite(config.mu) || !finite(config.r_min) ||
      !finite(config.r_max) || !finite(config.tol)) {
    throw Error(ErrorCode::BadParameter, "all numeric fields must be finite");
  }
  if (config.p < 2.0) throw Error(ErrorCode::BadParameter, "p must be >= 2");
  if (!(config.lambda > 0.0)) throw Error(ErrorCode::NonSingular, "lambda must be > 0");
  if (!(config.k > 0.0)) throw Error(ErrorCode::BadParameter, "k must be > 0");
  if (!(config.tol > 0.0)) throw Error(ErrorCode::BadParameter, "tol must be > 0");
  if (!(config.r_min > 0.0) || !(config.r_max > config.r_min)) {
    throw Error(ErrorCode::BadGrid, "need 0 < r_min < r_max");
  }
  for (const auto& t : config.extra_potential.terms()) check_term(t);

  ValidatedConfig v;
  v.config_ = config;
  v.conformal_ = config.p == 2.0;
  if (v.conformal_) {
    const double theta2 = config.lambda - 0.25;
    if (!(theta2 > 0.0)) {
      throw Error(ErrorCode::SubcriticalCoupling,
                  "p = 2 requires lambda > 1/4 (got " + std::to_string(config.lambda) + ")");
    }
    if (!(config.mu > 0.0)) throw Error(ErrorCode::BadParameter, "mu must be > 0 for p = 2");
    v.theta_ = std::sqrt(theta2);
  }
  v.invariant_.p = config.p;
  v.invariant_.lambda = config.lambda;
  v.invariant_.k = config.k;
  v.invariant_.centrifugal =
      v.conformal_ ? 0.0 : config.l_plus_nu * config.l_plus_nu - 0.25;
  v.invariant_.extra = config.extra_potential;
  return v;
}

double normal_invariant(const ValidatedConfig& config, double r) {
  if (!(r > 0.0)) throw Error(ErrorCode::DomainError, "radius must be > 0");
  return config.invariant()(r);
}

}  // namespace sqm
