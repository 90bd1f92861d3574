#include "sqm/bases.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>

#include "sqm/errors.hpp"

namespace sqm {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr cplx kI{0.0, 1.0};

double integrate(const std::function<double(double)>& f, double a, double b) {
  using boost::math::quadrature::gauss_kronrod;
  return gauss_kronrod<double, 61>::integrate(f, a, b, 12, 1e-13);
}

// Exactly solvable core J0 of the invariant near one end, and the remainder
// delta = J - J0 handled by the physical-optics dressing.
enum class Region { origin, infinity };

struct Split {
  std::function<double(double)> core;
  std::function<double(double)> core_derivative;
  std::function<double(double)> remainder;
  bool has_remainder = false;
};

Split split_invariant(const ValidatedConfig& cfg, Region region) {
  const auto& inv = cfg.invariant();
  const double k2 = cfg.k() * cfg.k();
  const double lambda = inv.lambda;
  const double p = inv.p;
  const auto extra = inv.extra;
  Split s;
  if (region == Region::origin) {
    if (cfg.conformal()) {
      s.core = [k2, lambda](double r) { return k2 + lambda / (r * r); };
      s.core_derivative = [lambda](double r) { return -2.0 * lambda / (r * r * r); };
      s.remainder = [extra](double r) { return -extra.value(r); };
      s.has_remainder = !extra.empty();
    } else {
      const double c = inv.centrifugal;
      s.core = [lambda, p, c](double r) { return lambda * std::pow(r, -p) - c / (r * r); };
      s.core_derivative = [lambda, p, c](double r) {
        return -p * lambda * std::pow(r, -p - 1.0) + 2.0 * c / (r * r * r);
      };
      s.remainder = [extra, k2](double r) { return k2 - extra.value(r); };
      s.has_remainder = true;
    }
  } else {
    const double gamma = cfg.tail_coefficient();
    s.core = [k2, gamma](double r) { return k2 - gamma / (r * r); };
    s.core_derivative = [gamma](double r) { return 2.0 * gamma / (r * r * r); };
    if (cfg.conformal()) {
      s.remainder = [extra](double r) { return -extra.value(r); };
      s.has_remainder = !extra.empty();
    } else {
      s.remainder = [extra, lambda, p](double r) {
        return lambda * std::pow(r, -p) - extra.value(r);
      };
      s.has_remainder = true;
    }
  }
  return s;
}

// f = (J0w/Jw)^(1/4) exp(i Phi), Phi' = sqrt(Jw) - sqrt(J0w), with Phi -> 0 at
// the end the basis is normalized at. Returns f and f'/f.
struct Dressing {
  cplx factor{1.0, 0.0};
  cplx log_derivative{};
};

Dressing dress(const ValidatedConfig& cfg, const Split& split, Region region, double r) {
  if (!split.has_remainder) return {};
  const double shift = cfg.langer_shift();
  const auto positive_sqrt = [r](double j) {
    if (!(j > 0.0)) {
      std::ostringstream msg;
      msg << "non-positive invariant near r = " << r;
      throw Error(ErrorCode::TurningPoint, msg.str());
    }
    return std::sqrt(j);
  };
  const auto integrand = [&](double s) {
    const double core = split.core(s) - shift / (s * s);
    const double delta = split.remainder(s);
    return delta / (positive_sqrt(core + delta) + positive_sqrt(core));
  };
  const double phase = region == Region::origin
                           ? integrate(integrand, 0.0, r)
                           : -integrate(integrand, r, std::numeric_limits<double>::infinity());

  const double core = split.core(r) - shift / (r * r);
  const double full = core + split.remainder(r);
  const double core_d = split.core_derivative(r) + 2.0 * shift / (r * r * r);
  const double full_d = cfg.invariant().derivative(r) + 2.0 * shift / (r * r * r);
  const double sc = positive_sqrt(core);
  const double sf = positive_sqrt(full);
  Dressing d;
  d.factor = std::pow(core / full, 0.25) * std::polar(1.0, phase);
  d.log_derivative = cplx(0.25 * (core_d / core - full_d / full), sf - sc);
  return d;
}

// Frobenius series F with u+ = sqrt(r/Theta) (mu r)^(i Theta) F(r) for the
// conformal core J0 = k^2 + (Theta^2 + 1/4)/r^2.
struct Frobenius {
  cplx value{1.0, 0.0};
  cplx derivative{};
  double rounding = 0.0;
};

Frobenius conformal_series(double theta, double k, double r) {
  const double z = -0.25 * (k * r) * (k * r);
  Frobenius f;
  cplx term{1.0, 0.0};
  double largest = 1.0;
  for (int m = 1; m < 100000; ++m) {
    term *= z / (static_cast<double>(m) * cplx(m, theta));
    f.value += term;
    f.derivative += 2.0 * m * term / r;
    largest = std::max(largest, std::abs(term));
    if (std::abs(term) < 1e-18 * std::abs(f.value) && m > k * r) break;
  }
  f.rounding = kEps * largest / std::abs(f.value);
  return f;
}

double first_order_origin_bound(const ValidatedConfig& cfg, double r, double remainder_sup) {
  if (cfg.conformal()) return remainder_sup * r * r / (2.0 * cfg.theta());
  const double q = 0.5 * cfg.invariant().p + 1.0;
  return remainder_sup * std::pow(r, q) / (q * std::sqrt(cfg.invariant().lambda));
}

struct Evaluated {
  BasisValue value;
  double truncation = 0.0;
};

Evaluated singular_plus(const ValidatedConfig& cfg, double r, BasisOrder order) {
  const auto& inv = cfg.invariant();
  const double k = cfg.k();
  const double w_sup = inv.extra.sup_abs(0.0, r);
  Evaluated out;
  out.value.which = BasisTag::plus;
  out.value.r = r;

  if (cfg.conformal()) {
    const double theta = cfg.theta();
    const cplx lead = std::sqrt(r / theta) * std::polar(1.0, theta * std::log(cfg.config().mu * r));
    const cplx lead_log_d = cplx(0.5, theta) / r;
    if (order == BasisOrder::leading) {
      out.value.u = lead;
      out.value.du = lead * lead_log_d;
      out.truncation = first_order_origin_bound(cfg, r, k * k + w_sup);
      return out;
    }
    const Frobenius f = conformal_series(theta, k, r);
    cplx u = lead * f.value;
    cplx du = lead * (lead_log_d * f.value + f.derivative);
    const Dressing d = dress(cfg, split_invariant(cfg, Region::origin), Region::origin, r);
    out.value.u = u * d.factor;
    out.value.du = (du + u * d.log_derivative) * d.factor;
    out.truncation = f.rounding + first_order_origin_bound(cfg, r, w_sup);
    return out;
  }

  const double p = inv.p;
  const double n = cfg.n();
  const double sqrt_lambda = std::sqrt(inv.lambda);
  const double amp = std::pow(r, 0.25 * p) / std::sqrt(sqrt_lambda);
  const double x = 2.0 * sqrt_lambda * std::pow(r, -0.5 * n) / n;
  const cplx wave = std::polar(1.0, -x);
  if (order == BasisOrder::leading) {
    out.value.u = amp * wave;
    out.value.du = out.value.u * cplx(0.25 * p / r, sqrt_lambda * std::pow(r, -0.5 * p));
    // Neglected: centrifugal term, curvature of the amplitude, k^2 and W.
    const double c = std::abs(inv.centrifugal) + std::abs(0.25 * p * (0.25 * p - 1.0));
    out.truncation = c * std::pow(r, 0.5 * n) / (0.5 * n * sqrt_lambda) +
                     first_order_origin_bound(cfg, r, k * k + w_sup);
    return out;
  }
  // sqrt(r) H2_nu(x) with nu = 2|l+nu|/n solves u'' + (lambda r^-p - c/r^2) u = 0.
  const double order_nu = 2.0 * std::abs(cfg.config().l_plus_nu) / n;
  const auto series = detail::hankel_series(4.0 * order_nu * order_nu, x, -1);
  const double damp = 0.25 * p * amp / r;
  const double dx = -0.5 * n * x / r;
  cplx u = amp * wave * series.value;
  cplx du = wave * (damp * series.value + amp * dx * (-kI * series.value + series.derivative));
  const Dressing d = dress(cfg, split_invariant(cfg, Region::origin), Region::origin, r);
  out.value.u = u * d.factor;
  out.value.du = (du + u * d.log_derivative) * d.factor;
  out.truncation = series.tail + first_order_origin_bound(cfg, r, k * k + w_sup);
  return out;
}

double remainder_tail_integral(const Split& split, double r) {
  if (!split.has_remainder) return 0.0;
  return integrate([&](double s) { return std::abs(split.remainder(s)); }, r,
                   std::numeric_limits<double>::infinity());
}

Evaluated asymptotic_one(const ValidatedConfig& cfg, double r, BasisOrder order) {
  const double k = cfg.k();
  const double gamma = cfg.tail_coefficient();
  const cplx norm = std::polar(1.0 / std::sqrt(k), -0.25 * std::numbers::pi);
  const cplx wave = norm * std::polar(1.0, k * r);
  const Split split = split_invariant(cfg, Region::infinity);
  Evaluated out;
  out.value.which = BasisTag::one;
  out.value.r = r;

  if (order == BasisOrder::leading) {
    out.value.u = wave;
    out.value.du = kI * k * wave;
    out.truncation = std::abs(gamma) / (k * k * r) + remainder_tail_integral(split, r) / k;
    return out;
  }
  const auto series = detail::hankel_series(4.0 * gamma + 1.0, k * r, +1);
  cplx u = wave * series.value;
  cplx du = wave * (kI * k * series.value + k * series.derivative);
  const Dressing d = dress(cfg, split, Region::infinity, r);
  out.value.u = u * d.factor;
  out.value.du = (du + u * d.log_derivative) * d.factor;
  // Second-order and non-adiabatic residue of the dressing.
  double residue = 0.0;
  if (split.has_remainder) {
    const double h = 1e-4 * r;
    const double slope = (split.remainder(r + h) - split.remainder(r - h)) / (2.0 * h);
    const double first = remainder_tail_integral(split, r) / k;
    residue = first * first + std::abs(slope) / (4.0 * k * k * k);
  }
  out.truncation = series.tail + residue;
  return out;
}

BasisValue conjugate(const BasisValue& v, BasisTag tag) {
  return {std::conj(v.u), std::conj(v.du), tag, v.r};
}

void check_radius(double r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw Error(ErrorCode::DomainError, "radius must be > 0");
}

}  // namespace

namespace detail {

HankelSeries hankel_series(double four_nu_squared, double x, int s) {
  HankelSeries out;
  const cplx step = cplx(0.0, static_cast<double>(s)) / x;
  double coeff = 1.0;
  cplx power{1.0, 0.0};  // (s i / x)^k
  double previous = 1.0;
  for (int k = 1; k < 400; ++k) {
    const double odd = 2.0 * k - 1.0;
    coeff *= (four_nu_squared - odd * odd) / (8.0 * k);
    power *= step;
    const cplx term = coeff * power;
    const double mag = std::abs(term);
    if (mag == 0.0) {
      out.tail = 0.0;
      return out;
    }
    if (mag > previous) {
      out.tail = previous;
      return out;
    }
    out.value += term;
    out.derivative += -static_cast<double>(k) * term / x;
    if (mag < 1e-18 * std::abs(out.value)) {
      out.tail = mag;
      return out;
    }
    previous = mag;
  }
  out.tail = previous;
  return out;
}

}  // namespace detail

double asymptotic_truncation(const ValidatedConfig& config, double r, BasisOrder order) {
  check_radius(r);
  return asymptotic_one(config, r, order).truncation;
}

double singular_truncation(const ValidatedConfig& config, double r, BasisOrder order) {
  check_radius(r);
  return singular_plus(config, r, order).truncation;
}

BasisPair eval_asymptotic(const ValidatedConfig& config, double r, BasisOrder order, bool enforce) {
  check_radius(r);
  const Evaluated one = asymptotic_one(config, r, order);
  if (enforce && !(one.truncation <= config.tol())) {
    std::ostringstream msg;
    msg << "truncation estimate " << one.truncation << " exceeds tol " << config.tol()
        << " at r = " << r;
    throw Error(ErrorCode::AsymptoticRegionTooClose, msg.str());
  }
  return {one.value, conjugate(one.value, BasisTag::two), one.truncation};
}

BasisPair eval_singularity(const ValidatedConfig& config, double r, BasisOrder order,
                           bool enforce) {
  check_radius(r);
  const Evaluated plus = singular_plus(config, r, order);
  if (enforce && !(plus.truncation <= config.tol())) {
    std::ostringstream msg;
    msg << "truncation estimate " << plus.truncation << " exceeds tol " << config.tol()
        << " at r = " << r;
    throw Error(ErrorCode::SingularRegionTooFar, msg.str());
  }
  return {plus.value, conjugate(plus.value, BasisTag::minus), plus.truncation};
}

WkbReference wkb_reference(const ValidatedConfig& config, double r, double r_ref) {
  check_radius(r);
  check_radius(r_ref);
  const auto root = [&config](double s) {
    const double j = config.wkb_invariant(s);
    if (!(j > 0.0)) {
      std::ostringstream msg;
      msg << "J_w(" << s << ") = " << j;
      throw Error(ErrorCode::TurningPoint, msg.str());
    }
    return std::sqrt(j);
  };
  WkbReference w;
  w.amplitude = 1.0 / std::sqrt(root(r));
  root(r_ref);
  if (r > r_ref) {
    w.phase = integrate(root, r_ref, r);
  } else if (r < r_ref) {
    w.phase = -integrate(root, r, r_ref);
  }
  return w;
}

}  // namespace sqm
