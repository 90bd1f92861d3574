#include <array>
#include <boost/numeric/odeint.hpp>
#include <cmath>

#include "doctest.h"
#include "sqm/bases.hpp"
#include "sqm/currents.hpp"
#include "sqm/errors.hpp"
#include "sqm/oracle.hpp"

using namespace sqm;

TEST_CASE("Gamma at real points") {
  CHECK(std::abs(complex_gamma(1.0) - 1.0) < 1e-15);
  CHECK(std::abs(complex_gamma(0.5) - std::sqrt(M_PI)) < 1e-14);
  CHECK(std::abs(complex_gamma(5.0) - 24.0) < 1e-12);
  CHECK(std::abs(complex_gamma(-0.5) + 2.0 * std::sqrt(M_PI)) < 1e-13);
  for (double x : {0.0, -1.0, -4.0}) {
    try {
      complex_gamma(x);
      FAIL("expected PoleOfGamma");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::PoleOfGamma);
    }
  }
}

TEST_CASE("Gamma recurrence and reflection on the strip") {
  for (double y = -10.0; y <= 10.0; y += 0.37) {
    const cplx z(1.0, y);
    const cplx g = complex_gamma(z);
    CHECK(std::abs(complex_gamma(z + 1.0) - z * g) < 1e-12 * std::abs(z * g));
    // Gamma(z) Gamma(1 - z) = pi / sin(pi z)
    const cplx w(0.3, y);
    const cplx lhs = complex_gamma(w) * complex_gamma(1.0 - w);
    CHECK(std::abs(lhs - M_PI / std::sin(M_PI * w)) < 1e-12 * std::abs(lhs));
    CHECK(std::abs(complex_gamma(std::conj(z)) - std::conj(g)) < 1e-15 * std::abs(g));
  }
}

TEST_CASE("Gamma modulus on the line Re z = 1") {
  for (double theta : {0.5, 1.0, 2.0}) {
    const double m = std::norm(complex_gamma(cplx(1.0, theta)));
    const double expected = M_PI * theta / std::sinh(M_PI * theta);
    CHECK(std::abs(m - expected) < 1e-12 * expected);
  }
}

TEST_CASE("conformal closed form: magnitudes and identities") {
  for (double theta : {0.5, 1.0, 2.0}) {
    const IspExactResult o = isp_exact(theta, 1.0, 1.0);
    CHECK(std::abs(std::abs(o.R) - std::exp(-M_PI * theta)) < 1e-15);
    CHECK(std::abs(std::norm(o.T) - (1.0 - std::exp(-2 * M_PI * theta))) < 1e-14);
    CHECK(std::abs(std::norm(o.R) + std::norm(o.T) - 1.0) < 1e-14);
    CHECK(std::abs(std::norm(o.Rp) + std::norm(o.Tp) - 1.0) < 1e-14);
    CHECK(std::abs(std::conj(o.R) * o.Tp + std::conj(o.T) * o.Rp) < 1e-15);
    CHECK(o.T == o.Tp);
    CHECK(std::abs(std::norm(o.a) - std::norm(o.b) - 1.0) < 1e-13);
    // Delta = -T/T* = R'/R*
    CHECK(std::abs(-o.T / std::conj(o.T) - o.Rp / std::conj(o.R)) < 1e-13);
    CHECK(std::abs(std::abs(o.gamma_ratio) - 1.0) < 1e-14);
  }
  const IspExactResult o1 = isp_exact(1.0, 1.0, 1.0);
  CHECK(std::abs(o1.R) == doctest::Approx(0.0432139).epsilon(1e-6));
  CHECK(std::norm(o1.T) == doctest::Approx(0.9981325).epsilon(1e-7));
  const IspExactResult big = isp_exact(12.0, 1.0, 1.0);
  CHECK(std::abs(big.R) < 1e-15);
  // Lanczos loses a little relative accuracy far up the imaginary axis.
  CHECK(std::abs(std::abs(big.T) - 1.0) < 1e-13);
  CHECK_THROWS_AS(isp_exact(0.0, 1.0, 1.0), Error);
  CHECK_THROWS_AS(isp_exact(1.0, -1.0, 1.0), Error);
}

TEST_CASE("closed form agrees with Bessel-function values") {
  // 40-digit evaluation through sqrt(r) J_{i Theta}(kr) and sqrt(r) H1_{i Theta}(kr).
  const IspExactResult o = isp_exact(1.0, 1.7, 0.6);
  CHECK(std::abs(o.R - cplx(-0.011564084970970675, 0.041637899448605221)) < 1e-14);
  CHECK(std::abs(o.T - cplx(0.7953721656363566, -0.60457892404484639)) < 1e-14);
  const IspExactResult h = isp_exact(0.5, 1.0, 1.0);
  CHECK(std::abs(h.R - cplx(-0.20352548840418786, -0.042323679348670088)) < 1e-14);
}

TEST_CASE("closed form agrees with brute-force integration") {
  // Independent path: odeint RKF78 at 1e-14 between the exact conformal
  // solution near the origin and the exact Hankel solution far out.
  for (double theta : {0.5, 1.0, 2.0}) {
    ProblemConfig c;
    c.lambda = theta * theta + 0.25;
    c.mu = 1.3;
    const ValidatedConfig cfg = validate(c);
    const BasisValue start = eval_singularity(cfg, 0.01, BasisOrder::corrected, false).first;

    using State = std::array<double, 4>;
    State y{start.u.real(), start.u.imag(), start.du.real(), start.du.imag()};
    const auto rhs = [&cfg](const State& x, State& dx, double r) {
      const double j = cfg.invariant()(r);
      dx = {x[2], x[3], -j * x[0], -j * x[1]};
    };
    namespace ode = boost::numeric::odeint;
    const double r1 = 60.0;
    ode::integrate_adaptive(ode::make_controlled(1e-14, 1e-14, ode::runge_kutta_fehlberg78<State>()),
                            rhs, y, 0.01, r1, 1e-5);
    const StateVector w{r1, {y[0], y[1]}, {y[2], y[3]}};
    const BasisPair far = eval_asymptotic(cfg, r1, BasisOrder::corrected, false);
    const cplx a = wronskian(far.second.state(), w) / wronskian(far.second.state(), far.first.state());
    const cplx bc = wronskian(far.first.state(), w) / wronskian(far.first.state(), far.second.state());
    const IspExactResult o = isp_exact(theta, 1.0, 1.3);
    CHECK(std::abs(a - o.a) < 1e-9);
    CHECK(std::abs(std::conj(bc) - o.b) < 1e-9);
  }
}
