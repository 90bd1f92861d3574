#include <cmath>
#include <random>

#include "doctest.h"
#include "sqm/connect.hpp"
#include "sqm/errors.hpp"

using namespace sqm;

namespace {

ValidatedConfig isp(double theta = 1.0, double mu = 1.0) {
  ProblemConfig c;
  c.lambda = theta * theta + 0.25;
  c.mu = mu;
  return validate(c);
}

ValidatedConfig power4() {
  ProblemConfig c;
  c.p = 4.0;
  c.lambda = 1.0;
  return validate(c);
}

ValidatedConfig dressed() {
  ProblemConfig c;
  c.p = 3.0;
  c.lambda = 2.0;
  c.k = 1.3;
  c.l_plus_nu = 1.2;
  c.extra_potential = ExtraPotential({GaussianTerm{0.8, 3.0, 0.7}});
  return validate(c);
}

ValidatedConfig barrier() {
  ProblemConfig c;
  c.p = 4.0;
  c.lambda = 1.0;
  c.extra_potential = ExtraPotential({BarrierTerm{10.0, 2.0, 12.0, 0.25}});
  return validate(c);
}

TransferMatrix matrix(cplx a, cplx b, double tol = 1e-10) {
  TransferMatrix m;
  m.a = a;
  m.b = b;
  m.tol = tol;
  return m;
}

}  // namespace

TEST_CASE("conformal reflection magnitude") {
  const TransferMatrix m = transfer_matrix(isp(1.0));
  CHECK(std::abs(m.b / m.a) == doctest::Approx(std::exp(-M_PI)).epsilon(1e-9));
  CHECK(std::abs(m.b / m.a) == doctest::Approx(0.0432139).epsilon(1e-6));
}

TEST_CASE("scattering data match Bessel-function values") {
  // Computed from sqrt(r) J_{i Theta}(kr) and sqrt(r) H1_{i Theta}(kr) at 40 digits.
  struct Case {
    double theta, k, mu;
    cplx R, T;
  };
  const Case cases[] = {
      {0.5, 1.0, 1.0, {-0.20352548840418786, -0.042323679348670088}, {0.97301902546878674, 0.10010023882089534}},
      {1.0, 1.0, 1.0, {-0.030629628795053235, -0.030483906763819406}, {0.92347164450121181, 0.381225234042186}},
      {2.0, 1.0, 1.0, {0.0018562151985256731, -0.00020446880684175615}, {0.054828046493023168, 0.99849406506769117}},
      {1.0, 1.7, 0.6, {-0.011564084970970675, 0.041637899448605221}, {0.7953721656363566, -0.60457892404484639}},
  };
  for (const auto& c : cases) {
    ProblemConfig p;
    p.lambda = c.theta * c.theta + 0.25;
    p.k = c.k;
    p.mu = c.mu;
    const ScatteringCoefficients s = scattering_coefficients(transfer_matrix(validate(p)));
    CHECK(std::abs(s.R - c.R) < 1e-8);
    CHECK(std::abs(s.T - c.T) < 1e-8);
    CHECK(std::abs(s.Rp - std::exp(-M_PI * c.theta)) < 1e-8);
  }
}

TEST_CASE("SU(1,1) structure for assorted potentials") {
  for (const auto& cfg : {isp(0.5), isp(2.0), power4(), dressed()}) {
    const TransferMatrix m = transfer_matrix(cfg);
    CHECK(std::abs(m.residuals.su11_defect) < 1e-8);
    CHECK(m.residuals.structure_defect < 1e-8);
    CHECK(m.residuals.wronskian_drift < 1e-9);
    CHECK(m.residuals.stabilization_delta < 1e-10 * std::max(1.0, std::abs(m.a)));
    CHECK(m.residuals.r_max >= cfg.config().r_max);
    CHECK(m.residuals.r_min <= cfg.config().r_min);
    const ScatteringCoefficients s = scattering_coefficients(m);
    CHECK(std::abs(std::norm(s.R) + std::norm(s.T) - 1.0) < 1e-8);
    CHECK(std::abs(std::norm(s.Rp) + std::norm(s.Tp) - 1.0) < 1e-8);
    CHECK(std::abs(std::conj(s.R) * s.Tp + std::conj(s.T) * s.Rp) < 1e-8);
  }
}

TEST_CASE("stabilization can be switched off") {
  ProblemConfig c;
  c.p = 4.0;
  c.lambda = 1.0;
  c.r_min = 0.05;
  c.r_max = 1.5;
  c.tol = 1e-2;
  TransferOptions opt;
  opt.stabilize = false;
  const TransferMatrix m = transfer_matrix(validate(c), opt);
  CHECK(m.residuals.r_min == 0.05);
  CHECK(m.residuals.r_max == 1.5);
  CHECK(m.residuals.doublings == 1);
  CHECK(m.residuals.stabilization_delta > 1e-2);
}

TEST_CASE("exhausted doublings report NoStabilization") {
  ProblemConfig c;
  c.p = 4.0;
  c.lambda = 1.0;
  c.r_max = 400.0;
  c.tol = 1e-15;
  TransferOptions opt;
  opt.max_doublings = 1;
  try {
    transfer_matrix(validate(c), opt);
    FAIL("expected NoStabilization");
  } catch (const Error& e) {
    CHECK((e.code() == ErrorCode::NoStabilization || e.code() == ErrorCode::DriftExceeded));
  }
}

TEST_CASE("scattering coefficient algebra") {
  ScatteringCoefficients s = scattering_coefficients(matrix(1.0, 0.0));
  CHECK(s.R == cplx(0.0));
  CHECK(s.T == cplx(1.0));
  CHECK(s.Rp == cplx(0.0));
  CHECK(s.Tp == cplx(1.0));

  const double t = 0.7;
  s = scattering_coefficients(matrix(std::cosh(t), std::sinh(t)));
  CHECK(s.R.real() == doctest::Approx(-std::tanh(t)));
  CHECK(s.T.real() == doctest::Approx(1.0 / std::cosh(t)));
  CHECK(s.Rp.real() == doctest::Approx(std::tanh(t)));

  // M (1, R) = (T, 0) and M (0, T') = (R', 1).
  const cplx a(1.3, 0.4);
  const cplx b = std::polar(std::sqrt(std::norm(a) - 1.0), 0.9);
  s = scattering_coefficients(matrix(a, b));
  CHECK(std::abs(a + b * s.R - s.T) < 1e-15);
  CHECK(std::abs(std::conj(b) + std::conj(a) * s.R) < 1e-15);
  CHECK(std::abs(b * s.Tp - s.Rp) < 1e-15);
  CHECK(std::abs(std::conj(a) * s.Tp - 1.0) < 1e-15);

  try {
    scattering_coefficients(matrix(2e10, 2e10, 1e-10));
    FAIL("expected DegenerateTransmission");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateTransmission);
  }
}

TEST_CASE("S-matrix map values") {
  const TransferMatrix m = transfer_matrix(power4());
  const ScatteringCoefficients s = scattering_coefficients(m);
  const SMatrixMap map = blaschke_params(m);
  CHECK_FALSE(map.degenerate);
  CHECK(std::abs(s_matrix(m, 0.0) - s.Rp) < 1e-15);
  CHECK(std::abs(s_matrix(m, std::conj(s.R))) < 1e-15);
  CHECK(std::abs(s_matrix(m, Omega::infinity()) - m.a / std::conj(m.b)) < 1e-15);
  for (int j = 0; j < 16; ++j) {
    const cplx w = std::polar(1.0, 0.4 * j);
    CHECK(std::abs(std::abs(s_matrix(m, w)) - 1.0) < 1e-10);
  }
  CHECK(std::abs(map.zero->value() - std::conj(s.R)) < 1e-15);
  CHECK(std::abs(map.pole->value() - 1.0 / s.R) < 1e-12);
  CHECK(std::abs(map.zero->value()) < 1.0);
  CHECK(std::abs(map.pole->value()) > 1.0);
  CHECK(std::abs(std::abs(map.delta) - 1.0) < 1e-15);
  CHECK(std::abs(map.delta + s.T / std::conj(s.T)) < 1e-12);
  CHECK(std::abs(map.delta - s.Rp / std::conj(s.R)) < 1e-12);

  try {
    s_matrix(m, map.pole->value());
    FAIL("expected PoleProximity");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::PoleProximity);
  }

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> box(-3.0, 3.0);
  for (int i = 0; i < 100; ++i) {
    const cplx w(box(rng), box(rng));
    if (std::abs(w - map.pole->value()) < 1e-2) continue;
    const cplx direct = s_matrix(m, w);
    const cplx blaschke = map.delta * (w - std::conj(s.R)) / (s.R * w - 1.0);
    CHECK(std::abs(direct - blaschke) < 1e-12 * std::max(1.0, std::abs(direct)));
    CHECK(std::abs(map.evaluate(w) - direct) == 0.0);
    // Sign relation between |S| and |Omega|.
    CHECK((std::norm(direct) > 1.0) == (std::norm(w) > 1.0));
    const Omega back = s_matrix_inverse(m, direct);
    CHECK(std::abs(back.value() - w) < 1e-10 * std::max(1.0, std::abs(w)));
  }
}

TEST_CASE("identity transfer matrix") {
  const TransferMatrix m = matrix(1.0, 0.0);
  const SMatrixMap map = blaschke_params(m);
  CHECK_FALSE(map.degenerate);
  CHECK(map.zero->value() == cplx(0.0));
  CHECK(map.pole->is_infinite());
  CHECK(map.delta == cplx(-1.0));
  CHECK(s_matrix(m, cplx(0.3, 0.2)) == cplx(0.3, 0.2));
  CHECK_THROWS_AS(s_matrix(m, Omega::infinity()), Error);
  CHECK(s_matrix_inverse(matrix(1.0, 1.0), 1.0).is_infinite());
}

TEST_CASE("full S-matrix phase") {
  const TransferMatrix m = transfer_matrix(isp());
  const cplx w(0.2, -0.3);
  for (auto [lnu, factor] : {std::pair{0.0, cplx(1.0)}, {1.0, cplx(-1.0)}, {0.5, cplx(0.0, 1.0)}}) {
    ProblemConfig c;
    c.l_plus_nu = lnu;
    CHECK(std::abs(full_s_matrix(validate(c), m, w) - factor * s_matrix(m, w)) < 1e-15);
  }
}

TEST_CASE("mu only rotates the conformal data") {
  const double theta = 1.0;
  const TransferMatrix m1 = transfer_matrix(isp(theta, 1.0));
  const TransferMatrix m2 = transfer_matrix(isp(theta, 2.0));
  const ScatteringCoefficients s1 = scattering_coefficients(m1), s2 = scattering_coefficients(m2);
  const double shift = 2.0 * theta * std::log(2.0);
  CHECK(std::abs(s2.R - s1.R * std::polar(1.0, shift)) < 1e-10);
  CHECK(std::abs(std::abs(s2.R) - std::abs(s1.R)) < 1e-10);
  CHECK(std::abs(std::abs(s2.T) - std::abs(s1.T)) < 1e-10);
  for (const cplx w : {cplx(0.0), cplx(0.4, 0.1), cplx(-0.9, 0.2)}) {
    CHECK(std::abs(s_matrix(m2, w * std::polar(1.0, -shift)) - s_matrix(m1, w)) < 1e-10);
  }
}

TEST_CASE("opaque barrier gives the degenerate branch") {
  const TransferMatrix m = transfer_matrix(barrier());
  CHECK(std::abs(m.a) > 1e10);
  const SMatrixMap map = blaschke_params(m);
  CHECK(map.degenerate);
  CHECK_FALSE(map.zero.has_value());
  CHECK_FALSE(map.pole.has_value());
  CHECK(std::abs(std::abs(map.constant) - 1.0) < 1e-15);
  CHECK(map.evaluate(cplx(0.3, 0.1)) == map.constant);
  CHECK(std::abs(s_matrix(m, 0.5) - map.constant) < 1e-6);
  CHECK_THROWS_AS(scattering_coefficients(m), Error);
}
