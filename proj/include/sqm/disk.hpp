#pragma once

// Unit-disk analytics: finite Blaschke products, Mobius fits to sampled maps,
// and Cauchy reconstruction of interior values from boundary samples.

#include <functional>
#include <iosfwd>
#include <vector>

#include "sqm/state.hpp"

namespace sqm {

/// F(z) = zeta * prod_j (z - z_j) / (1 - conj(z_j) z).
struct BlaschkeProduct {
  cplx zeta{1.0, 0.0};
  std::vector<cplx> zeros;

  std::size_t degree() const noexcept { return zeros.size(); }
};

/// Throws PoleProximity near 1/conj(z_j), BadParameter for |zeta| != 1 or |z_j| >= 1.
cplx blaschke_eval(const BlaschkeProduct& product, cplx z);

/// Values on the uniform grid chi_j = 2 pi j / N.
struct UnitaryFamilySample {
  std::vector<double> chis;
  std::vector<cplx> values;
};

UnitaryFamilySample sample_unit_circle(const std::function<cplx(cplx)>& map, std::size_t nodes);

struct MobiusFit {
  cplx a{1.0, 0.0};
  cplx b{};
  double residual = 0.0;  // max |fit(Omega_i) - S_i|

  cplx operator()(cplx omega) const { return (a * omega + b) / (std::conj(b) * omega + std::conj(a)); }
};

/// Least-squares (a, b) with S_i (b* Omega_i + a*) = a Omega_i + b, normalized to
/// |a|^2 - |b|^2 = 1 and Re a >= 0 (the remaining freedom is a real sign).
/// Throws RankDeficient when the samples determine no unique map, e.g. when S is
/// constant; the message carries that constant.
MobiusFit fit_mobius(const std::vector<cplx>& omegas, const std::vector<cplx>& values);
MobiusFit fit_mobius(const UnitaryFamilySample& samples);

enum class CauchyRule {
  /// Trapezoidal rule multiplied by 1 - (Omega e^(-i chi_0))^N, which removes the
  /// geometric aliasing of the kernel and is exact for polynomials of degree < N.
  interpolatory,
  /// Plain trapezoidal rule; aliasing error of order |Omega|^N.
  trapezoid,
};

struct CauchyResult {
  cplx value{};
  /// |value(N) - value(N/2)| from every other node; NaN when N is odd.
  double error_estimate = 0.0;
  std::size_t nodes = 0;
};

/// S(Omega) = int dchi/2pi S(e^(i chi)) / (1 - Omega e^(-i chi)) for |Omega| < 1.
/// Throws OutsideDisk or NonUniformGrid.
CauchyResult cauchy_reconstruct(const UnitaryFamilySample& samples, cplx omega,
                                CauchyRule rule = CauchyRule::interpolatory);

/// Uniform mean of the boundary values, i.e. S(0). Throws NonUniformGrid.
cplx absorption_average(const UnitaryFamilySample& samples);

/// CSV with header "chi,re_s,im_s".
void write_samples_csv(std::ostream& out, const UnitaryFamilySample& samples);
UnitaryFamilySample read_samples_csv(std::istream& in);

}  // namespace sqm
