#pragma once

// Closed-form scattering data for the pure conformal problem
// J = k^2 + (Theta^2 + 1/4) / r^2, whose solutions are sqrt(r) Z_{i Theta}(k r).

#include "sqm/state.hpp"

namespace sqm {

/// Gamma(z) for complex z, Lanczos approximation with reflection for Re z < 1/2.
/// Throws PoleOfGamma at the non-positive integers.
cplx complex_gamma(cplx z);

struct IspExactResult {
  cplx R{};
  cplx T{};
  cplx Rp{};
  cplx Tp{};
  cplx a{};  // transfer-matrix entries in the same basis conventions
  cplx b{};
  cplx gamma_ratio{};  // Gamma(1 + i Theta) / Gamma(1 - i Theta)
};

/// |R| = e^(-pi Theta), |T|^2 = 1 - e^(-2 pi Theta),
/// R = -e^(-pi Theta) (2 mu / k)^(2 i Theta) Gamma(1 + i Theta) / Gamma(1 - i Theta).
/// Throws BadParameter unless all arguments are positive.
IspExactResult isp_exact(double theta, double k, double mu);

}  // namespace sqm
