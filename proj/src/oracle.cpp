#include "sqm/oracle.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "sqm/errors.hpp"

namespace sqm {

namespace {

// Lanczos coefficients for g = 7, n = 9.
constexpr double kG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

}  // namespace

cplx complex_gamma(cplx z) {
  const double pi = std::numbers::pi;
  if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real())) {
    std::ostringstream msg;
    msg << "Gamma has a pole at " << z.real();
    throw Error(ErrorCode::PoleOfGamma, msg.str());
  }
  if (z.real() < 0.5) {
    return pi / (std::sin(pi * z) * complex_gamma(1.0 - z));
  }
  z -= 1.0;
  cplx x = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) x += kLanczos[i] / (z + static_cast<double>(i));
  const cplx t = z + kG + 0.5;
  return std::sqrt(2.0 * pi) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}

IspExactResult isp_exact(double theta, double k, double mu) {
  if (!(theta > 0.0) || !(k > 0.0) || !(mu > 0.0)) {
    throw Error(ErrorCode::BadParameter, "theta, k and mu must be positive");
  }
  const double pi = std::numbers::pi;
  const cplx g_plus = complex_gamma(cplx(1.0, theta));
  // G = (2 mu / k)^(i Theta) Gamma(1 + i Theta) / sqrt(2 pi Theta)
  const cplx G = std::polar(1.0, theta * std::log(2.0 * mu / k)) * g_plus /
                 std::sqrt(2.0 * pi * theta);
  IspExactResult out;
  out.a = G * std::exp(0.5 * pi * theta);
  out.b = std::conj(G) * std::exp(-0.5 * pi * theta);
  out.gamma_ratio = g_plus / std::conj(g_plus);
  out.R = -std::conj(out.b) / std::conj(out.a);
  out.T = 1.0 / std::conj(out.a);
  out.Rp = out.b / std::conj(out.a);
  out.Tp = out.T;
  return out;
}

}  // namespace sqm
