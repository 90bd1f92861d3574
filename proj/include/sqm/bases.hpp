#pragma once

// The two fundamental bases of the solution space:
//
//   singularity basis {u+, u-}, outgoing/ingoing near r = 0:
//     p > 2:  u+- ~ r^(p/4) lambda^(-1/4) exp[-+ 2i sqrt(lambda) r^-(p/2-1) / (p-2)]
//     p = 2:  u+- ~ sqrt(r/Theta) (mu r)^(+-i Theta)
//
//   asymptotic basis {u1, u2}, outgoing/ingoing as r -> infinity:
//     u1,2 ~ k^(-1/2) e^(-+i pi/4) e^(+-ikr)
//
// Both pairs are conjugate (u- = u+*, u2 = u1*) and carry currents J = +-2.
//
// The corrected forms are exact solutions of the part of J that has a closed
// form near each end (Frobenius series for the conformal core, Hankel
// asymptotic series for lambda r^-p and for the 1/r^2 tail at infinity),
// dressed with a physical-optics factor for whatever is left over.

#include "sqm/model.hpp"
#include "sqm/state.hpp"

namespace sqm {

enum class BasisTag { plus, minus, one, two };

struct BasisValue {
  cplx u{};
  cplx du{};
  BasisTag which = BasisTag::plus;
  double r = 1.0;

  StateVector state() const { return {r, u, du}; }
};

struct BasisPair {
  BasisValue first;   // u+ or u1
  BasisValue second;  // u- or u2
  double truncation_error = 0.0;
};

enum class BasisOrder { leading, corrected };

/// u1, u2 and derivatives at r. Throws AsymptoticRegionTooClose when the
/// truncation estimate exceeds tol and `enforce` is set.
BasisPair eval_asymptotic(const ValidatedConfig& config, double r,
                          BasisOrder order = BasisOrder::corrected, bool enforce = true);

/// u+, u- and derivatives at r. Throws SingularRegionTooFar when the
/// truncation estimate exceeds tol and `enforce` is set.
BasisPair eval_singularity(const ValidatedConfig& config, double r,
                           BasisOrder order = BasisOrder::corrected, bool enforce = true);

double asymptotic_truncation(const ValidatedConfig& config, double r,
                             BasisOrder order = BasisOrder::corrected);
double singular_truncation(const ValidatedConfig& config, double r,
                           BasisOrder order = BasisOrder::corrected);

struct WkbReference {
  double amplitude = 0.0;  // J_w(r)^(-1/4)
  double phase = 0.0;      // integral of sqrt(J_w) from r_ref to r
};

/// Physical-optics amplitude and phase, J_w = J - langer_shift / r^2.
/// Throws TurningPoint if J_w is not positive on the interval.
WkbReference wkb_reference(const ValidatedConfig& config, double r, double r_ref);

namespace detail {

struct HankelSeries {
  cplx value{1.0, 0.0};  // sum_k (s i)^k a_k(nu) / x^k
  cplx derivative{};     // d/dx of the above
  double tail = 0.0;     // magnitude of the first omitted term
};

/// Large-argument series of the Hankel functions (s = +1 for H1, -1 for H2),
/// summed to its smallest term.
HankelSeries hankel_series(double four_nu_squared, double x, int s);

}  // namespace detail

}  // namespace sqm
