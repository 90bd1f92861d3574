#pragma once

#include <complex>

namespace sqm {

using cplx = std::complex<double>;

/// A point (r, u, du/dr) on a solution of u'' + J u = 0.
struct StateVector {
  double r = 1.0;
  cplx u{};
  cplx du{};

  StateVector conj() const { return {r, std::conj(u), std::conj(du)}; }
};

inline StateVector operator*(cplx c, const StateVector& s) { return {s.r, c * s.u, c * s.du}; }

/// Pointwise sum; radii must agree (checked by the currents module where it matters).
inline StateVector operator+(const StateVector& a, const StateVector& b) {
  return {a.r, a.u + b.u, a.du + b.du};
}

}  // namespace sqm
