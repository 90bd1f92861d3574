#pragma once

// Wronskian and conserved-current algebra.
//
// W[f, g] = f g' - f' g, and J[u, v] = W[u*, v] / i. J[u] = J[u, u] is real and
// is an indefinite (SU(1,1)) quadratic form: J[u*] = -J[u].

#include "sqm/state.hpp"

namespace sqm {

/// Throws RadiusMismatch unless f.r and g.r agree to rounding.
cplx wronskian(const StateVector& f, const StateVector& g);

/// J[u, v] = W[u*, v] / i. Conjugate-linear in u, linear in v.
cplx current(const StateVector& u, const StateVector& v);

/// J[u], returned as a real number (the imaginary part is rounding noise).
double current(const StateVector& u);

/// Half the current of a solution written in both bases:
/// |C1|^2 - |C2|^2 = |C+|^2 - |C-|^2. Throws BalanceViolation if the two sides
/// differ by more than tol relative to the larger squared coefficient.
double coefficient_balance(cplx c1, cplx c2, cplx c_plus, cplx c_minus, double tol);

}  // namespace sqm
