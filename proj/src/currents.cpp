#include "sqm/currents.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sqm/errors.hpp"

namespace sqm {

cplx wronskian(const StateVector& f, const StateVector& g) {
  if (std::abs(f.r - g.r) > 1e-12 * std::max(1.0, std::abs(f.r))) {
    std::ostringstream msg;
    msg << "states at r = " << f.r << " and r = " << g.r;
    throw Error(ErrorCode::RadiusMismatch, msg.str());
  }
  return f.u * g.du - f.du * g.u;
}

cplx current(const StateVector& u, const StateVector& v) {
  return wronskian(u.conj(), v) / cplx(0.0, 1.0);
}

double current(const StateVector& u) { return current(u, u).real(); }

double coefficient_balance(cplx c1, cplx c2, cplx c_plus, cplx c_minus, double tol) {
  const double asymptotic = std::norm(c1) - std::norm(c2);
  const double singular = std::norm(c_plus) - std::norm(c_minus);
  const double scale = std::max({1.0, std::norm(c1), std::norm(c2), std::norm(c_plus),
                                 std::norm(c_minus)});
  if (std::abs(asymptotic - singular) > tol * scale) {
    std::ostringstream msg;
    msg << "|C1|^2-|C2|^2 = " << asymptotic << " but |C+|^2-|C-|^2 = " << singular;
    throw Error(ErrorCode::BalanceViolation, msg.str());
  }
  return 0.5 * (asymptotic + singular);
}

}  // namespace sqm
