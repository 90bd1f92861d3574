#pragma once

// Transfer matrix between the singularity basis and the asymptotic basis, the
// scattering amplitudes it encodes, and the reduced S-matrix as a Mobius map of
// the singularity parameter Omega = C+/C-.
//
// With u+ = a u1 + b* u2 and u- = b u1 + a* u2,
//   R = -b*/a*,  T = T' = 1/a*,  R' = b/a*,
//   S^(Omega) = (a Omega + b) / (b* Omega + a*) = Delta (Omega - R*) / (R Omega - 1),
//   Delta = -a/a* = -T/T* = R'/R*.

#include <cstddef>
#include <optional>

#include "sqm/model.hpp"
#include "sqm/state.hpp"

namespace sqm {

/// A point of the Riemann sphere: finite complex value or the infinity token.
class Omega {
 public:
  Omega() = default;
  Omega(cplx value) : value_(value) {}  // NOLINT: implicit by design
  Omega(double value) : value_(value) {}  // NOLINT

  static Omega infinity() {
    Omega w;
    w.infinite_ = true;
    return w;
  }

  bool is_infinite() const noexcept { return infinite_; }
  /// Finite value; meaningless for the infinity token.
  cplx value() const noexcept { return value_; }

 private:
  cplx value_{};
  bool infinite_ = false;
};

struct TransferResiduals {
  double su11_defect = 0.0;       // |a|^2 - |b|^2 - 1
  double structure_defect = 0.0;  // deviation of the raw columns from [[a, b], [b*, a*]]
  double stabilization_delta = 0.0;  // max(|da|, |db|) between the last two r_max values
  double wronskian_drift = 0.0;
  double origin_truncation = 0.0;
  double asymptotic_truncation = 0.0;
  double r_min = 0.0;  // radii actually used
  double r_max = 0.0;
  int doublings = 0;
  std::size_t steps = 0;
};

struct TransferMatrix {
  cplx a{1.0, 0.0};
  cplx b{};
  double tol = 1e-10;
  TransferResiduals residuals;
};

struct TransferOptions {
  /// Adjust r_min/r_max until the basis truncation estimates are below tol and
  /// double r_max until (a, b) settle. When false the configured radii are used
  /// as given and nothing is enforced; one doubling is still measured.
  bool stabilize = true;
  int projection_radii = 4;
  int max_doublings = 10;
  int max_halvings = 60;
};

TransferMatrix transfer_matrix(const ValidatedConfig& config, const TransferOptions& options = {});

struct ScatteringCoefficients {
  cplx R{};
  cplx T{1.0, 0.0};
  cplx Rp{};
  cplx Tp{1.0, 0.0};
};

/// R, T, R', T' from M. Throws DegenerateTransmission when |a| > 1/tol.
ScatteringCoefficients scattering_coefficients(const TransferMatrix& m);

/// Same formulas without the transmission guard.
ScatteringCoefficients scattering_coefficients_unchecked(const TransferMatrix& m);

/// S^(Omega). Throws PoleProximity within tol |Omega_2| of the pole.
cplx s_matrix(const TransferMatrix& m, const Omega& omega);

/// Omega with S^(Omega) = w.
Omega s_matrix_inverse(const TransferMatrix& m, cplx w);

struct SMatrixMap {
  cplx delta{-1.0, 0.0};
  std::optional<Omega> zero;  // withheld when degenerate
  std::optional<Omega> pole;
  cplx a{1.0, 0.0};
  cplx b{};
  double tol = 1e-10;
  bool degenerate = false;
  /// Unimodular constant reported for the degenerate branch.
  cplx constant{};

  cplx evaluate(const Omega& omega) const;
};

SMatrixMap blaschke_params(const TransferMatrix& m);

/// e^(i pi (l+nu)) S^(Omega).
cplx full_s_matrix(const ValidatedConfig& config, const TransferMatrix& m, const Omega& omega);

}  // namespace sqm
