#pragma once

// Problem configuration and the normal invariant J(r) of u'' + J(r) u = 0.

#include <optional>
#include <variant>
#include <vector>

namespace sqm {

/// h * exp(-((r - center) / width)^2)
struct GaussianTerm {
  double height = 0.0;
  double center = 0.0;
  double width = 1.0;
};

/// (h/2) * [tanh((r - r_left)/edge) - tanh((r - r_right)/edge)]: a plateau of
/// height h between r_left and r_right with smooth edges.
struct BarrierTerm {
  double height = 0.0;
  double r_left = 0.0;
  double r_right = 0.0;
  double edge = 1.0;
};

/// h * exp(-r / range)
struct ExponentialTerm {
  double height = 0.0;
  double range = 1.0;
};

using ExtraTerm = std::variant<GaussianTerm, BarrierTerm, ExponentialTerm>;

/// Smooth short-range addition W(r) to the potential. Every built-in term
/// decays exponentially at infinity and stays bounded at the origin.
class ExtraPotential {
 public:
  ExtraPotential() = default;
  explicit ExtraPotential(std::vector<ExtraTerm> terms) : terms_(std::move(terms)) {}

  double value(double r) const;
  double derivative(double r) const;
  /// Upper bound on |W| over [lo, hi].
  double sup_abs(double lo, double hi) const;

  bool empty() const noexcept { return terms_.empty(); }
  const std::vector<ExtraTerm>& terms() const noexcept { return terms_; }

 private:
  std::vector<ExtraTerm> terms_;
};

struct ProblemConfig {
  double p = 2.0;
  double lambda = 1.25;
  double k = 1.0;
  double l_plus_nu = 0.5;
  double mu = 1.0;
  ExtraPotential extra_potential;
  double r_min = 1e-3;
  double r_max = 50.0;
  double tol = 1e-10;
};

/// J(r) = k^2 + lambda r^-p - W(r) - centrifugal / r^2.
///
/// For p = 2 the centrifugal term is folded into lambda, so `centrifugal` is 0
/// and lambda = Theta^2 + 1/4.
struct NormalInvariant {
  double p = 2.0;
  double lambda = 0.0;
  double k = 1.0;
  double centrifugal = 0.0;
  ExtraPotential extra;

  double operator()(double r) const;
  double derivative(double r) const;
};

/// A configuration that passed validation, with derived quantities.
class ValidatedConfig {
 public:
  const ProblemConfig& config() const noexcept { return config_; }
  const NormalInvariant& invariant() const noexcept { return invariant_; }

  bool conformal() const noexcept { return conformal_; }
  /// Theta = sqrt(lambda - 1/4); only meaningful when conformal().
  double theta() const noexcept { return theta_; }
  /// n = p - 2; zero when conformal().
  double n() const noexcept { return config_.p - 2.0; }
  double tol() const noexcept { return config_.tol; }
  double k() const noexcept { return config_.k; }

  /// Coefficient gamma of the -gamma/r^2 tail of J at infinity.
  double tail_coefficient() const noexcept;
  /// Langer shift subtracted from J before WKB quantities are formed (1/4 for p = 2).
  double langer_shift() const noexcept { return conformal_ ? 0.25 : 0.0; }
  /// J(r) - langer_shift / r^2.
  double wkb_invariant(double r) const;

  ValidatedConfig with_k(double k) const;
  ValidatedConfig with_mu(double mu) const;

 private:
  friend ValidatedConfig validate(const ProblemConfig& config);

  ProblemConfig config_;
  NormalInvariant invariant_;
  bool conformal_ = true;
  double theta_ = 0.0;
};

/// Checks every parameter invariant; throws sqm::Error on rejection.
ValidatedConfig validate(const ProblemConfig& config);

/// J(r) for a validated configuration. Throws DomainError for r <= 0.
double normal_invariant(const ValidatedConfig& config, double r);

}  // namespace sqm
