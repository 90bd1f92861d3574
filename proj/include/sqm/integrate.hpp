#pragma once

// Outward/inward propagation of complex solutions of u'' + J(r) u = 0 with the
// Dormand-Prince 8(5,3) embedded pair.

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <vector>

#include "sqm/model.hpp"
#include "sqm/state.hpp"

namespace sqm {

struct StepStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  double h_min = 0.0;
  double h_max = 0.0;
};

struct Trajectory {
  std::vector<StateVector> samples;
  std::vector<StateVector> companion_samples;  // empty unless a companion was supplied
  double wronskian_drift = 0.0;
  StepStats step_stats;
};

struct IntegratorOptions {
  /// Local error tolerance per step; 0 means "use the configuration's tol".
  double tol = 0.0;
  /// Largest step as a fraction of the local wavelength 2 pi / sqrt|J|.
  double wavelength_fraction = 0.25;
  std::size_t max_steps = 50'000'000;
  bool record_samples = true;
  /// Throw DriftExceeded when the companion Wronskian drifts past 10 tol.
  bool check_drift = true;
};

/// Stateful stepper; `propagate` is the one-shot wrapper.
class Integrator {
 public:
  Integrator(const ValidatedConfig& config, const StateVector& init,
             std::optional<StateVector> companion = std::nullopt, IntegratorOptions options = {});

  /// Integrates to r_target (either direction) and lands exactly on it.
  void advance_to(double r_target);

  StateVector state() const;
  std::optional<StateVector> companion() const;
  /// max over accepted steps of |W(r) - W(r0)| / max(|W(r0)|, |u||v'| + |u'||v|).
  double wronskian_drift() const noexcept { return drift_; }
  const StepStats& stats() const noexcept { return stats_; }

  Trajectory take_trajectory();

 private:
  using Vec = std::array<cplx, 4>;

  void derivative(double r, const Vec& y, Vec& dy) const;
  double max_step(double r) const;
  void record();
  void update_drift();

  NormalInvariant invariant_;
  IntegratorOptions options_;
  double tol_;
  double r_;
  Vec y_{};
  int dim_;  // 2 or 4 complex components
  double h_ = 0.0;
  double drift_ = 0.0;
  cplx w0_{};
  StepStats stats_;
  Trajectory trajectory_;
};

Trajectory propagate(const ValidatedConfig& config, const StateVector& init, double r_target,
                     std::optional<StateVector> companion = std::nullopt,
                     IntegratorOptions options = {});

/// Debug dump with header "r,re_u,im_u,re_du,im_du".
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);

}  // namespace sqm
