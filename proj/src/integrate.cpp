#include "sqm/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include "sqm/errors.hpp"

namespace sqm {

namespace {

// Dormand-Prince 8(5,3) coefficients (Hairer, Norsett & Wanner, DOP853).
constexpr double c2 = 0.526001519587677318785587544488e-01;
constexpr double c3 = 0.789002279381515978178381316732e-01;
constexpr double c4 = 0.118350341907227396726757197510e+00;
constexpr double c5 = 0.281649658092772603273242802490e+00;
constexpr double c6 = 0.333333333333333333333333333333e+00;
constexpr double c7 = 0.25e+00;
constexpr double c8 = 0.307692307692307692307692307692e+00;
constexpr double c9 = 0.651282051282051282051282051282e+00;
constexpr double c10 = 0.6e+00;
constexpr double c11 = 0.857142857142857142857142857142e+00;

constexpr double a21 = 5.26001519587677318785587544488e-2;
constexpr double a31 = 1.97250569845378994544595329183e-2;
constexpr double a32 = 5.91751709536136983633785987549e-2;
constexpr double a41 = 2.95875854768068491816892993775e-2;
constexpr double a43 = 8.87627564304205475450678981324e-2;
constexpr double a51 = 2.41365134159266685502369798665e-1;
constexpr double a53 = -8.84549479328286085344864962717e-1;
constexpr double a54 = 9.24834003261792003115737966543e-1;
constexpr double a61 = 3.7037037037037037037037037037e-2;
constexpr double a64 = 1.70828608729473871279604482173e-1;
constexpr double a65 = 1.25467687566822425016691814123e-1;
constexpr double a71 = 3.7109375e-2;
constexpr double a74 = 1.70252211019544039314978060272e-1;
constexpr double a75 = 6.02165389804559606850219397283e-2;
constexpr double a76 = -1.7578125e-2;
constexpr double a81 = 3.70920001185047927108779319836e-2;
constexpr double a84 = 1.70383925712239993810214054705e-1;
constexpr double a85 = 1.07262030446373284651809199168e-1;
constexpr double a86 = -1.53194377486244017527936158236e-2;
constexpr double a87 = 8.27378916381402288758473766002e-3;
constexpr double a91 = 6.24110958716075717114429577812e-1;
constexpr double a94 = -3.36089262944694129406857109825e0;
constexpr double a95 = -8.68219346841726006818189891453e-1;
constexpr double a96 = 2.75920996994467083049415600797e1;
constexpr double a97 = 2.01540675504778934086186788979e1;
constexpr double a98 = -4.34898841810699588477366255144e1;
constexpr double a101 = 4.77662536438264365890433908527e-1;
constexpr double a104 = -2.48811461997166764192642586468e0;
constexpr double a105 = -5.90290826836842996371446475743e-1;
constexpr double a106 = 2.12300514481811942347288949897e1;
constexpr double a107 = 1.52792336328824235832596922938e1;
constexpr double a108 = -3.32882109689848629194453265587e1;
constexpr double a109 = -2.03312017085086261358222928593e-2;
constexpr double a111 = -9.3714243008598732571704021658e-1;
constexpr double a114 = 5.18637242884406370830023853209e0;
constexpr double a115 = 1.09143734899672957818500254654e0;
constexpr double a116 = -8.14978701074692612513997267357e0;
constexpr double a117 = -1.85200656599969598641566180701e1;
constexpr double a118 = 2.27394870993505042818970056734e1;
constexpr double a119 = 2.49360555267965238987089396762e0;
constexpr double a1110 = -3.0467644718982195003823669022e0;
constexpr double a121 = 2.27331014751653820792359768449e0;
constexpr double a124 = -1.05344954667372501984066689879e1;
constexpr double a125 = -2.00087205822486249909675718444e0;
constexpr double a126 = -1.79589318631187989172765950534e1;
constexpr double a127 = 2.79488845294199600508499808837e1;
constexpr double a128 = -2.85899827713502369474065508674e0;
constexpr double a129 = -8.87285693353062954433549289258e0;
constexpr double a1210 = 1.23605671757943030647266201528e1;
constexpr double a1211 = 6.43392746015763530355970484046e-1;

constexpr double b1 = 5.42937341165687622380535766363e-2;
constexpr double b6 = 4.45031289275240888144113950566e0;
constexpr double b7 = 1.89151789931450038304281599044e0;
constexpr double b8 = -5.8012039600105847814672114227e0;
constexpr double b9 = 3.1116436695781989440891606237e-1;
constexpr double b10 = -1.52160949662516078556178806805e-1;
constexpr double b11 = 2.01365400804030348374776537501e-1;
constexpr double b12 = 4.47106157277725905176885569043e-2;

constexpr double bhh1 = 0.244094488188976377952755905512e+00;
constexpr double bhh2 = 0.733846688281611857341361741547e+00;
constexpr double bhh3 = 0.220588235294117647058823529412e-01;

constexpr double er1 = 0.1312004499419488073250102996e-01;
constexpr double er6 = -0.1225156446376204440720569753e+01;
constexpr double er7 = -0.4957589496572501915214079952e+00;
constexpr double er8 = 0.1664377182454986536961530415e+01;
constexpr double er9 = -0.3503288487499736816886487290e+00;
constexpr double er10 = 0.3341791187130174790297318841e+00;
constexpr double er11 = 0.8192320648511571246570742613e-01;
constexpr double er12 = -0.2235530786388629525884427845e-01;

constexpr double kSafety = 0.9;
constexpr double kMinScale = 0.333;
constexpr double kMaxScale = 6.0;

bool finite(const StateVector& s) {
  return std::isfinite(s.u.real()) && std::isfinite(s.u.imag()) && std::isfinite(s.du.real()) &&
         std::isfinite(s.du.imag());
}

}  // namespace

Integrator::Integrator(const ValidatedConfig& config, const StateVector& init,
                       std::optional<StateVector> companion, IntegratorOptions options)
    : invariant_(config.invariant()),
      options_(options),
      tol_(options.tol > 0.0 ? options.tol : config.tol()),
      r_(init.r),
      dim_(companion ? 4 : 2) {
  if (!(init.r > 0.0) || !finite(init)) {
    throw Error(ErrorCode::DomainError, "initial state must be finite with r > 0");
  }
  y_[0] = init.u;
  y_[1] = init.du;
  if (companion) {
    if (std::abs(companion->r - init.r) > 1e-12 * init.r || !finite(*companion)) {
      throw Error(ErrorCode::RadiusMismatch, "companion must start at the same radius");
    }
    y_[2] = companion->u;
    y_[3] = companion->du;
    w0_ = y_[0] * y_[3] - y_[1] * y_[2];
  }
  record();
}

void Integrator::derivative(double r, const Vec& y, Vec& dy) const {
  const double j = invariant_(r);
  dy[0] = y[1];
  dy[1] = -j * y[0];
  if (dim_ == 4) {
    dy[2] = y[3];
    dy[3] = -j * y[2];
  }
}

double Integrator::max_step(double r) const {
  const double omega = std::sqrt(std::abs(invariant_(r)));
  double h = options_.wavelength_fraction * 2.0 * std::numbers::pi / std::max(omega, 1e-300);
  // J varies on the scale r near the origin.
  return std::min(h, 0.5 * r);
}

void Integrator::record() {
  if (!options_.record_samples) return;
  trajectory_.samples.push_back({r_, y_[0], y_[1]});
  if (dim_ == 4) trajectory_.companion_samples.push_back({r_, y_[2], y_[3]});
}

void Integrator::update_drift() {
  if (dim_ != 4) return;
  const cplx w = y_[0] * y_[3] - y_[1] * y_[2];
  const double scale =
      std::max(std::abs(w0_), std::abs(y_[0]) * std::abs(y_[3]) + std::abs(y_[1]) * std::abs(y_[2]));
  drift_ = std::max(drift_, std::abs(w - w0_) / scale);
  if (options_.check_drift && drift_ > 10.0 * tol_) {
    std::ostringstream msg;
    msg << "Wronskian drift " << drift_ << " exceeds " << 10.0 * tol_ << " at r = " << r_;
    throw Error(ErrorCode::DriftExceeded, msg.str());
  }
}

void Integrator::advance_to(double r_target) {
  if (!(r_target > 0.0) || !std::isfinite(r_target)) {
    throw Error(ErrorCode::DomainError, "target radius must be > 0");
  }
  if (r_target == r_) return;
  const double dir = r_target > r_ ? 1.0 : -1.0;
  const int n = dim_;

  if (h_ == 0.0) {
    const double omega = std::sqrt(std::abs(invariant_(r_)));
    h_ = std::min(0.01 / std::max(omega, 1e-300), 0.01 * r_);
  }

  Vec k1, k2, k3, k4, k5, k6, k7, k8, k9, k10, k11, k12, yt, y_new, slope;
  bool last_rejected = false;
  derivative(r_, y_, k1);

  while (dir * (r_target - r_) > 0.0) {
    if (stats_.accepted + stats_.rejected >= options_.max_steps) {
      throw Error(ErrorCode::StepUnderflow, "step budget exhausted");
    }
    double h = std::min({h_, max_step(r_), std::abs(r_target - r_)});
    // Never step across the origin.
    if (dir < 0.0) h = std::min(h, 0.5 * r_);
    if (h < 16.0 * std::numeric_limits<double>::epsilon() * r_) {
      std::ostringstream msg;
      msg << "step " << h << " underflows at r = " << r_;
      throw Error(ErrorCode::StepUnderflow, msg.str());
    }
    const bool final_step = h >= std::abs(r_target - r_);
    const double hs = dir * h;

    auto stage = [&](Vec& out, double c, auto&& combine) {
      for (int i = 0; i < n; ++i) yt[i] = y_[i] + hs * combine(i);
      derivative(r_ + c * hs, yt, out);
    };
    stage(k2, c2, [&](int i) { return a21 * k1[i]; });
    stage(k3, c3, [&](int i) { return a31 * k1[i] + a32 * k2[i]; });
    stage(k4, c4, [&](int i) { return a41 * k1[i] + a43 * k3[i]; });
    stage(k5, c5, [&](int i) { return a51 * k1[i] + a53 * k3[i] + a54 * k4[i]; });
    stage(k6, c6, [&](int i) { return a61 * k1[i] + a64 * k4[i] + a65 * k5[i]; });
    stage(k7, c7, [&](int i) { return a71 * k1[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]; });
    stage(k8, c8, [&](int i) {
      return a81 * k1[i] + a84 * k4[i] + a85 * k5[i] + a86 * k6[i] + a87 * k7[i];
    });
    stage(k9, c9, [&](int i) {
      return a91 * k1[i] + a94 * k4[i] + a95 * k5[i] + a96 * k6[i] + a97 * k7[i] + a98 * k8[i];
    });
    stage(k10, c10, [&](int i) {
      return a101 * k1[i] + a104 * k4[i] + a105 * k5[i] + a106 * k6[i] + a107 * k7[i] +
             a108 * k8[i] + a109 * k9[i];
    });
    stage(k11, c11, [&](int i) {
      return a111 * k1[i] + a114 * k4[i] + a115 * k5[i] + a116 * k6[i] + a117 * k7[i] +
             a118 * k8[i] + a119 * k9[i] + a1110 * k10[i];
    });
    stage(k12, 1.0, [&](int i) {
      return a121 * k1[i] + a124 * k4[i] + a125 * k5[i] + a126 * k6[i] + a127 * k7[i] +
             a128 * k8[i] + a129 * k9[i] + a1210 * k10[i] + a1211 * k11[i];
    });
    for (int i = 0; i < n; ++i) {
      slope[i] = b1 * k1[i] + b6 * k6[i] + b7 * k7[i] + b8 * k8[i] + b9 * k9[i] + b10 * k10[i] +
                 b11 * k11[i] + b12 * k12[i];
      y_new[i] = y_[i] + hs * slope[i];
    }

    // Error norm weighted by the local frequency so that u and u' are
    // measured on the same footing.
    const double omega = std::max(std::sqrt(std::abs(invariant_(r_))), 1e-300);
    double err5 = 0.0;
    double err3 = 0.0;
    for (int i = 0; i < n; i += 2) {
      const double mag_u = std::max(std::abs(y_[i]), std::abs(y_new[i]));
      const double mag_du = std::max(std::abs(y_[i + 1]), std::abs(y_new[i + 1]));
      const double sc_u = tol_ * (mag_u + mag_du / omega) + 1e-300;
      const double sc_du = tol_ * (omega * mag_u + mag_du) + 1e-300;
      for (int j = 0; j < 2; ++j) {
        const int c = i + j;
        const double sc = j == 0 ? sc_u : sc_du;
        const cplx e3 = slope[c] - bhh1 * k1[c] - bhh2 * k9[c] - bhh3 * k12[c];
        const cplx e5 = er1 * k1[c] + er6 * k6[c] + er7 * k7[c] + er8 * k8[c] + er9 * k9[c] +
                        er10 * k10[c] + er11 * k11[c] + er12 * k12[c];
        err3 += std::norm(e3) / (sc * sc);
        err5 += std::norm(e5) / (sc * sc);
      }
    }
    double deno = err5 + 0.01 * err3;
    if (deno <= 0.0) deno = 1.0;
    const double err = h * err5 * std::sqrt(1.0 / (n * deno));

    if (!std::isfinite(err)) {
      throw Error(ErrorCode::StepUnderflow, "non-finite error estimate");
    }
    if (err <= 1.0) {
      ++stats_.accepted;
      stats_.h_min = stats_.accepted == 1 ? h : std::min(stats_.h_min, h);
      stats_.h_max = std::max(stats_.h_max, h);
      r_ = final_step ? r_target : r_ + hs;
      y_ = y_new;
      derivative(r_, y_, k1);
      update_drift();
      record();
      double scale = err == 0.0 ? kMaxScale : kSafety * std::pow(err, -0.125);
      scale = std::clamp(scale, kMinScale, kMaxScale);
      if (last_rejected) scale = std::min(scale, 1.0);
      // A clipped final step says nothing about the natural step size.
      if (!final_step || h >= h_) h_ = h * scale;
      last_rejected = false;
    } else {
      ++stats_.rejected;
      h_ = h * std::max(kMinScale, kSafety * std::pow(err, -0.125));
      last_rejected = true;
    }
  }
}

StateVector Integrator::state() const { return {r_, y_[0], y_[1]}; }

std::optional<StateVector> Integrator::companion() const {
  if (dim_ != 4) return std::nullopt;
  return StateVector{r_, y_[2], y_[3]};
}

Trajectory Integrator::take_trajectory() {
  Trajectory t = std::move(trajectory_);
  t.wronskian_drift = drift_;
  t.step_stats = stats_;
  if (!options_.record_samples) {
    t.samples = {state()};
    if (dim_ == 4) t.companion_samples = {*companion()};
  }
  trajectory_ = {};
  return t;
}

Trajectory propagate(const ValidatedConfig& config, const StateVector& init, double r_target,
                     std::optional<StateVector> companion, IntegratorOptions options) {
  Integrator integrator(config, init, companion, options);
  integrator.advance_to(r_target);
  return integrator.take_trajectory();
}

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory) {
  out << "r,re_u,im_u,re_du,im_du\n";
  char line[160];
  for (const auto& s : trajectory.samples) {
    std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g,%.17g\n", s.r, s.u.real(),
                  s.u.imag(), s.du.real(), s.du.imag());
    out << line;
  }
}

}  // namespace sqm
