#include "sqm/disk.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

#include "sqm/errors.hpp"

namespace sqm {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_grid(const UnitaryFamilySample& s) {
  const std::size_t n = s.chis.size();
  if (n == 0 || s.values.size() != n) {
    throw Error(ErrorCode::NonUniformGrid, "need equally many phases and values, at least one");
  }
  const double step = kTwoPi / static_cast<double>(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double expected = s.chis[0] + step * static_cast<double>(j);
    if (std::abs(s.chis[j] - expected) > 1e-9 * kTwoPi) {
      std::ostringstream msg;
      msg << "chi[" << j << "] = " << s.chis[j] << ", expected " << expected;
      throw Error(ErrorCode::NonUniformGrid, msg.str());
    }
  }
}

cplx mean(const std::vector<cplx>& v, std::size_t stride) {
  cplx sum{};
  std::size_t count = 0;
  for (std::size_t j = 0; j < v.size(); j += stride, ++count) sum += v[j];
  return sum / static_cast<double>(count);
}

cplx cauchy_sum(const UnitaryFamilySample& s, cplx omega, CauchyRule rule, std::size_t stride) {
  cplx sum{};
  std::size_t count = 0;
  for (std::size_t j = 0; j < s.chis.size(); j += stride, ++count) {
    sum += s.values[j] / (1.0 - omega * std::polar(1.0, -s.chis[j]));
  }
  cplx value = sum / static_cast<double>(count);
  if (rule == CauchyRule::interpolatory) {
    value *= 1.0 - std::pow(omega * std::polar(1.0, -s.chis[0]), static_cast<double>(count));
  }
  return value;
}

}  // namespace

cplx blaschke_eval(const BlaschkeProduct& product, cplx z) {
  if (std::abs(std::abs(product.zeta) - 1.0) > 1e-12) {
    throw Error(ErrorCode::BadParameter, "zeta must be unimodular");
  }
  cplx f = product.zeta;
  for (const cplx& zj : product.zeros) {
    if (!(std::abs(zj) < 1.0)) throw Error(ErrorCode::BadParameter, "zeros must lie in the disk");
    const cplx den = 1.0 - std::conj(zj) * z;
    if (std::abs(den) < 1e-14) {
      std::ostringstream msg;
      msg << "z = " << z << " is at the pole of the factor with zero " << zj;
      throw Error(ErrorCode::PoleProximity, msg.str());
    }
    f *= (z - zj) / den;
  }
  return f;
}

UnitaryFamilySample sample_unit_circle(const std::function<cplx(cplx)>& map, std::size_t nodes) {
  UnitaryFamilySample s;
  s.chis.reserve(nodes);
  s.values.reserve(nodes);
  for (std::size_t j = 0; j < nodes; ++j) {
    const double chi = kTwoPi * static_cast<double>(j) / static_cast<double>(nodes);
    s.chis.push_back(chi);
    s.values.push_back(map(std::polar(1.0, chi)));
  }
  return s;
}

MobiusFit fit_mobius(const std::vector<cplx>& omegas, const std::vector<cplx>& values) {
  const std::size_t n = omegas.size();
  if (n != values.size()) throw Error(ErrorCode::BadParameter, "omegas and values differ in length");
  if (n < 3) throw Error(ErrorCode::RankDeficient, "need at least 3 samples");

  // Residual S (b* w + a*) - a w - b is real-linear in (Re a, Im a, Re b, Im b);
  // its columns are the residuals at the four unit vectors.
  const auto residual = [](cplx s, cplx w, cplx a, cplx b) {
    return s * (std::conj(b) * w + std::conj(a)) - a * w - b;
  };
  const cplx basis[4][2] = {{{1, 0}, {}}, {{0, 1}, {}}, {{}, {1, 0}}, {{}, {0, 1}}};
  Eigen::MatrixXd A(2 * n, 4);
  for (std::size_t i = 0; i < n; ++i) {
    for (int c = 0; c < 4; ++c) {
      const cplx r = residual(values[i], omegas[i], basis[c][0], basis[c][1]);
      A(2 * i, c) = r.real();
      A(2 * i + 1, c) = r.imag();
    }
  }
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullV);
  const auto& sigma = svd.singularValues();
  if (!(sigma(0) > 0.0) || sigma(2) < 1e-7 * sigma(0)) {
    std::ostringstream msg;
    msg << "samples fix no unique Mobius map (singular values " << sigma.transpose()
        << "); constant value " << mean(values, 1);
    throw Error(ErrorCode::RankDeficient, msg.str());
  }
  const Eigen::Vector4d x = svd.matrixV().col(3);
  MobiusFit fit;
  fit.a = {x(0), x(1)};
  fit.b = {x(2), x(3)};
  const double det = std::norm(fit.a) - std::norm(fit.b);
  if (det == 0.0) throw Error(ErrorCode::RankDeficient, "fitted map has |a| = |b|");
  const double scale = 1.0 / std::sqrt(std::abs(det));
  fit.a *= scale;
  fit.b *= scale;
  if (fit.a.real() < 0.0 || (fit.a.real() == 0.0 && fit.a.imag() < 0.0)) {
    fit.a = -fit.a;
    fit.b = -fit.b;
  }
  for (std::size_t i = 0; i < n; ++i) {
    fit.residual = std::max(fit.residual, std::abs(fit(omegas[i]) - values[i]));
  }
  return fit;
}

MobiusFit fit_mobius(const UnitaryFamilySample& samples) {
  std::vector<cplx> omegas;
  omegas.reserve(samples.chis.size());
  for (double chi : samples.chis) omegas.push_back(std::polar(1.0, chi));
  return fit_mobius(omegas, samples.values);
}

CauchyResult cauchy_reconstruct(const UnitaryFamilySample& samples, cplx omega, CauchyRule rule) {
  if (!(std::abs(omega) < 1.0)) {
    std::ostringstream msg;
    msg << "|Omega| = " << std::abs(omega) << " is not inside the unit disk";
    throw Error(ErrorCode::OutsideDisk, msg.str());
  }
  check_grid(samples);
  CauchyResult out;
  out.nodes = samples.chis.size();
  out.value = cauchy_sum(samples, omega, rule, 1);
  out.error_estimate = out.nodes % 2 == 0
                           ? std::abs(out.value - cauchy_sum(samples, omega, rule, 2))
                           : std::numeric_limits<double>::quiet_NaN();
  return out;
}

cplx absorption_average(const UnitaryFamilySample& samples) {
  check_grid(samples);
  return mean(samples.values, 1);
}

void write_samples_csv(std::ostream& out, const UnitaryFamilySample& samples) {
  out << "chi,re_s,im_s\n";
  char line[96];
  for (std::size_t j = 0; j < samples.chis.size(); ++j) {
    std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g\n", samples.chis[j],
                  samples.values[j].real(), samples.values[j].imag());
    out << line;
  }
}

UnitaryFamilySample read_samples_csv(std::istream& in) {
  UnitaryFamilySample s;
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::MalformedConfig, "empty samples file");
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    double chi = 0.0, re = 0.0, im = 0.0;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &chi, &re, &im) != 3) {
      throw Error(ErrorCode::MalformedConfig, "samples row " + std::to_string(row) + " unreadable");
    }
    s.chis.push_back(chi);
    s.values.emplace_back(re, im);
  }
  return s;
}

}  // namespace sqm
