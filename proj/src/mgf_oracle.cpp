#include "qldp/mgf_oracle.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "chebyshev_impl.hpp"
#include "qldp/errors.hpp"

namespace qldp {

namespace {

using boost::math::quadrature::gauss_kronrod;

constexpr double kWindowDrop = 46.0;  // e^{-46} ~ 1e-20

// Finds [lo, hi] around the peak of a concave log-integrand `phi` (with
// phi(peak) = 0) such that phi < -kWindowDrop outside.
template <class Phi>
std::pair<double, double> find_window(const Phi& phi, double peak) {
  auto edge = [&](double dir) {
    double step = 1.0;
    double inside = peak;
    double outside = peak + dir * step;
    while (phi(outside) > -kWindowDrop) {
      inside = outside;
      step *= 2.0;
      outside = peak + dir * step;
      if (step > 1e12) throw ConvergenceFailure("log-MGF quadrature window did not close");
    }
    for (int i = 0; i < 80; ++i) {
      const double mid = 0.5 * (inside + outside);
      if (phi(mid) > -kWindowDrop) inside = mid; else outside = mid;
    }
    return outside;
  };
  return {edge(-1.0), edge(1.0)};
}

// Integral of g over [lo, hi], split at the peak and at zero (|x|^p is not
// smooth there for non-even p).
template <class G>
double integrate_split(const G& g, double lo, double hi, double peak) {
  std::vector<double> cuts{lo, hi};
  if (peak > lo && peak < hi) cuts.push_back(peak);
  if (0.0 > lo && 0.0 < hi && peak != 0.0) cuts.push_back(0.0);
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    total += gauss_kronrod<double, 31>::integrate(g, cuts[i], cuts[i + 1], 12, 1e-13);
  }
  return total;
}

double tilt_peak(double p, double slope, double scale) {
  // argmax of slope*x - scale*|x|^p/p
  if (slope == 0.0) return 0.0;
  if (p == 1.0) return 0.0;
  const double m = std::pow(std::abs(slope) / scale, 1.0 / (p - 1.0));
  return slope > 0 ? m : -m;
}

}  // namespace

TiltedMoments tilted_moments_quadrature(const PGaussDist& dist, double t) {
  const double p = dist.p();
  const double at = std::abs(t);
  if (p == 1.0 && at >= 1.0) {
    throw DomainViolation("Laplace log-MGF is infinite for |t| >= 1");
  }
  const double peak = tilt_peak(p, at, 1.0);
  const double peak_val = at * peak - std::pow(std::abs(peak), p) / p;
  // Relative to the peak, phi = peak^p (y - ((1+y)^p - 1)/p) with x = peak (1+y);
  // this form avoids cancelling two large terms near the peak.
  const double peak_pow = std::pow(peak, p);
  auto phi = [&](double x) {
    if (peak > 0.0 && x > 0.0) {
      const double y = (x - peak) / peak;
      return peak_pow * (y - std::expm1(p * std::log1p(y)) / p);
    }
    return at * x - std::pow(std::abs(x), p) / p - peak_val;
  };
  const auto [lo, hi] = find_window(phi, peak);

  const double m0 = integrate_split([&](double x) { return std::exp(phi(x)); }, lo, hi, peak);
  const double shift =
      integrate_split([&](double x) { return (x - peak) * std::exp(phi(x)); }, lo, hi, peak) / m0;
  const double mean = peak + shift;
  const double var = integrate_split(
      [&](double x) { return (x - mean) * (x - mean) * std::exp(phi(x)); }, lo, hi, peak) / m0;

  TiltedMoments out;
  out.log_mgf = peak_val + std::log(dist.norm_const()) + std::log(m0);
  out.mean = t >= 0 ? mean : -mean;
  out.variance = var;
  return out;
}

LogMGFOracle::LogMGFOracle(double p) : dist_(p), closed_form_(p == 2.0) {
  if (!(p > 1.0)) {
    throw InvalidParameter("LogMGFOracle requires p > 1 (the Laplace case has a bounded t1-domain)");
  }
  if (closed_form_) return;

  // Keep the tilted peak t^{1/(p-1)} below 1e4 inside the table.
  const double limit = std::min(4096.0, std::pow(1e4, p - 1.0));
  std::vector<double> breaks{0.0};
  for (double b = 0.5; b < limit; b *= 2.0) breaks.push_back(b);
  breaks.push_back(limit);

  const PGaussDist& d = dist_;
  auto f = [&d](double t) -> std::array<double, 3> {
    const TiltedMoments m = tilted_moments_quadrature(d, t);
    return {m.log_mgf, m.mean, m.variance};
  };
  table_ = PiecewiseChebyshev<3>(f, breaks, 24, 1e-11, 1e-13);
}

double LogMGFOracle::eta(double x) const { return std::pow(std::abs(x), p()); }

TiltedMoments LogMGFOracle::log_mgf_1d(double t) const {
  if (t == 0.0) return {0.0, 0.0, sigma2()};
  if (closed_form_) return {0.5 * t * t, t, 1.0};
  const double at = std::abs(t);
  if (at <= table_.upper()) {
    const auto v = table_(at);
    return {v[0], t >= 0 ? v[1] : -v[1], v[2]};
  }
  return tilted_moments_quadrature(dist_, t);
}

double LogMGFOracle::laplace_asymptotic(double t) const {
  const double p = this->p();
  const double at = std::abs(t);
  return (p - 1.0) / p * std::pow(at, p / (p - 1.0)) +
         (2.0 - p) / (2.0 * (p - 1.0)) * std::log(at) +
         std::log(dist_.norm_const() * std::sqrt(2.0 * std::numbers::pi / (p - 1.0)));
}

void LogMGFOracle::check_domain(double t2) const {
  if (!(t2 < threshold())) {
    throw DomainViolation("log-MGF second argument t2 = " + std::to_string(t2) +
                          " must be < T = " + std::to_string(threshold()));
  }
}

double LogMGFOracle::logmgf_joint(double t1, double t2) const {
  check_domain(t2);
  const double p = this->p();
  const double a = 1.0 - p * t2;
  const double tau = std::abs(t1) * std::pow(a, -1.0 / p);
  return -std::log(a) / p + log_mgf_1d(tau).log_mgf;
}

JointDerivs LogMGFOracle::logmgf_all(double t1, double t2) const {
  check_domain(t2);
  const double p = this->p();
  const double a = 1.0 - p * t2;
  const double sa = std::pow(a, -1.0 / p);
  const double tau = t1 * sa;
  const TiltedMoments h = log_mgf_1d(tau);
  JointDerivs d;
  d.value = -std::log(a) / p + h.log_mgf;
  d.d1 = h.mean * sa;
  d.d2 = (1.0 + h.mean * tau) / a;
  d.d11 = h.variance * sa * sa;
  d.d12 = sa / a * (tau * h.variance + h.mean);
  d.d22 = p / (a * a) + h.variance * (tau / a) * (tau / a) + h.mean * tau * (1.0 + p) / (a * a);
  return d;
}

double LogMGFOracle::logmgf_deriv(double t1, double t2, int alpha, int beta) const {
  if (alpha < 0 || beta < 0 || alpha + beta > 2) {
    throw InvalidParameter("logmgf_deriv supports alpha + beta <= 2");
  }
  const JointDerivs d = logmgf_all(t1, t2);
  switch (alpha * 3 + beta) {
    case 0: return d.value;
    case 1: return d.d2;
    case 2: return d.d22;
    case 3: return d.d1;
    case 4: return d.d12;
    default: return d.d11;
  }
}

double LogMGFOracle::tilted_expectation(double s1, double s2,
                                        const std::function<double(double)>& h) const {
  check_domain(s2);
  const double p = this->p();
  const double a = 1.0 - p * s2;
  const double peak = tilt_peak(p, s1, a);
  const double peak_val = s1 * peak - a * std::pow(std::abs(peak), p) / p;
  auto phi = [&](double x) { return s1 * x - a * std::pow(std::abs(x), p) / p - peak_val; };
  const auto [lo, hi] = find_window(phi, peak);
  const double z = integrate_split([&](double x) { return std::exp(phi(x)); }, lo, hi, peak);
  const double num =
      integrate_split([&](double x) { return h(x) * std::exp(phi(x)); }, lo, hi, peak);
  return num / z;
}

}  // namespace qldp
