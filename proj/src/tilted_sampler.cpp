#include "qldp/tilted_sampler.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "qldp/errors.hpp"

namespace qldp {

namespace {

constexpr double kTailDrop = 40.0;

// 5-point Gauss-Legendre on [-1, 1]
constexpr double kGLNodes[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                0.5384693101056831, 0.9061798459386640};
constexpr double kGLWeights[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                  0.4786286704993665, 0.2369268850561891};

}  // namespace

TiltedSampler::TiltedSampler(const LogMGFOracle& oracle, TiltParams params, int knots)
    : params_(params), p_(oracle.p()) {
  if (!(params.s2 < oracle.threshold())) {
    throw DomainViolation("tilted sampler requires s2 < T");
  }
  if (knots < 16) throw InvalidParameter("tilted sampler needs at least 16 knots");
  scale_ = 1.0 - p_ * params.s2;

  double peak = 0.0;
  if (params.s1 != 0.0) {
    peak = std::pow(std::abs(params.s1) / scale_, 1.0 / (p_ - 1.0));
    if (params.s1 < 0) peak = -peak;
  }
  peak_log_ = 0.0;
  peak_log_ = log_density_unnormalized(peak);

  auto edge = [&](double dir) {
    double step = 1.0, inside = peak, outside = peak + dir;
    while (log_density_unnormalized(outside) > -kTailDrop) {
      inside = outside;
      step *= 2.0;
      outside = peak + dir * step;
    }
    for (int i = 0; i < 80; ++i) {
      const double mid = 0.5 * (inside + outside);
      if (log_density_unnormalized(mid) > -kTailDrop) inside = mid; else outside = mid;
    }
    return outside;
  };
  const double lo = edge(-1.0);
  const double hi = edge(1.0);

  grid_.resize(knots);
  const double h = (hi - lo) / (knots - 1);
  for (int i = 0; i < knots; ++i) grid_[i] = lo + h * i;
  grid_.back() = hi;

  cdf_.assign(knots, 0.0);
  for (int i = 1; i < knots; ++i) {
    const double a = grid_[i - 1], b = grid_[i];
    double cell = 0.0;
    for (int q = 0; q < 5; ++q) {
      const double x = 0.5 * (a + b) + 0.5 * (b - a) * kGLNodes[q];
      cell += kGLWeights[q] * std::exp(log_density_unnormalized(x));
    }
    cdf_[i] = cdf_[i - 1] + 0.5 * (b - a) * cell;
  }
  const double mass = cdf_.back();
  log_mass_ = std::log(mass);
  for (double& c : cdf_) c /= mass;
  cdf_.back() = 1.0;

  // Exact slopes dx/dF = 1/density, then Fritsch-Carlson limiting.
  slope_.resize(knots);
  for (int i = 0; i < knots; ++i) slope_[i] = 1.0 / std::max(density(grid_[i]), 1e-300);
  for (int i = 0; i + 1 < knots; ++i) {
    const double dF = cdf_[i + 1] - cdf_[i];
    if (dF <= 0.0) continue;
    const double secant = (grid_[i + 1] - grid_[i]) / dF;
    const double alpha = slope_[i] / secant;
    const double beta = slope_[i + 1] / secant;
    const double rr = alpha * alpha + beta * beta;
    if (rr > 9.0) {
      const double tau = 3.0 / std::sqrt(rr);
      slope_[i] = tau * alpha * secant;
      slope_[i + 1] = tau * beta * secant;
    }
  }
}

double TiltedSampler::log_density_unnormalized(double x) const {
  return params_.s1 * x - scale_ * std::pow(std::abs(x), p_) / p_ - peak_log_;
}

double TiltedSampler::density(double x) const {
  return std::exp(log_density_unnormalized(x) - log_mass_);
}

double TiltedSampler::quantile(double u) const {
  if (u <= 0.0) return grid_.front();
  if (u >= 1.0) return grid_.back();
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  const std::size_t i = static_cast<std::size_t>(it - cdf_.begin()) - 1;
  const double f0 = cdf_[i], f1 = cdf_[i + 1];
  const double dF = f1 - f0;
  if (dF <= 0.0) return 0.5 * (grid_[i] + grid_[i + 1]);
  const double s = (u - f0) / dF;
  const double s2 = s * s, s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s;
  const double h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
  const double x = h00 * grid_[i] + h10 * dF * slope_[i] + h01 * grid_[i + 1] +
                   h11 * dF * slope_[i + 1];
  return std::clamp(x, grid_[i], grid_[i + 1]);
}

double TiltedSampler::sample(Rng& rng) const {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  return quantile(unif(rng));
}

double tilted_sample(TiltParams params, const LogMGFOracle& oracle, Rng& rng) {
  return TiltedSampler(oracle, params).sample(rng);
}

}  // namespace qldp
