#pragma once

#include <vector>

#include "qldp/mgf_oracle.hpp"
#include "qldp/rng.hpp"

namespace qldp {

/// Parameters (s1, s2) of the exponentially tilted law
///   exp(s1 x + s2 |x|^p - Lbar(s1, s2)) f_p(x),  s2 < T.
struct TiltParams {
  double s1 = 0.0;
  double s2 = 0.0;
};

/// Inverse-CDF sampler for a tilted p-Gaussian. The CDF is tabulated on a
/// uniform grid of `knots` points spanning the region where the log-density
/// is within 40 of its maximum (omitted tail mass < 1e-12), and inverted by
/// monotone cubic Hermite interpolation.
class TiltedSampler {
 public:
  TiltedSampler(const LogMGFOracle& oracle, TiltParams params, int knots = 4096);

  TiltParams params() const { return params_; }
  double lower() const { return grid_.front(); }
  double upper() const { return grid_.back(); }

  /// Normalized tilted density (normalized by the tabulated mass).
  double density(double x) const;
  double quantile(double u) const;
  double sample(Rng& rng) const;

 private:
  double log_density_unnormalized(double x) const;

  TiltParams params_;
  double p_;
  double scale_;  // 1 - p s2
  double peak_log_;
  double log_mass_;
  std::vector<double> grid_;
  std::vector<double> cdf_;
  std::vector<double> slope_;  // dx/dF at knots, monotonicity-limited per cell side
};

/// One draw from the tilted law. Builds a sampler per call; reuse a
/// TiltedSampler when drawing repeatedly with fixed parameters.
double tilted_sample(TiltParams params, const LogMGFOracle& oracle, Rng& rng);

}  // namespace qldp
