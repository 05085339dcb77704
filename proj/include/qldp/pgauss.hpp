#pragma once

#include <Eigen/Dense>

#include "qldp/rng.hpp"

namespace qldp {

/// p-generalized normal law with density
///   f_p(x) = exp(-|x|^p / p) / (2 p^{1/p} Gamma(1 + 1/p)),  p >= 1.
/// p = 2 is the standard normal, p = 1 the Laplace law.
class PGaussDist {
 public:
  explicit PGaussDist(double p);

  double p() const { return p_; }
  double norm_const() const { return norm_const_; }

  double pdf(double x) const;
  double log_pdf(double x) const;
  double cdf(double x) const;

  /// Var X = p^{2/p} Gamma(3/p) / Gamma(1/p).
  double variance() const;

  /// X = eps * (p G)^{1/p}, eps uniform on {-1, +1}, G ~ Gamma(1/p, 1).
  double sample(Rng& rng) const;

 private:
  double p_;
  double norm_const_;
  double log_norm_const_;
};

/// Density of the p-generalized normal law at x. Throws InvalidParameter for p < 1.
double pdf_p(double x, double p);

double sample_pgauss(double p, Rng& rng);

/// Uniform point of the l_p^n sphere {sum |y_i|^p = n}: i.i.d. p-Gaussians
/// renormalized by (n^{-1} sum |X_i|^p)^{1/p}.
Eigen::VectorXd sample_sphere(int n, double p, Rng& rng);

/// Uniform point of the l_p^n ball {sum |y_i|^p <= n}: U^{1/n} times a sphere point.
Eigen::VectorXd sample_ball(int n, double p, Rng& rng);

}  // namespace qldp
