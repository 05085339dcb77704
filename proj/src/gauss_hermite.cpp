#include "qldp/gauss_hermite.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qldp/errors.hpp"

namespace qldp {

// Newton iteration on the orthonormal Hermite recurrence for weight e^{-x^2},
// then x -> sqrt(2) x and w -> w / sqrt(pi) to get the N(0, 1) rule.
GaussianQuadrature::GaussianQuadrature(int n) {
  if (n < 1) throw InvalidParameter("GaussianQuadrature needs at least one node");
  const double pim4 = 1.0 / std::pow(std::numbers::pi, 0.25);
  std::vector<double> x(n), w(n);
  const int m = (n + 1) / 2;
  double z = 0.0;
  for (int i = 0; i < m; ++i) {
    if (i == 0) z = std::sqrt(2.0 * n + 1) - 1.85575 * std::pow(2.0 * n + 1, -0.16667);
    else if (i == 1) z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
    else if (i == 2) z = 1.86 * z - 0.86 * x[0];
    else if (i == 3) z = 1.91 * z - 0.91 * x[1];
    else z = 2.0 * z - x[i - 2];

    double pp = 0.0;
    bool converged = false;
    for (int its = 0; its < 100; ++its) {
      double p1 = pim4, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1)) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 1e-15 * std::max(1.0, std::abs(z))) {
        converged = true;
        break;
      }
    }
    if (!converged) throw ConvergenceFailure("Gauss-Hermite node iteration did not converge");
    x[i] = z;
    x[n - 1 - i] = -z;
    w[i] = 2.0 / (pp * pp);
    w[n - 1 - i] = w[i];
  }

  nodes_.resize(n);
  weights_.resize(n);
  const double sqrt2 = std::numbers::sqrt2;
  const double inv_sqrt_pi = 1.0 / std::sqrt(std::numbers::pi);
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    nodes_[i] = -x[i] * sqrt2;  // ascending
    weights_[i] = w[i] * inv_sqrt_pi;
    total += weights_[i];
  }
  for (double& wi : weights_) wi /= total;
}

const GaussianQuadrature& standard_gaussian_rule() {
  static const GaussianQuadrature rule(128);
  return rule;
}

}  // namespace qldp
