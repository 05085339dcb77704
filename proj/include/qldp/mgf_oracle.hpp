#pragma once

#include <functional>

#include "qldp/chebyshev.hpp"
#include "qldp/pgauss.hpp"

namespace qldp {

/// log E[exp(tX)] together with the mean and variance of the tilted law
/// exp(tx) f_p(x) / E[exp(tX)].
struct TiltedMoments {
  double log_mgf = 0.0;
  double mean = 0.0;
  double variance = 0.0;
};

/// Direct adaptive Gauss-Kronrod evaluation of TiltedMoments, no caching.
/// The integration window is cut where the integrand falls below e^{-46}
/// of its peak, so the omitted tail is < 1e-14 relative.
TiltedMoments tilted_moments_quadrature(const PGaussDist& dist, double t);

/// Partial derivatives of the joint log-MGF up to total order 2.
struct JointDerivs {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
  double d11 = 0.0;
  double d12 = 0.0;
  double d22 = 0.0;
};

/// Joint log-MGF of (X, |X|^p) for X p-Gaussian:
///   Lbar(t1, t2) = log E exp(t1 X + t2 |X|^p),  finite iff t2 < T = 1/p.
/// Uses the scaling identity
///   Lbar(t1, t2) = -(1/p) log(1 - p t2) + Lhat(t1 (1 - p t2)^{-1/p}),
/// where Lhat is the one-dimensional log-MGF. Lhat and its first two
/// derivatives come from a closed form at p = 2 and from a piecewise
/// Chebyshev table of quadrature values otherwise.
///
/// Immutable after construction; safe to share across threads.
class LogMGFOracle {
 public:
  explicit LogMGFOracle(double p);

  const PGaussDist& dist() const { return dist_; }
  double p() const { return dist_.p(); }
  /// Domain threshold for the second argument.
  double threshold() const { return 1.0 / dist_.p(); }
  double eta(double x) const;
  double sigma2() const { return dist_.variance(); }

  /// One-dimensional log-MGF and its derivatives (tilted mean, tilted variance).
  TiltedMoments log_mgf_1d(double t) const;

  /// Large-|t| Laplace expansion
  ///   ((p-1)/p)|t|^{p/(p-1)} + ((2-p)/(2(p-1))) log|t| + log(c_p sqrt(2 pi/(p-1))).
  double laplace_asymptotic(double t) const;

  double logmgf_joint(double t1, double t2) const;
  /// d^alpha/dt1^alpha d^beta/dt2^beta Lbar, alpha + beta <= 2.
  double logmgf_deriv(double t1, double t2, int alpha, int beta) const;
  JointDerivs logmgf_all(double t1, double t2) const;

  /// Expectation of h(X) under the tilted law exp(s1 x + s2 |x|^p - Lbar(s1, s2)) f_p(x),
  /// by adaptive quadrature. Independent of the cached tables.
  double tilted_expectation(double s1, double s2, const std::function<double(double)>& h) const;

  /// Largest |t| served from the interpolation table (0 when p = 2).
  double table_limit() const { return table_.upper(); }

 private:
  void check_domain(double t2) const;

  PGaussDist dist_;
  bool closed_form_;
  PiecewiseChebyshev<3> table_;
};

}  // namespace qldp
