#pragma once

#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qldp/mgf_oracle.hpp"

namespace qldp {

/// lambda_D(D, c) = E[Lbar(D g, c)], g ~ N(0, 1), with its gradient and
/// Hessian in (D, c).
struct LambdaDerivs {
  double value = 0.0;
  double dD = 0.0;
  double dc = 0.0;
  double dDD = 0.0;
  double dDc = 0.0;
  double dcc = 0.0;
};

LambdaDerivs lambda_D(double D, double c, const LogMGFOracle& oracle);

/// Finite-m functional, which only depends on ||(u_hat, b)||_2.
double lambda_m(std::span<const double> u_hat, double b, double c, const LogMGFOracle& oracle);

struct GradLambdaM {
  Eigen::VectorXd w_hat;
  double t = 0.0;
  double s = 0.0;
};

GradLambdaM grad_lambda_m(std::span<const double> u_hat, double b, double c,
                          const LogMGFOracle& oracle);

enum class RateStatus { finite, infinite, boundary_T, not_converged };

std::string to_string(RateStatus s);

struct RateResult {
  double value = 0.0;
  double v_star = 0.0;
  double c_star = 0.0;
  /// Minimizing s for rate_ball / rate_max, NaN elsewhere.
  double s_star = std::numeric_limits<double>::quiet_NaN();
  RateStatus status = RateStatus::finite;
  int iterations = 0;

  bool finite() const { return status == RateStatus::finite || status == RateStatus::boundary_T; }
};

/// (E|g|^q)^{1/q} with q = p/(p-1). J(r, s) is finite exactly when s > 0 and
/// r < s^{1/p} times this radius.
double finiteness_radius(const LogMGFOracle& oracle);

/// J(r, s) = sup_{v >= 0, c < T} v r + c s - lambda_D(v, c).
RateResult legendre_J(double r, double s, const LogMGFOracle& oracle);

/// I(w, r, s); throws InvalidPoint when ||w||_2 > r.
RateResult rate_I(std::span<const double> w, double r, double s, const LogMGFOracle& oracle);

/// inf_{s > 0} I(s^{1/p} w, s^{1/p} r, s), golden-section search in log s on [-8, 8].
RateResult rate_ball(std::span<const double> w, double r, const LogMGFOracle& oracle);

/// sup_{v, c} v r + c - lambda_D(v, c).
RateResult rate_norm2(double r, const LogMGFOracle& oracle);

/// rate_ball((|r|, 0, ...), |r|).
RateResult rate_max(double r, const LogMGFOracle& oracle);

/// sup_{v >= 0} v r - lambda_D(v, 0): rate of the norm of the projection of
/// an i.i.d. p-Gaussian vector (no sphere constraint).
RateResult rate_iid_norm(double r, const LogMGFOracle& oracle);

struct RateCurveRow {
  double p = 0.0;
  double r = 0.0;
  double s = std::numeric_limits<double>::quiet_NaN();  // empty column when NaN
  RateResult result;
};

/// Columns p, r, s, value, v_star, c_star, status; 17 significant digits.
void write_rate_csv(std::ostream& os, const std::vector<RateCurveRow>& rows,
                    bool with_header = true);

}  // namespace qldp
