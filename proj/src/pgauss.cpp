#include "qldp/pgauss.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <random>
#include <string>

#include "qldp/errors.hpp"

namespace qldp {

namespace {

void require_p(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) {
    throw InvalidParameter("p-generalized normal requires p >= 1, got " + std::to_string(p));
  }
}

}  // namespace

PGaussDist::PGaussDist(double p) : p_(p) {
  require_p(p);
  log_norm_const_ = -(std::log(2.0) + std::log(p) / p + std::lgamma(1.0 + 1.0 / p));
  norm_const_ = std::exp(log_norm_const_);
}

double PGaussDist::log_pdf(double x) const {
  return log_norm_const_ - std::pow(std::abs(x), p_) / p_;
}

double PGaussDist::pdf(double x) const { return std::exp(log_pdf(x)); }

double PGaussDist::cdf(double x) const {
  // |X|^p / p ~ Gamma(1/p, 1)
  const double tail = 0.5 * boost::math::gamma_q(1.0 / p_, std::pow(std::abs(x), p_) / p_);
  return x >= 0.0 ? 1.0 - tail : tail;
}

double PGaussDist::variance() const {
  return std::exp(2.0 / p_ * std::log(p_) + std::lgamma(3.0 / p_) - std::lgamma(1.0 / p_));
}

double PGaussDist::sample(Rng& rng) const {
  // libstdc++ handles shape < 1 by drawing shape + 1 and scaling by U^{1/shape}.
  std::gamma_distribution<double> gamma(1.0 / p_, 1.0);
  std::bernoulli_distribution coin(0.5);
  const double magnitude = std::pow(p_ * gamma(rng), 1.0 / p_);
  return coin(rng) ? magnitude : -magnitude;
}

double pdf_p(double x, double p) { return PGaussDist(p).pdf(x); }

double sample_pgauss(double p, Rng& rng) { return PGaussDist(p).sample(rng); }

Eigen::VectorXd sample_sphere(int n, double p, Rng& rng) {
  if (n < 1) throw InvalidParameter("sample_sphere requires n >= 1");
  const PGaussDist dist(p);
  Eigen::VectorXd y(n);
  if (n == 1) {
    std::bernoulli_distribution coin(0.5);
    y(0) = coin(rng) ? 1.0 : -1.0;
    return y;
  }
  double power_sum = 0.0;
  do {
    power_sum = 0.0;
    for (int i = 0; i < n; ++i) {
      y(i) = dist.sample(rng);
      power_sum += std::pow(std::abs(y(i)), p);
    }
  } while (power_sum == 0.0);
  y *= std::pow(n / power_sum, 1.0 / p);
  return y;
}

Eigen::VectorXd sample_ball(int n, double p, Rng& rng) {
  Eigen::VectorXd y = sample_sphere(n, p, rng);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  y *= std::pow(unif(rng), 1.0 / n);
  return y;
}

}  // namespace qldp
