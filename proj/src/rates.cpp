#include "qldp/rates.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <ostream>

#include "qldp/errors.hpp"
#include "qldp/gauss_hermite.hpp"

namespace qldp {

LambdaDerivs lambda_D(double D, double c, const LogMGFOracle& oracle) {
  if (!(D >= 0.0)) throw InvalidParameter("lambda_D requires D >= 0");
  if (!(c < oracle.threshold())) throw DomainViolation("lambda_D requires c < T");
  LambdaDerivs out;
  if (D == 0.0) {
    const JointDerivs j = oracle.logmgf_all(0.0, c);
    out.value = j.value;
    out.dc = j.d2;
    out.dDD = j.d11;
    out.dcc = j.d22;
    return out;
  }
  // Nodes are symmetric and every summand below is even in the node, so
  // only the positive half is visited.
  const GaussianQuadrature& rule = standard_gaussian_rule();
  const auto& x = rule.nodes();
  const auto& w = rule.weights();
  for (int i = rule.size() / 2; i < rule.size(); ++i) {
    const double g = x[i];
    const double wt = 2.0 * w[i];
    const JointDerivs j = oracle.logmgf_all(D * g, c);
    out.value += wt * j.value;
    out.dD += wt * g * j.d1;
    out.dc += wt * j.d2;
    out.dDD += wt * g * g * j.d11;
    out.dDc += wt * g * j.d12;
    out.dcc += wt * j.d22;
  }
  return out;
}

namespace {

double radial_norm(std::span<const double> u_hat, double b) {
  double ss = b * b;
  for (double v : u_hat) ss += v * v;
  return std::sqrt(ss);
}

}  // namespace

double lambda_m(std::span<const double> u_hat, double b, double c, const LogMGFOracle& oracle) {
  return lambda_D(radial_norm(u_hat, b), c, oracle).value;
}

GradLambdaM grad_lambda_m(std::span<const double> u_hat, double b, double c,
                          const LogMGFOracle& oracle) {
  const double D = radial_norm(u_hat, b);
  const LambdaDerivs l = lambda_D(D, c, oracle);
  GradLambdaM g;
  g.w_hat = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(u_hat.size()));
  g.s = l.dc;
  if (D > 0.0) {
    const double f = l.dD / D;
    for (std::size_t i = 0; i < u_hat.size(); ++i) g.w_hat(static_cast<Eigen::Index>(i)) = f * u_hat[i];
    g.t = f * b;
  }
  return g;
}

std::string to_string(RateStatus s) {
  switch (s) {
    case RateStatus::finite: return "finite";
    case RateStatus::infinite: return "infinite";
    case RateStatus::boundary_T: return "boundary-T";
    case RateStatus::not_converged: return "not-converged";
  }
  return "unknown";
}

double finiteness_radius(const LogMGFOracle& oracle) {
  const double q = oracle.p() / (oracle.p() - 1.0);
  const double log_moment =
      0.5 * q * std::log(2.0) + std::lgamma(0.5 * (q + 1.0)) - 0.5 * std::log(std::numbers::pi);
  return std::exp(log_moment / q);
}

namespace {

constexpr double kGradTol = 1e-10;
constexpr double kLooseGradTol = 1e-7;
constexpr double kDivergenceValue = 1e6;
constexpr double kDivergenceArg = 1e8;
constexpr int kNewtonIterations = 200;
constexpr int kCoordinateSweeps = 2000;

RateResult infinite_result() {
  RateResult r;
  r.value = std::numeric_limits<double>::infinity();
  r.v_star = std::numeric_limits<double>::quiet_NaN();
  r.c_star = std::numeric_limits<double>::quiet_NaN();
  r.status = RateStatus::infinite;
  return r;
}

// Maximizes F(v, c) = v r + c s - lambda_D(v, c) over v in R, c < T. F is
// even in v, so the maximizer for r >= 0 has v >= 0.
class LegendreSolver {
 public:
  LegendreSolver(double r, double s, const LogMGFOracle& oracle)
      : r_(r), s_(s), oracle_(oracle), T_(oracle.threshold()) {}

  struct Point {
    double v = 0.0, c = 0.0, F = 0.0, gv = 0.0, gc = 0.0;
    double hvv = 0.0, hvc = 0.0, hcc = 0.0;  // Hessian of lambda_D
    double gnorm() const { return std::max(std::abs(gv), std::abs(gc)); }
  };

  Point eval(double v, double c) const {
    const LambdaDerivs l = lambda_D(std::abs(v), c, oracle_);
    const double sign = v < 0.0 ? -1.0 : 1.0;
    Point p;
    p.v = v;
    p.c = c;
    p.F = v * r_ + c * s_ - l.value;
    p.gv = r_ - sign * l.dD;
    p.gc = s_ - l.dc;
    p.hvv = l.dDD;
    p.hvc = sign * l.dDc;
    p.hcc = l.dcc;
    return p;
  }

  enum class Outcome { converged, diverged, stalled };

  struct Run {
    Point best;
    Outcome outcome = Outcome::stalled;
    int iterations = 0;
  };

  static bool diverging(const Point& p) {
    return p.F > kDivergenceValue || std::abs(p.v) > kDivergenceArg || p.c < -kDivergenceArg;
  }

  // Backtracking along (dv, dc) keeping c < T; returns false if no ascent.
  bool line_search(Point& x, double dv, double dc) const {
    const double slope = x.gv * dv + x.gc * dc;
    if (!(slope > 0.0)) return false;
    double alpha = 1.0;
    for (int k = 0; k < 80; ++k, alpha *= 0.5) {
      const double c = x.c + alpha * dc;
      if (!(c < T_)) continue;
      const Point y = eval(x.v + alpha * dv, c);
      if (y.F >= x.F + 1e-4 * alpha * slope) {
        x = y;
        return true;
      }
    }
    return false;
  }

  Run newton(double v0, double c0) const {
    Run run;
    Point x = eval(v0, c0);
    for (int it = 0; it < kNewtonIterations; ++it) {
      run.iterations = it;
      if (diverging(x)) {
        run.best = x;
        run.outcome = Outcome::diverged;
        return run;
      }
      if (x.gnorm() <= kGradTol) {
        run.best = x;
        run.outcome = Outcome::converged;
        return run;
      }
      const double det = x.hvv * x.hcc - x.hvc * x.hvc;
      double dv, dc;
      if (x.hvv > 0.0 && det > 1e-300) {
        dv = (x.hcc * x.gv - x.hvc * x.gc) / det;
        dc = (x.hvv * x.gc - x.hvc * x.gv) / det;
      } else {
        dv = x.gv;
        dc = x.gc;
      }
      if (!line_search(x, dv, dc) && !line_search(x, x.gv, x.gc)) break;
    }
    run.best = x;
    run.outcome = x.gnorm() <= kLooseGradTol ? Outcome::converged : Outcome::stalled;
    if (diverging(x)) run.outcome = Outcome::diverged;
    return run;
  }

  Run coordinate_ascent(Point x) const {
    Run run;
    for (int sweep = 0; sweep < kCoordinateSweeps; ++sweep) {
      run.iterations = sweep;
      if (diverging(x)) {
        run.best = x;
        run.outcome = Outcome::diverged;
        return run;
      }
      if (x.gnorm() <= kGradTol) break;
      const double dv = x.hvv > 0.0 ? x.gv / x.hvv : x.gv;
      line_search(x, dv, 0.0);
      const double dc = x.hcc > 0.0 ? x.gc / x.hcc : x.gc;
      line_search(x, 0.0, dc);
    }
    run.best = x;
    run.outcome = x.gnorm() <= kLooseGradTol ? Outcome::converged : Outcome::stalled;
    if (diverging(x)) run.outcome = Outcome::diverged;
    return run;
  }

  RateResult solve(std::span<const std::array<double, 2>> starts) const {
    bool have_converged = false;
    Run best;
    best.best.F = -std::numeric_limits<double>::infinity();
    int total_iterations = 0;
    for (const auto& [v0, c0] : starts) {
      if (!(c0 < T_)) continue;
      Run run = newton(v0, c0);
      if (run.outcome == Outcome::stalled) run = coordinate_ascent(run.best);
      total_iterations += run.iterations;
      if (run.outcome == Outcome::diverged) return infinite_result();
      const bool conv = run.outcome == Outcome::converged;
      if ((conv && !have_converged) || (conv == have_converged && run.best.F > best.best.F)) {
        best = run;
        have_converged = have_converged || conv;
      }
    }
    RateResult out;
    out.value = std::max(best.best.F, 0.0);
    out.v_star = std::abs(best.best.v);
    out.c_star = best.best.c;
    out.iterations = total_iterations;
    if (!have_converged) out.status = RateStatus::not_converged;
    else if (T_ - out.c_star < 1e-8) out.status = RateStatus::boundary_T;
    else out.status = RateStatus::finite;
    return out;
  }

 private:
  double r_, s_;
  const LogMGFOracle& oracle_;
  double T_;
};

void check_nonnegative(double r, double s) {
  if (!(r >= 0.0) || !(s >= 0.0)) throw InvalidParameter("rate arguments must be nonnegative");
}

RateResult legendre_J_warm(double r, double s, const LogMGFOracle& oracle,
                           const RateResult* warm) {
  check_nonnegative(r, s);
  const double p = oracle.p();
  if (s <= 0.0 || r >= std::pow(s, 1.0 / p) * finiteness_radius(oracle)) return infinite_result();
  std::vector<std::array<double, 2>> starts{{0.0, 0.0}, {r, 0.0}, {0.0, (1.0 - 1.0 / s) / p}};
  if (warm && warm->finite()) starts.insert(starts.begin(), {warm->v_star, warm->c_star});
  return LegendreSolver(r, s, oracle).solve(starts);
}

double norm2(std::span<const double> w) {
  double ss = 0.0;
  for (double x : w) ss += x * x;
  return std::sqrt(ss);
}

void check_point(std::span<const double> w, double r) {
  if (!(r >= 0.0)) throw InvalidParameter("radius must be nonnegative");
  if (norm2(w) > r * (1.0 + 1e-12)) throw InvalidPoint("||w||_2 exceeds r: point is outside X");
}

}  // namespace

RateResult legendre_J(double r, double s, const LogMGFOracle& oracle) {
  return legendre_J_warm(r, s, oracle, nullptr);
}

RateResult rate_I(std::span<const double> w, double r, double s, const LogMGFOracle& oracle) {
  check_point(w, r);
  return legendre_J(r, s, oracle);
}

RateResult rate_ball(std::span<const double> w, double r, const LogMGFOracle& oracle) {
  check_point(w, r);
  const double p = oracle.p();
  if (r >= finiteness_radius(oracle)) return infinite_result();
  if (r == 0.0) {
    RateResult z;
    z.s_star = 1.0;
    return z;
  }
  RateResult last;
  bool have_last = false;
  auto probe = [&](double y) {
    const double s = std::exp(y);
    RateResult res = legendre_J_warm(r * std::exp(y / p), s, oracle, have_last ? &last : nullptr);
    res.s_star = s;
    if (res.finite()) {
      last = res;
      have_last = true;
    }
    return res;
  };
  auto value_of = [](const RateResult& res) {
    return res.finite() ? res.value : std::numeric_limits<double>::infinity();
  };

  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = -8.0, b = 8.0;
  double y1 = b - invphi * (b - a), y2 = a + invphi * (b - a);
  double f1 = value_of(probe(y1)), f2 = value_of(probe(y2));
  while (b - a > 1e-8) {
    if (f1 <= f2) {
      b = y2;
      y2 = y1;
      f2 = f1;
      y1 = b - invphi * (b - a);
      f1 = value_of(probe(y1));
    } else {
      a = y1;
      y1 = y2;
      f1 = f2;
      y2 = a + invphi * (b - a);
      f2 = value_of(probe(y2));
    }
  }
  return probe(0.5 * (a + b));
}

RateResult rate_norm2(double r, const LogMGFOracle& oracle) {
  if (!(r >= 0.0)) throw InvalidParameter("rate_norm2 needs r >= 0");
  return legendre_J(r, 1.0, oracle);
}

RateResult rate_max(double r, const LogMGFOracle& oracle) {
  const std::array<double, 1> w{std::abs(r)};
  return rate_ball(w, std::abs(r), oracle);
}

RateResult rate_iid_norm(double r, const LogMGFOracle& oracle) {
  if (!(r >= 0.0)) throw InvalidParameter("rate_iid_norm needs r >= 0");
  RateResult out;
  if (r == 0.0) return out;
  double v = r;
  for (int it = 0; it < kNewtonIterations; ++it) {
    out.iterations = it;
    const LambdaDerivs l = lambda_D(v, 0.0, oracle);
    const double g = r - l.dD;
    const double F = v * r - l.value;
    if (std::abs(g) <= kGradTol) {
      out.value = std::max(F, 0.0);
      out.v_star = v;
      return out;
    }
    double step = l.dDD > 0.0 ? g / l.dDD : g;
    bool moved = false;
    for (int k = 0; k < 80; ++k, step *= 0.5) {
      const double vn = v + step;
      if (vn < 0.0) continue;
      if (vn * r - lambda_D(vn, 0.0, oracle).value >= F + 1e-4 * step * g) {
        v = vn;
        moved = true;
        break;
      }
    }
    if (!moved) {
      out.value = std::max(F, 0.0);
      out.v_star = v;
      out.status = std::abs(g) <= kLooseGradTol ? RateStatus::finite : RateStatus::not_converged;
      return out;
    }
  }
  out.status = RateStatus::not_converged;
  out.v_star = v;
  out.value = v * r - lambda_D(v, 0.0, oracle).value;
  return out;
}

void write_rate_csv(std::ostream& os, const std::vector<RateCurveRow>& rows, bool with_header) {
  const auto old = os.precision(17);
  if (with_header) os << "p,r,s,value,v_star,c_star,status\n";
  for (const auto& row : rows) {
    os << row.p << ',' << row.r << ',';
    if (!std::isnan(row.s)) os << row.s;
    os << ',';
    if (std::isinf(row.result.value)) os << "inf"; else os << row.result.value;
    os << ',';
    if (!std::isnan(row.result.v_star)) os << row.result.v_star;
    os << ',';
    if (!std::isnan(row.result.c_star)) os << row.result.c_star;
    os << ',' << to_string(row.result.status) << '\n';
  }
  os.precision(old);
}

}  // namespace qldp
