// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "qldp/errors.hpp"
#include "qldp/gauss_hermite.hpp"
#include "qldp/geometry.hpp"
#include "qldp/montecarlo.hpp"
#include "qldp/pgauss.hpp"
#include "qldp/rates.hpp"
#include "qldp/weingarten.hpp"
#include "support.hpp"

using namespace qldp;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Verdict ac1() {
  const LogMGFOracle o(2.0);
  double worst = 0.0;
  for (int i = 1; i <= 9; ++i) {
    const double r = 0.1 * i;
    const double exact = -0.5 * std::log(1.0 - r * r);
    worst = std::max(worst, std::abs(rate_norm2(r, o).value - exact) / exact);
  }
  const bool inf = rate_norm2(1.0, o).status == RateStatus::infinite &&
                   rate_norm2(1.5, o).status == RateStatus::infinite;
  return {worst <= 1e-5 && inf, fmt("max rel err %.2e (tol 1e-5), r>=1 infinite: %s", worst, inf ? "yes" : "no")};
}

Verdict ac2() {
  double worst = 0.0;
  bool inf_at_r = true;
  for (double p : {2.0, 3.0, 4.0}) {
    const LogMGFOracle o(p);
    for (int i = 1; i <= 7; ++i) {
      const double r = 0.1 * i;
      const std::vector<double> w{r, 0.0, 0.0};
      const double ball = rate_ball(w, r, o).value;
      // the contraction infimum over radii >= ||w|| sits at the smallest radius
      inf_at_r = inf_at_r && rate_ball(w, 1.05 * r, o).value >= ball;
      const double norm = rate_norm2(r, o).value;
      worst = std::max(worst, std::abs(ball - norm) / norm);
    }
  }
  return {worst <= 1e-4 && inf_at_r,
          fmt("max rel diff %.2e over p in {2,3,4}, r in {0.1..0.7} (tol 1e-4)", worst)};
}

Verdict ac3() {
  const LogMGFOracle o(3.0);
  Rng rng = make_stream(2024, 0);
  std::uniform_real_distribution<double> Du(0.05, 2.0), cu(-0.5, 0.8 * o.threshold());
  double arg_err = 0.0, val_err = 0.0;
  int bad = 0;
  for (int i = 0; i < 200; ++i) {
    const double D = Du(rng), c = cu(rng);
    const LambdaDerivs l = lambda_D(D, c, o);
    const RateResult res = legendre_J(l.dD, l.dc, o);
    if (!res.finite()) {
      ++bad;
      continue;
    }
    arg_err = std::max({arg_err, std::abs(res.v_star - D), std::abs(res.c_star - c)});
    val_err = std::max(val_err, std::abs(res.value - (D * l.dD + c * l.dc - l.value)));
  }
  return {bad == 0 && arg_err <= 1e-4 && val_err <= 1e-7,
          fmt("200 points at p=3: max argmax err %.2e (tol 1e-4), max value err %.2e (tol 1e-7), non-finite %d",
              arg_err, val_err, bad)};
}

Verdict ac4() {
  double pinv = 0.0;
  for (int d : {1, 2, 3})
    for (int n : {1, 2, 3, 10, 50}) {
      const WeingartenTable& t = weingarten_table(d, n);
      const Eigen::MatrixXd& G = t.gram;
      const Eigen::MatrixXd& W = t.wg;
      pinv = std::max({pinv, (G * W * G - G).norm() / G.norm(), (W * G * W - W).norm() / W.norm(),
                       ((G * W).transpose() - G * W).cwiseAbs().maxCoeff(),
                       ((W * G).transpose() - W * G).cwiseAbs().maxCoeff()});
    }
  const std::vector<int> ones{1, 1, 1, 1}, mixed{1, 1, 2, 2};
  double exact_err = 0.0;
  for (int n : {10, 50, 200}) {
    const double v = haar_moment(ones, ones, n);
    exact_err = std::max(exact_err, std::abs(v - 3.0 / (n * (n + 2.0))) / v);
  }
  const int n = 10, N = 1000000;
  Rng rng = make_stream(77, 0);
  std::vector<double> a4, a2b2;
  a4.reserve(N);
  a2b2.reserve(N);
  for (int i = 0; i < N; ++i) {
    const StiefelFrame f = haar_frame(n, 2, rng);
    const double a = f.cols()(0, 0), b = f.cols()(0, 1);
    a4.push_back(a * a * a * a);
    a2b2.push_back(a * a * b * b);
  }
  const auto m4 = test::mean_se(a4);
  const auto m22 = test::mean_se(a2b2);
  const double z4 = std::abs(m4.mean - haar_moment(ones, ones, n)) / m4.se;
  const double z22 = std::abs(m22.mean - haar_moment(ones, mixed, n)) / m22.se;
  return {pinv <= 1e-8 && exact_err <= 1e-13 && z4 <= 4.0 && z22 <= 4.0,
          fmt("pseudo-inverse residual %.2e (tol 1e-8), E a11^4 rel err %.2e, MC z-scores %.2f %.2f (tol 4)",
              pinv, exact_err, z4, z22)};
}

Verdict ac5() {
  // every degree-4 moment of sqrt(n) times a Haar row is n/(n+2) times its Gaussian value
  constexpr double kBound = 2.0;
  const std::vector<double> u{0.6, 0.0, 0.8};
  double worst = 0.0;
  std::string seq;
  for (int n : {50, 100, 200}) {
    double here = 0.0;
    for (auto [alpha, beta] : {std::pair{4, 0}, std::pair{3, 1}, std::pair{2, 2}, std::pair{1, 3}, std::pair{0, 4}}) {
      const MomentMatch m = moment_match_check(alpha, beta, 1, u, n, 3);
      here = std::max(here, n * std::abs(m.ratio - 1.0));
    }
    worst = std::max(worst, here);
    seq += fmt("%s%d:%.6f", seq.empty() ? "" : ", ", n, here);
  }
  return {worst <= kBound, fmt("n|ratio-1| = {%s}, bound %.1f", seq.c_str(), kBound)};
}

Verdict ac6() {
  const auto run = [](double p) {
    const LogMGFOracle o(p);
    int wins = 0;
    double s500 = 0.0, s5000 = 0.0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const double a = gaussian_approx_stat(500, 23, 1.0, 0.1, 100, o, seed);
      const double b = gaussian_approx_stat(5000, 71, 1.0, 0.1, 100, o, seed);
      wins += b < a;
      s500 += a / 20;
      s5000 += b / 20;
    }
    return std::tuple{wins, s500, s5000};
  };
  const auto [w2, a2, b2] = run(2.0);
  const auto [w3, a3, b3] = run(3.0);
  return {w2 >= 18,
          fmt("p=2: decreased in %d/20 seeds (mean stat %.2e -> %.2e); p=3 companion: %d/20 (%.2e -> %.2e)",
              w2, a2, b2, w3, a3, b3)};
}

Verdict ac7() {
  const LogMGFOracle o(2.0);
  const double target = rate_norm2(0.3, o).value;
  std::vector<double> meds;
  std::string seq;
  for (int n : {100, 200, 400}) {
    std::vector<double> dev;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      TailOptions t;
      t.n = n;
      t.k = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n))));
      t.p = 2.0;
      t.r = 0.3;
      t.samples = 100000;
      t.target = TailTarget::ball;
      t.seed = seed;
      const TailEstimate e = estimate_tail(t, o);
      dev.push_back(e.zero_hits ? std::numeric_limits<double>::infinity() : std::abs(e.log_rate - target));
    }
    meds.push_back(median(dev));
    seq += fmt("%s%d:%.5f", seq.empty() ? "" : ", ", n, meds.back());
  }
  const bool monotone = meds[1] <= meds[0] && meds[2] <= meds[1];
  const double rel = meds[2] / target;
  return {monotone && rel <= 0.25,
          fmt("median |log_rate - %.6f| = {%s}; nonincreasing: %s; relative at n=400: %.1f%% (tol 25%%)",
              target, seq.c_str(), monotone ? "yes" : "no", 100 * rel)};
}

// E over X ~ N(0, I_6) of P_U(rho(X) U^{1/6} >= r) = (1 - (r / rho)^6)_+ on a tensor Gauss-Hermite grid.
double ball_tail_grid(const StiefelFrame& frame, double r, int nodes) {
  const GaussianQuadrature q(nodes);
  const auto& z = q.nodes();
  const auto& w = q.weights();
  const Eigen::MatrixXd at = frame.cols().transpose();
  double total = 0.0;
  std::array<int, 6> idx{};
  const long count = static_cast<long>(std::pow(nodes, 6));
  Eigen::Matrix<double, 6, 1> x;
  for (long flat = 0; flat < count; ++flat) {
    long rem = flat;
    double wt = 1.0, ss = 0.0;
    for (int d = 0; d < 6; ++d) {
      idx[d] = static_cast<int>(rem % nodes);
      rem /= nodes;
      x(d) = z[idx[d]];
      wt *= w[idx[d]];
      ss += x(d) * x(d);
    }
    const double proj2 = (at * x).squaredNorm();
    const double rho2 = proj2 / ss;  // ||W||^2 / L with W = a^T x / sqrt(6) and L = ||x||^2 / 6
    const double ratio3 = std::pow(r * r / rho2, 3.0);
    if (ratio3 < 1.0) total += wt * (1.0 - ratio3);
  }
  return total;
}

Verdict ac8() {
  const LogMGFOracle o(2.0);
  const double r = 0.8;
  Rng frame_rng = make_stream(8, 0);
  const StiefelFrame frame = haar_frame(6, 2, frame_rng);
  const double grid = ball_tail_grid(frame, r, 24);
  TailOptions t;
  t.n = 6;
  t.k = 2;
  t.p = 2.0;
  t.r = r;
  t.samples = 100000;
  t.target = TailTarget::ball;
  t.seed = 8;
  const TailEstimate e = estimate_tail(t, frame, o);
  const double diff = std::abs(e.p_hat - grid);
  return {diff <= 1e-2, fmt("tilted %.5f +- %.5f (mix %s) vs 24^6 grid %.5f: |diff| %.2e (tol 1e-2)",
                            e.p_hat, e.std_error, to_string(e.mix).c_str(), grid, diff)};
}

Verdict ac9() {
  double sphere_err = 0.0;
  Rng rng = make_stream(9, 0);
  for (double p : {1.5, 2.0, 3.0, 4.0})
    for (int n : {5, 100, 1000})
      for (int rep = 0; rep < 20; ++rep) {
        const Eigen::VectorXd y = sample_sphere(n, p, rng);
        double s = 0.0;
        for (double v : y) s += std::pow(std::abs(v), p);
        sphere_err = std::max(sphere_err, std::abs(s / n - 1.0));
      }
  double min_ks = 1.0;
  for (double p : {2.0, 3.0}) {
    const int n = 20;
    std::vector<double> stat;
    for (int rep = 0; rep < 5000; ++rep) {
      const Eigen::VectorXd y = sample_ball(n, p, rng);
      double s = 0.0;
      for (double v : y) s += std::pow(std::abs(v), p);
      stat.push_back(std::pow(s / n, n / p));
    }
    min_ks = std::min(min_ks, test::ks_pvalue(stat, [](double x) { return std::clamp(x, 0.0, 1.0); }));
  }
  double worst_z = 0.0;
  for (double p : {1.5, 2.0, 3.0, 4.0}) {
    const PGaussDist dist(p);
    std::vector<double> v;
    for (int i = 0; i < 200000; ++i) v.push_back(std::pow(std::abs(dist.sample(rng)), p));
    const auto m = test::mean_se(v);
    worst_z = std::max(worst_z, std::abs(m.mean - 1.0) / m.se);
  }
  double ortho = 0.0;
  for (auto [n, k] : {std::pair{10, 10}, std::pair{500, 23}, std::pair{2000, 45}}) {
    ortho = std::max(ortho, haar_frame(n, k, rng).orthonormality_error());
  }
  return {sphere_err <= 1e-10 && min_ks > 0.01 && worst_z <= 4.0 && ortho <= 1e-12,
          fmt("sphere err %.1e (tol 1e-10), ball KS p %.3f (> 0.01), E|X|^p z %.2f (tol 4), frame err %.1e (tol 1e-12)",
              sphere_err, min_ks, worst_z, ortho)};
}

Verdict ac10() {
  const LogMGFOracle o(2.0);
  const TightnessReport rep = tightness_check(200, 14, 2.0, 100000, 10, o);
  const bool mean_ok = std::abs(rep.mean - 14.0 / 200.0) <= 3.0 * rep.mean_se;
  return {mean_ok && rep.gamma_hat > 0.0 && rep.exceedance[1] < rep.exceedance[0],
          fmt("mean %.6f vs 0.07 (3 SE = %.1e), exceedance %.3e > %.3e, gamma_hat %.4f", rep.mean,
              3 * rep.mean_se, rep.exceedance[0], rep.exceedance[1], rep.gamma_hat)};
}

}  // namespace

int main() {
  struct Criterion {
    const char* id;
    const char* name;
    double limit_s;
    std::function<Verdict()> run;
  };
  const std::vector<Criterion> all{
      {"AC1", "closed-form rate at p=2", 1, ac1},
      {"AC2", "contraction consistency", 30, ac2},
      {"AC3", "duality involution", 10, ac3},
      {"AC4", "Weingarten exactness", 60, ac4},
      {"AC5", "moment matching", 60, ac5},
      {"AC6", "Gaussian approximation", 180, ac6},
      {"AC7", "LDP slope", 300, ac7},
      {"AC8", "small-instance IS unbiasedness", 30, ac8},
      {"AC9", "samplers", 30, ac9},
      {"AC10", "tightness", 30, ac10},
  };
  int failures = 0;
  for (const auto& c : all) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool ok = v.pass && secs < c.limit_s;
    failures += !ok;
    std::printf("%-4s %s  %s: %s [%.1f s, limit %.0f s]\n", c.id, ok ? "PASS" : "FAIL", c.name,
                v.detail.c_str(), secs, c.limit_s);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(all.size()) - failures, all.size());
  return failures == 0 ? 0 : 1;
}
