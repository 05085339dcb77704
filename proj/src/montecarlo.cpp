#include "qldp/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <ostream>
#include <random>
#include <thread>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/bessel.hpp>

#include "qldp/errors.hpp"
#include "qldp/rates.hpp"
#include "qldp/tilted_sampler.hpp"

namespace qldp {

double f_n(std::span<const double> u, const StiefelFrame& frame, double c,
           const LogMGFOracle& oracle) {
  if (static_cast<int>(u.size()) != frame.k()) throw DimensionMismatch("f_n: u must have length k");
  if (!(c < oracle.threshold())) throw DomainViolation("f_n requires c < T");
  const double p = oracle.p();
  const double a = 1.0 - p * c;
  const double sa = std::pow(a, -1.0 / p);
  const Eigen::Map<const Eigen::VectorXd> uv(u.data(), static_cast<Eigen::Index>(u.size()));
  const Eigen::VectorXd t = frame.cols() * uv * std::sqrt(static_cast<double>(frame.n()));
  double sum = 0.0;
  for (Eigen::Index i = 0; i < t.size(); ++i) sum += oracle.log_mgf_1d(std::abs(t(i)) * sa).log_mgf;
  return -std::log(a) / p + sum / frame.n();
}

std::string to_string(TailMethod m) { return m == TailMethod::naive ? "naive" : "tilted"; }

std::string to_string(TailTarget t) {
  switch (t) {
    case TailTarget::sphere: return "sphere";
    case TailTarget::ball: return "ball";
    case TailTarget::iid: return "iid";
  }
  return "unknown";
}

std::string to_string(TiltMix m) {
  switch (m) {
    case TiltMix::axis: return "axis";
    case TiltMix::antipodal: return "antipodal";
    case TiltMix::sphere: return "sphere";
  }
  return "unknown";
}

TiltMix parse_mix(const std::string& s) {
  if (s == "axis") return TiltMix::axis;
  if (s == "antipodal") return TiltMix::antipodal;
  if (s == "sphere") return TiltMix::sphere;
  throw InvalidParameter("unknown tilt mix '" + s + "' (expected axis, antipodal or sphere)");
}

TiltMix default_mix(double p) { return p == 2.0 ? TiltMix::sphere : TiltMix::antipodal; }

namespace {

double log_cosh(double z) {
  const double a = std::abs(z);
  return a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0);
}

}  // namespace

double log_sphere_mgf(int k, double kappa) {
  if (k < 1) throw InvalidParameter("log_sphere_mgf needs k >= 1");
  if (!(kappa >= 0.0)) throw InvalidParameter("log_sphere_mgf needs kappa >= 0");
  if (k == 1) return log_cosh(kappa);
  const double kd = k;
  if (kappa < 1e-3) {
    const double k2 = kappa * kappa;
    return std::log1p(k2 / (2.0 * kd) + k2 * k2 / (8.0 * kd * (kd + 2.0)));
  }
  const double nu = kd / 2.0 - 1.0;
  if (kappa < 600.0) {
    return std::lgamma(kd / 2.0) - nu * std::log(kappa / 2.0) +
           std::log(boost::math::cyl_bessel_i(nu, kappa));
  }
  // theta_1 = 1 - u / kappa has density proportional to (u (2 - u/kappa))^a near u = 0.
  const double a = (kd - 3.0) / 2.0;
  const double upper = std::min(2.0 * kappa, a + 60.0 + 12.0 * std::sqrt(a + 1.0));
  const double log_scale = std::lgamma(a + 1.0);
  boost::math::quadrature::tanh_sinh<double> integrator;
  const double integral = integrator.integrate(
      [&](double u) {
        if (u <= 0.0) return 0.0;
        return std::exp(-u + a * std::log(u * (2.0 - u / kappa)) - log_scale);
      },
      0.0, upper);
  const double log_beta = std::lgamma(0.5) + std::lgamma((kd - 1.0) / 2.0) - std::lgamma(kd / 2.0);
  return kappa + std::log(integral) + log_scale - (a + 1.0) * std::log(kappa) - log_beta;
}

TailMethod parse_method(const std::string& s) {
  if (s == "naive") return TailMethod::naive;
  if (s == "tilted") return TailMethod::tilted;
  throw InvalidParameter("unknown method '" + s + "' (expected naive or tilted)");
}

TailTarget parse_target(const std::string& s) {
  if (s == "sphere") return TailTarget::sphere;
  if (s == "ball") return TailTarget::ball;
  if (s == "iid") return TailTarget::iid;
  throw InvalidParameter("unknown target '" + s + "' (expected sphere, ball or iid)");
}

nlohmann::json TailEstimate::to_json() const {
  nlohmann::json j;
  j["method"] = to_string(method);
  j["target"] = to_string(target);
  if (method == TailMethod::tilted) j["mix"] = to_string(mix);
  j["n"] = n;
  j["k"] = k;
  j["p"] = p;
  j["r"] = r;
  j["samples"] = samples;
  j["p_hat"] = p_hat;
  j["log_rate"] = zero_hits ? nlohmann::json(nullptr) : nlohmann::json(log_rate);
  j["stderr"] = std_error;
  j["ess"] = ess;
  j["event_ess"] = event_ess;
  j["weight_mean"] = weight_mean;
  j["hits"] = hits;
  j["zero_hits"] = zero_hits;
  j["seed"] = seed;
  j["frame_seed"] = frame_seed;
  j["v_star"] = v_star;
  j["c_star"] = c_star;
  j["rate_prediction"] =
      std::isfinite(rate_prediction) ? nlohmann::json(rate_prediction) : nlohmann::json("inf");
  return j;
}

namespace {

struct BatchSums {
  double event_w = 0.0;  // sum of weight * indicator
  double w = 0.0;
  double w2 = 0.0;
  double event_w2 = 0.0;
  std::int64_t hits = 0;
  std::int64_t size = 0;
};

// Draws coordinate i of the sampling law: plain p-Gaussian (naive) or the
// tilt exp(sign lambda_i x + c |x|^p) f_p(x). A negative sign mirrors the
// positive tilt because f_p is even.
class CoordinateSampler {
 public:
  CoordinateSampler(const LogMGFOracle& oracle, std::span<const double> lambda, double c,
                    bool tilted)
      : dist_(oracle.dist()), tilted_(tilted), gaussian_(oracle.p() == 2.0) {
    if (!tilted_) return;
    if (gaussian_) {
      const double prec = 1.0 - 2.0 * c;
      sd_ = 1.0 / std::sqrt(prec);
      for (double l : lambda) means_.push_back(l / prec);
      return;
    }
    samplers_.reserve(lambda.size());
    for (double l : lambda) samplers_.emplace_back(oracle, TiltParams{l, c});
  }

  double operator()(std::size_t i, double sign, Rng& rng) const {
    if (!tilted_) return dist_.sample(rng);
    if (gaussian_) {
      std::normal_distribution<double> normal(sign * means_[i], sd_);
      return normal(rng);
    }
    return sign * samplers_[i].sample(rng);
  }

 private:
  const PGaussDist& dist_;
  bool tilted_;
  bool gaussian_;
  double sd_ = 1.0;
  std::vector<double> means_;
  std::vector<TiltedSampler> samplers_;
};

template <class Body>
void run_batches(int batches, int threads, const Body& body) {
  threads = std::clamp(threads, 1, batches);
  if (threads == 1) {
    for (int b = 0; b < batches; ++b) body(b);
    return;
  }
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (int b = t; b < batches; b += threads) body(b);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace

TailEstimate estimate_tail(const TailOptions& opts, const LogMGFOracle& oracle) {
  const std::uint64_t fseed = opts.frame_seed.value_or(opts.seed);
  if (opts.k < 1 || opts.k > opts.n) throw InvalidParameter("estimate_tail needs 1 <= k <= n");
  Rng frame_rng = make_stream(fseed, 0);
  const StiefelFrame frame = haar_frame(opts.n, opts.k, frame_rng);
  return estimate_tail(opts, frame, oracle);
}

TailEstimate estimate_tail(const TailOptions& opts, const StiefelFrame& frame,
                           const LogMGFOracle& oracle) {
  if (frame.n() != opts.n || frame.k() != opts.k) {
    throw DimensionMismatch("estimate_tail: frame shape differs from (n, k)");
  }
  if (opts.p != oracle.p()) throw InvalidParameter("estimate_tail: oracle built for another p");
  if (!(opts.r >= 0.0)) throw InvalidParameter("estimate_tail needs r >= 0");
  if (opts.samples < kTailBatches) {
    throw InvalidParameter("estimate_tail needs at least " + std::to_string(kTailBatches) + " samples");
  }
  if (opts.threads < 1) throw InvalidParameter("threads must be >= 1");

  const int n = opts.n;
  const double p = opts.p;
  TailEstimate est;
  est.method = opts.method;
  est.target = opts.target;
  est.n = n;
  est.k = opts.k;
  est.p = p;
  est.r = opts.r;
  est.samples = opts.samples;
  est.seed = opts.seed;
  est.frame_seed = opts.frame_seed.value_or(opts.seed);
  const TiltMix mix = opts.mix.value_or(default_mix(p));
  est.mix = mix;
  if (opts.method == TailMethod::tilted && mix == TiltMix::sphere && p != 2.0) {
    throw InvalidParameter("the sphere tilt mix needs p = 2");
  }

  const RateResult rate =
      opts.target == TailTarget::iid ? rate_iid_norm(opts.r, oracle) : rate_norm2(opts.r, oracle);
  est.rate_prediction = rate.finite() ? rate.value : std::numeric_limits<double>::infinity();

  if (opts.r == 0.0) {
    est.p_hat = 1.0;
    est.log_rate = 0.0;
    est.ess = static_cast<double>(opts.samples);
    est.hits = opts.samples;
    return est;
  }

  const bool tilted = opts.method == TailMethod::tilted;
  std::vector<double> lambda(n, 0.0);
  double c_star = 0.0, v_star = 0.0, f_sum = 0.0;
  if (tilted) {
    if (!rate.finite()) {
      throw RefuseTilt("rate is infinite at r = " + std::to_string(opts.r) + ": no tilt exists");
    }
    v_star = rate.v_star;
    c_star = rate.c_star;
    if (rate.status == RateStatus::boundary_T) c_star = oracle.threshold() - 1e-6;
    for (int i = 0; i < n; ++i) {
      lambda[i] = v_star * std::sqrt(static_cast<double>(n)) * frame.cols()(i, 0);
      f_sum += oracle.logmgf_joint(lambda[i], c_star);
    }
  }
  est.v_star = v_star;
  est.c_star = c_star;

  const CoordinateSampler draw(oracle, lambda, c_star, tilted);
  const Eigen::MatrixXd at = frame.cols().transpose();
  const double sqrt_n = std::sqrt(static_cast<double>(n));
  const double r = opts.r;
  const TailTarget target = opts.target;
  const int k = opts.k;
  const double prec = 1.0 - 2.0 * c_star;
  const bool sphere_mix = tilted && mix == TiltMix::sphere;

  std::vector<BatchSums> sums(kTailBatches);
  run_batches(kTailBatches, opts.threads, [&](int b) {
    const std::int64_t size =
        opts.samples / kTailBatches + (b < opts.samples % kTailBatches ? 1 : 0);
    Rng rng = make_stream(opts.seed, 1 + static_cast<std::uint64_t>(b));
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXd x(n);
    Eigen::VectorXd theta(k);
    Eigen::VectorXd mean(n);
    BatchSums s;
    s.size = size;
    for (std::int64_t it = 0; it < size; ++it) {
      if (sphere_mix) {
        do {
          for (int j = 0; j < k; ++j) theta(j) = normal(rng);
        } while (theta.norm() == 0.0);
        mean.noalias() = frame.cols() * theta * (v_star * sqrt_n / (prec * theta.norm()));
      }
      double sign = 1.0;
      if (tilted && mix == TiltMix::antipodal && unif(rng) < 0.5) sign = -1.0;
      double eta_sum = 0.0;
      for (int i = 0; i < n; ++i) {
        const double xi =
            sphere_mix ? mean(i) + normal(rng) / std::sqrt(prec) : draw(static_cast<std::size_t>(i), sign, rng);
        x(i) = xi;
        eta_sum += p == 2.0 ? xi * xi : std::pow(std::abs(xi), p);
      }
      const Eigen::VectorXd w_raw = at * x;
      double radius = w_raw.norm() / sqrt_n;
      if (target != TailTarget::iid) radius *= std::pow(eta_sum / n, -1.0 / p);
      if (target == TailTarget::ball) radius *= std::pow(unif(rng), 1.0 / n);

      double weight = 1.0;
      if (tilted) {
        double lin = 0.0;
        switch (mix) {
          case TiltMix::axis: lin = v_star * sqrt_n * w_raw(0); break;
          case TiltMix::antipodal: lin = log_cosh(v_star * sqrt_n * w_raw(0)); break;
          case TiltMix::sphere: lin = log_sphere_mgf(k, v_star * w_raw.norm() * sqrt_n); break;
        }
        weight = std::exp(-(lin + c_star * eta_sum - f_sum));
      }
      s.w += weight;
      s.w2 += weight * weight;
      if (radius >= r) {
        s.event_w += weight;
        s.event_w2 += weight * weight;
        ++s.hits;
      }
    }
    sums[b] = s;
  });

  double total = 0.0, w = 0.0, w2 = 0.0, ew2 = 0.0;
  for (const auto& s : sums) {
    total += s.event_w;
    w += s.w;
    w2 += s.w2;
    ew2 += s.event_w2;
    est.hits += s.hits;
  }
  est.p_hat = total / static_cast<double>(opts.samples);
  est.ess = w2 > 0.0 ? w * w / w2 : 0.0;
  est.event_ess = ew2 > 0.0 ? total * total / ew2 : 0.0;
  est.weight_mean = w / static_cast<double>(opts.samples);

  double mean_of_means = 0.0;
  for (const auto& s : sums) mean_of_means += s.event_w / static_cast<double>(s.size);
  mean_of_means /= kTailBatches;
  double var = 0.0;
  for (const auto& s : sums) {
    const double d = s.event_w / static_cast<double>(s.size) - mean_of_means;
    var += d * d;
  }
  var /= (kTailBatches - 1);
  est.std_error = std::sqrt(var / kTailBatches);

  if (est.hits == 0 || est.p_hat <= 0.0) {
    est.zero_hits = true;
    est.p_hat = 0.0;
    est.std_error = 0.0;
    est.log_rate = std::numeric_limits<double>::infinity();
  } else {
    est.log_rate = -std::log(est.p_hat) / n;
  }
  return est;
}

namespace {

int k_from_gamma(int n, double gamma) {
  const double x = std::pow(static_cast<double>(n), gamma);
  const double rounded = std::round(x);
  const int k = std::abs(x - rounded) < 1e-9 ? static_cast<int>(rounded)
                                             : static_cast<int>(std::ceil(x));
  return std::clamp(k, 1, n);
}

}  // namespace

std::vector<SlopeRow> ldp_slope_table(std::span<const int> n_list, double gamma, double p,
                                      double r, std::int64_t samples, std::uint64_t seed,
                                      const LogMGFOracle& oracle, int threads) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw InvalidParameter("ldp_slope_table needs gamma in (0, 1)");
  std::vector<SlopeRow> rows;
  for (int n : n_list) {
    TailOptions o;
    o.n = n;
    o.k = k_from_gamma(n, gamma);
    o.p = p;
    o.r = r;
    o.samples = samples;
    o.method = TailMethod::tilted;
    o.target = TailTarget::ball;
    o.seed = seed;
    o.threads = threads;
    const TailEstimate e = estimate_tail(o, oracle);
    SlopeRow row;
    row.n = n;
    row.k = o.k;
    row.log_rate = e.log_rate;
    row.p_hat = e.p_hat;
    row.std_error = e.p_hat > 0.0 ? e.std_error / (n * e.p_hat) : 0.0;
    row.rate_prediction = e.rate_prediction;
    rows.push_back(row);
  }
  return rows;
}

void write_slope_csv(std::ostream& os, const std::vector<SlopeRow>& rows) {
  const auto old = os.precision(17);
  os << "n,k,log_rate,stderr,rate_prediction,p_hat\n";
  for (const auto& r : rows) {
    os << r.n << ',' << r.k << ',' << r.log_rate << ',' << r.std_error << ','
       << r.rate_prediction << ',' << r.p_hat << '\n';
  }
  os.precision(old);
}

double gaussian_approx_stat(const StiefelFrame& frame, const Eigen::MatrixXd& directions,
                            double D, double c, const LogMGFOracle& oracle) {
  if (directions.rows() != frame.k()) throw DimensionMismatch("directions must have k rows");
  const double target = lambda_D(D, c, oracle).value;
  double worst = 0.0;
  for (Eigen::Index j = 0; j < directions.cols(); ++j) {
    const Eigen::VectorXd v = directions.col(j);
    if (std::abs(v.norm() - D) > 1e-9 * std::max(1.0, D)) {
      throw InvalidParameter("every direction must have norm D");
    }
    const double fv = f_n(std::span<const double>(v.data(), static_cast<std::size_t>(v.size())),
                          frame, c, oracle);
    worst = std::max(worst, std::abs(fv - target));
  }
  return worst;
}

double gaussian_approx_stat(int n, int k, double D, double c, int directions,
                            const LogMGFOracle& oracle, std::uint64_t seed) {
  if (directions < 1) throw InvalidParameter("need at least one direction");
  if (!(D >= 0.0)) throw InvalidParameter("D must be nonnegative");
  if (static_cast<double>(directions) > std::exp(static_cast<double>(k))) {
    throw InvalidParameter("number of directions must not exceed e^k");
  }
  Rng frame_rng = make_stream(seed, 0);
  const StiefelFrame frame = haar_frame(n, k, frame_rng);
  Rng dir_rng = make_stream(seed, 1);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd dirs(k, directions);
  for (int j = 0; j < directions; ++j) {
    Eigen::VectorXd g(k);
    do {
      for (int i = 0; i < k; ++i) g(i) = normal(dir_rng);
    } while (g.norm() == 0.0);
    dirs.col(j) = D * g / g.norm();
  }
  return gaussian_approx_stat(frame, dirs, D, c, oracle);
}

nlohmann::json TightnessReport::to_json() const {
  nlohmann::json j;
  j["n"] = n;
  j["k"] = k;
  j["p"] = p;
  j["mean"] = mean;
  j["mean_se"] = mean_se;
  j["expected_mean"] = expected_mean;
  j["mean_ok"] = mean_ok;
  j["t"] = t_values;
  j["exceedance"] = exceedance;
  j["exceedance_se"] = exceedance_se;
  j["gamma_hat"] = gamma_hat;
  j["decay_ok"] = decay_ok;
  return j;
}

TightnessReport tightness_check(int n, int k, double p, std::int64_t samples, std::uint64_t seed,
                                const LogMGFOracle& oracle, int threads) {
  if (!(p >= 2.0)) throw InvalidParameter("tightness_check needs p >= 2");
  if (p != oracle.p()) throw InvalidParameter("tightness_check: oracle built for another p");
  if (samples < kTailBatches) throw InvalidParameter("tightness_check needs more samples");
  TightnessReport rep;
  rep.n = n;
  rep.k = k;
  rep.p = p;
  rep.expected_mean = oracle.sigma2() * k / n;

  Rng frame_rng = make_stream(seed, 0);
  const StiefelFrame frame = haar_frame(n, k, frame_rng);
  const Eigen::MatrixXd at = frame.cols().transpose();
  const PGaussDist& dist = oracle.dist();

  std::vector<double> batch_mean(kTailBatches);
  run_batches(kTailBatches, threads, [&](int b) {
    const std::int64_t size = samples / kTailBatches + (b < samples % kTailBatches ? 1 : 0);
    Rng rng = make_stream(seed, 1 + static_cast<std::uint64_t>(b));
    Eigen::VectorXd x(n);
    double acc = 0.0;
    for (std::int64_t it = 0; it < size; ++it) {
      for (int i = 0; i < n; ++i) x(i) = dist.sample(rng);
      acc += (at * x).squaredNorm() / n;
    }
    batch_mean[b] = acc / static_cast<double>(size);
  });
  double m = 0.0;
  for (double v : batch_mean) m += v;
  m /= kTailBatches;
  double var = 0.0;
  for (double v : batch_mean) var += (v - m) * (v - m);
  var /= (kTailBatches - 1);
  rep.mean = m;
  rep.mean_se = std::sqrt(var / kTailBatches);
  rep.mean_ok = std::abs(rep.mean - rep.expected_mean) <= 3.0 * rep.mean_se;

  rep.t_values = {0.25, 0.5};
  for (double t : rep.t_values) {
    TailOptions o;
    o.n = n;
    o.k = k;
    o.p = p;
    o.r = std::sqrt(1.0 + t);
    o.samples = samples;
    o.method = TailMethod::tilted;
    o.target = TailTarget::iid;
    o.seed = seed + 1;
    o.frame_seed = seed;
    o.threads = threads;
    const TailEstimate e = estimate_tail(o, frame, oracle);
    rep.exceedance.push_back(e.p_hat);
    rep.exceedance_se.push_back(e.std_error);
  }
  if (rep.exceedance[0] > 0.0 && rep.exceedance[1] > 0.0) {
    rep.gamma_hat = (std::log(rep.exceedance[0]) - std::log(rep.exceedance[1])) /
                    ((rep.t_values[1] - rep.t_values[0]) * n);
  }
  rep.decay_ok = rep.exceedance[1] < rep.exceedance[0] && rep.gamma_hat > 0.0;
  return rep;
}

}  // namespace qldp
