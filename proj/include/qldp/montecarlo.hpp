#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "qldp/geometry.hpp"
#include "qldp/mgf_oracle.hpp"

namespace qldp {

/// (1/n) sum_i Lbar(<u, sqrt(n) a_i>, c) over the rows a_i of the frame.
double f_n(std::span<const double> u, const StiefelFrame& frame, double c,
           const LogMGFOracle& oracle);

enum class TailMethod { naive, tilted };
/// sphere: ||W|| L^{-1/p} >= r; ball: additionally times U^{1/n};
/// iid: ||W|| >= r for the raw i.i.d. vector. W = n^{-1/2} a^T X, L = n^{-1} sum |X_i|^p.
enum class TailTarget { sphere, ball, iid };

/// Direction law of the tilt u = v* theta.
/// axis: theta = e_1 only.
/// antipodal: theta = +e_1 or -e_1 with probability 1/2 each; exact for every p.
/// sphere: theta uniform on the unit sphere of R^k, weighted by the mixture
/// density through a Bessel function; exact for p = 2 only.
/// The default picks sphere at p = 2 and antipodal otherwise.
enum class TiltMix { axis, antipodal, sphere };

std::string to_string(TailMethod m);
std::string to_string(TailTarget t);
std::string to_string(TiltMix m);
TailMethod parse_method(const std::string& s);
TailTarget parse_target(const std::string& s);
TiltMix parse_mix(const std::string& s);
TiltMix default_mix(double p);

/// log E exp(kappa theta_1) for theta uniform on the unit sphere of R^k.
double log_sphere_mgf(int k, double kappa);

struct TailOptions {
  int n = 100;
  int k = 10;
  double p = 2.0;
  double r = 0.3;
  std::int64_t samples = 100000;
  TailMethod method = TailMethod::tilted;
  TailTarget target = TailTarget::ball;
  std::uint64_t seed = 1;
  /// Seed of the quenched frame; defaults to `seed`.
  std::optional<std::uint64_t> frame_seed;
  std::optional<TiltMix> mix;
  int threads = 1;
};

/// Number of batch-means batches. Batch b draws from make_stream(seed, 1 + b);
/// the frame comes from make_stream(frame_seed, 0).
inline constexpr int kTailBatches = 32;

struct TailEstimate {
  TailMethod method = TailMethod::naive;
  TailTarget target = TailTarget::ball;
  TiltMix mix = TiltMix::axis;
  int n = 0;
  int k = 0;
  double p = 0.0;
  double r = 0.0;
  std::int64_t samples = 0;
  double p_hat = 0.0;
  double log_rate = 0.0;   // -(1/n) log p_hat
  double std_error = 0.0;  // of p_hat, by batch means
  double ess = 0.0;        // (sum w)^2 / sum w^2 over all draws
  double event_ess = 0.0;  // the same over draws inside the event
  double weight_mean = 0.0;
  std::int64_t hits = 0;
  bool zero_hits = false;
  std::uint64_t seed = 0;
  std::uint64_t frame_seed = 0;
  double v_star = 0.0;
  double c_star = 0.0;
  double rate_prediction = 0.0;

  nlohmann::json to_json() const;
};

/// Tail probability under a quenched Haar frame drawn from the frame seed.
/// Tilted mode throws RefuseTilt when the rate at r is infinite.
TailEstimate estimate_tail(const TailOptions& opts, const LogMGFOracle& oracle);
TailEstimate estimate_tail(const TailOptions& opts, const StiefelFrame& frame,
                           const LogMGFOracle& oracle);

struct SlopeRow {
  int n = 0;
  int k = 0;
  double log_rate = 0.0;
  double std_error = 0.0;  // of log_rate, by the delta method
  double rate_prediction = 0.0;
  double p_hat = 0.0;
};

/// One tilted ball estimate per n with k = ceil(n^gamma).
std::vector<SlopeRow> ldp_slope_table(std::span<const int> n_list, double gamma, double p,
                                      double r, std::int64_t samples, std::uint64_t seed,
                                      const LogMGFOracle& oracle, int threads = 1);

void write_slope_csv(std::ostream& os, const std::vector<SlopeRow>& rows);

/// max_j |f_n(v_j, a, c) - lambda_D(D, c)| over the columns v_j of `directions`
/// (each of norm D).
double gaussian_approx_stat(const StiefelFrame& frame, const Eigen::MatrixXd& directions,
                            double D, double c, const LogMGFOracle& oracle);

/// Haar frame from make_stream(seed, 0), `directions` random directions of
/// norm D from make_stream(seed, 1).
double gaussian_approx_stat(int n, int k, double D, double c, int directions,
                            const LogMGFOracle& oracle, std::uint64_t seed);

struct TightnessReport {
  int n = 0;
  int k = 0;
  double p = 0.0;
  double mean = 0.0;
  double mean_se = 0.0;
  double expected_mean = 0.0;  // sigma_p^2 k / n
  bool mean_ok = false;
  std::vector<double> t_values;
  std::vector<double> exceedance;
  std::vector<double> exceedance_se;
  double gamma_hat = 0.0;
  bool decay_ok = false;

  nlohmann::json to_json() const;
};

/// Mean of ||n^{-1/2} a^T X||^2 by plain sampling, and P(||.||^2 >= t + 1)
/// for t in {0.25, 0.5} by tilted i.i.d. estimates, with
/// gamma_hat = (log P(0.25) - log P(0.5)) / (0.25 n).
TightnessReport tightness_check(int n, int k, double p, std::int64_t samples,
                                std::uint64_t seed, const LogMGFOracle& oracle, int threads = 1);

}  // namespace qldp
