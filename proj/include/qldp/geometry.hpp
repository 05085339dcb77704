#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qldp/rng.hpp"

namespace qldp {

/// An orthonormal k-frame in R^n, stored as the n x k matrix of its columns.
class StiefelFrame {
 public:
  /// Throws InvalidParameter unless cols^T cols = I_k to within 1e-12.
  explicit StiefelFrame(Eigen::MatrixXd cols);

  int n() const { return static_cast<int>(cols_.rows()); }
  int k() const { return static_cast<int>(cols_.cols()); }
  const Eigen::MatrixXd& cols() const { return cols_; }

  /// max |cols^T cols - I|
  double orthonormality_error() const;

 private:
  Eigen::MatrixXd cols_;
};

/// Haar-distributed frame: QR of a Gaussian n x k matrix with the signs of
/// Q's columns flipped so that R has positive diagonal.
StiefelFrame haar_frame(int n, int k, Rng& rng);

/// n^{-1/2} cols^T y
Eigen::VectorXd project(const StiefelFrame& frame, std::span<const double> y);
Eigen::VectorXd project(const StiefelFrame& frame, const Eigen::VectorXd& y);

/// A point of the ordered-sequence space: nonzero entries only, sorted by
/// decreasing magnitude (equal magnitudes in decreasing signed order), plus a
/// radius r with ||w||_2 <= r.
struct OrderedProjection {
  std::vector<double> w;
  double r = 0.0;
};

OrderedProjection pi_map(std::span<const double> x);
OrderedProjection pi_map(const Eigen::VectorXd& x);

/// ||a.w - b.w||_inf + |a.r - b.r|, sequences zero-padded.
double dist_X(const OrderedProjection& a, const OrderedProjection& b);

/// Row-major CSV with 17 significant digits.
void write_frame_csv(std::ostream& os, const StiefelFrame& frame);
void write_projection_csv(std::ostream& os, const OrderedProjection& x);

}  // namespace qldp
