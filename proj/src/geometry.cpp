#include "qldp/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>

#include "qldp/errors.hpp"

namespace qldp {

StiefelFrame::StiefelFrame(Eigen::MatrixXd cols) : cols_(std::move(cols)) {
  if (cols_.cols() < 1 || cols_.cols() > cols_.rows()) {
    throw InvalidParameter("frame needs 1 <= k <= n");
  }
  if (orthonormality_error() > 1e-12) {
    throw InvalidParameter("frame columns are not orthonormal");
  }
}

double StiefelFrame::orthonormality_error() const {
  const Eigen::MatrixXd gram = cols_.transpose() * cols_;
  return (gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
}

StiefelFrame haar_frame(int n, int k, Rng& rng) {
  if (k < 1 || k > n) throw InvalidParameter("haar_frame needs 1 <= k <= n");
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd g(n, k);
  for (;;) {
    for (int j = 0; j < k; ++j)
      for (int i = 0; i < n; ++i) g(i, j) = normal(rng);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    const Eigen::MatrixXd r = qr.matrixQR().topLeftCorner(k, k).triangularView<Eigen::Upper>();
    const double scale = r.diagonal().cwiseAbs().maxCoeff();
    if (!(r.diagonal().cwiseAbs().minCoeff() > 1e-12 * scale)) continue;
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, k);
    for (int j = 0; j < k; ++j) {
      if (r(j, j) < 0) q.col(j) = -q.col(j);
    }
    return StiefelFrame(std::move(q));
  }
}

Eigen::VectorXd project(const StiefelFrame& frame, std::span<const double> y) {
  if (static_cast<int>(y.size()) != frame.n()) {
    throw DimensionMismatch("project: vector length does not match frame dimension");
  }
  const Eigen::Map<const Eigen::VectorXd> yv(y.data(), static_cast<Eigen::Index>(y.size()));
  return frame.cols().transpose() * yv / std::sqrt(static_cast<double>(frame.n()));
}

Eigen::VectorXd project(const StiefelFrame& frame, const Eigen::VectorXd& y) {
  return project(frame, std::span<const double>(y.data(), static_cast<std::size_t>(y.size())));
}

OrderedProjection pi_map(std::span<const double> x) {
  OrderedProjection out;
  double ss = 0.0;
  for (double v : x) {
    ss += v * v;
    if (v != 0.0) out.w.push_back(v);
  }
  std::stable_sort(out.w.begin(), out.w.end(), [](double a, double b) {
    const double aa = std::abs(a), ab = std::abs(b);
    if (aa != ab) return aa > ab;
    return a > b;
  });
  out.r = std::sqrt(ss);
  return out;
}

OrderedProjection pi_map(const Eigen::VectorXd& x) {
  return pi_map(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())));
}

double dist_X(const OrderedProjection& a, const OrderedProjection& b) {
  const std::size_t len = std::max(a.w.size(), b.w.size());
  double sup = 0.0;
  for (std::size_t i = 0; i < len; ++i) {
    const double x = i < a.w.size() ? a.w[i] : 0.0;
    const double y = i < b.w.size() ? b.w[i] : 0.0;
    sup = std::max(sup, std::abs(x - y));
  }
  return sup + std::abs(a.r - b.r);
}

void write_frame_csv(std::ostream& os, const StiefelFrame& frame) {
  const auto old = os.precision(17);
  const Eigen::MatrixXd& m = frame.cols();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) os << ',';
      os << m(i, j);
    }
    os << '\n';
  }
  os.precision(old);
}

void write_projection_csv(std::ostream& os, const OrderedProjection& x) {
  const auto old = os.precision(17);
  os << "r," << x.r << '\n' << "w";
  for (double v : x.w) os << ',' << v;
  os << '\n';
  os.precision(old);
}

}  // namespace qldp
