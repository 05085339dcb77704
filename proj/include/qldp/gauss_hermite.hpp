#pragma once

#include <vector>

namespace qldp {

/// Gauss-Hermite rule for E[f(g)], g ~ N(0, 1). Nodes are symmetric and
/// sorted ascending; weights sum to 1.
class GaussianQuadrature {
 public:
  explicit GaussianQuadrature(int nodes = 128);

  int size() const { return static_cast<int>(nodes_.size()); }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }

  template <class F>
  double expect(F&& f) const {
    double s = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) s += weights_[i] * f(nodes_[i]);
    return s;
  }

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

/// Shared 128-node rule.
const GaussianQuadrature& standard_gaussian_rule();

}  // namespace qldp
