#pragma once

#include <array>
#include <functional>
#include <vector>

namespace qldp {

/// Piecewise Chebyshev interpolant of a vector-valued function on [lo, hi].
/// Panels are bisected until every component matches the sampled function
/// at off-node check points to within abs_tol + rel_tol * |f|.
template <std::size_t Components>
class PiecewiseChebyshev {
 public:
  using Value = std::array<double, Components>;
  using Function = std::function<Value(double)>;

  PiecewiseChebyshev() = default;

  /// `breaks` is the initial panel partition; panels are refined from there.
  PiecewiseChebyshev(const Function& f, std::vector<double> breaks, int degree,
                     double abs_tol, double rel_tol, int max_panels = 4096);

  double lower() const { return panels_.empty() ? 0.0 : panels_.front().lo; }
  double upper() const { return panels_.empty() ? 0.0 : panels_.back().hi; }
  bool contains(double x) const { return !panels_.empty() && x >= lower() && x <= upper(); }
  std::size_t panel_count() const { return panels_.size(); }

  /// Worst observed check-point error (max over components, relative to the tolerance).
  double max_check_error() const { return max_check_error_; }

  Value operator()(double x) const;

 private:
  struct Panel {
    double lo;
    double hi;
    std::vector<Value> coeffs;
  };

  Panel fit(const Function& f, double lo, double hi) const;
  static Value evaluate(const Panel& panel, double x);

  int degree_ = 0;
  double max_check_error_ = 0.0;
  std::vector<Panel> panels_;
};

}  // namespace qldp
