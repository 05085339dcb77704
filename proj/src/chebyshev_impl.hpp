#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qldp/chebyshev.hpp"
#include "qldp/errors.hpp"

namespace qldp {

template <std::size_t C>
typename PiecewiseChebyshev<C>::Panel PiecewiseChebyshev<C>::fit(const Function& f, double lo,
                                                                  double hi) const {
  const int m = degree_ + 1;
  std::vector<Value> samples(m);
  for (int j = 0; j < m; ++j) {
    const double theta = std::numbers::pi * (j + 0.5) / m;
    const double x = 0.5 * (lo + hi) + 0.5 * (hi - lo) * std::cos(theta);
    samples[j] = f(x);
  }
  Panel panel{lo, hi, std::vector<Value>(m)};
  for (int k = 0; k < m; ++k) {
    Value acc{};
    for (int j = 0; j < m; ++j) {
      const double w = std::cos(std::numbers::pi * k * (j + 0.5) / m);
      for (std::size_t c = 0; c < C; ++c) acc[c] += w * samples[j][c];
    }
    const double scale = (k == 0 ? 1.0 : 2.0) / m;
    for (std::size_t c = 0; c < C; ++c) panel.coeffs[k][c] = scale * acc[c];
  }
  return panel;
}

template <std::size_t C>
typename PiecewiseChebyshev<C>::Value PiecewiseChebyshev<C>::evaluate(const Panel& panel,
                                                                      double x) {
  // Clenshaw recurrence
  const double u = (2.0 * x - panel.lo - panel.hi) / (panel.hi - panel.lo);
  Value b1{}, b2{};
  for (std::size_t k = panel.coeffs.size() - 1; k >= 1; --k) {
    Value b0;
    for (std::size_t c = 0; c < C; ++c) b0[c] = 2.0 * u * b1[c] - b2[c] + panel.coeffs[k][c];
    b2 = b1;
    b1 = b0;
  }
  Value out;
  for (std::size_t c = 0; c < C; ++c) out[c] = u * b1[c] - b2[c] + panel.coeffs[0][c];
  return out;
}

template <std::size_t C>
PiecewiseChebyshev<C>::PiecewiseChebyshev(const Function& f, std::vector<double> breaks,
                                          int degree, double abs_tol, double rel_tol,
                                          int max_panels)
    : degree_(degree) {
  if (breaks.size() < 2 || degree < 2) throw InvalidParameter("PiecewiseChebyshev: bad layout");
  std::sort(breaks.begin(), breaks.end());

  // Depth-first refinement keeps panels ordered left to right.
  std::vector<std::pair<double, double>> stack;
  for (std::size_t i = breaks.size() - 1; i >= 1; --i) stack.emplace_back(breaks[i - 1], breaks[i]);

  constexpr int kChecks = 7;
  while (!stack.empty()) {
    auto [lo, hi] = stack.back();
    stack.pop_back();
    Panel panel = fit(f, lo, hi);
    double worst = 0.0;
    for (int i = 0; i < kChecks; ++i) {
      const double x = lo + (hi - lo) * (i + 0.3183) / kChecks;
      const Value exact = f(x);
      const Value approx = evaluate(panel, x);
      for (std::size_t c = 0; c < C; ++c) {
        const double tol = abs_tol + rel_tol * std::abs(exact[c]);
        worst = std::max(worst, std::abs(exact[c] - approx[c]) / tol);
      }
    }
    if (worst > 1.0 && static_cast<int>(panels_.size() + stack.size()) < max_panels &&
        hi - lo > 1e-6 * std::max(1.0, std::abs(hi))) {
      const double mid = 0.5 * (lo + hi);
      stack.emplace_back(mid, hi);
      stack.emplace_back(lo, mid);
      continue;
    }
    max_check_error_ = std::max(max_check_error_, worst);
    panels_.push_back(std::move(panel));
  }
}

template <std::size_t C>
typename PiecewiseChebyshev<C>::Value PiecewiseChebyshev<C>::operator()(double x) const {
  auto it = std::upper_bound(panels_.begin(), panels_.end(), x,
                             [](double v, const Panel& p) { return v < p.hi; });
  if (it == panels_.end()) --it;
  return evaluate(*it, x);
}

}  // namespace qldp
