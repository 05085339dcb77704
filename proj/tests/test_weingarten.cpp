#include <doctest.h>

#include <cmath>
#include <set>

#include "qldp/errors.hpp"
#include "qldp/geometry.hpp"
#include "qldp/weingarten.hpp"
#include "support.hpp"

using namespace qldp;
using qldp::test::rel_err;

TEST_CASE("pair partitions") {
  const std::size_t sizes[] = {1, 3, 15, 105, 945};
  for (int d = 1; d <= 5; ++d) {
    const auto parts = pair_partitions(d);
    CHECK(parts.size() == sizes[d - 1]);
    std::set<std::string> seen;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      const auto& m = parts[i];
      std::vector<int> used(2 * d + 1, 0);
      for (std::size_t q = 0; q < m.pairs.size(); ++q) {
        CHECK(m.pairs[q].first < m.pairs[q].second);
        if (q) CHECK(m.pairs[q - 1].first < m.pairs[q].first);
        ++used[m.pairs[q].first];
        ++used[m.pairs[q].second];
      }
      for (int v = 1; v <= 2 * d; ++v) CHECK(used[v] == 1);
      seen.insert(m.to_string());
      if (i) CHECK(parts[i - 1].pairs < m.pairs);
    }
    CHECK(seen.size() == parts.size());
  }
  CHECK(pair_partitions(1)[0].to_string() == "{(1,2)}");
  CHECK_THROWS_AS(pair_partitions(0), UnsupportedDegree);
  CHECK_THROWS_AS(pair_partitions(6), UnsupportedDegree);
}

TEST_CASE("coset types") {
  const PairPartition a{2, {{1, 2}, {3, 4}}}, b{2, {{1, 3}, {2, 4}}};
  CosetType t = coset_type(a, a);
  CHECK(t.loops == 2);
  CHECK(t.rho == Partition{1, 1});
  t = coset_type(a, b);
  CHECK(t.loops == 1);
  CHECK(t.rho == Partition{2});
  const PairPartition one{1, {{1, 2}}};
  t = coset_type(one, one);
  CHECK(t.loops == 1);
  CHECK(t.rho == Partition{1});
  CHECK_THROWS_AS(coset_type(one, a), DimensionMismatch);
}

TEST_CASE("weingarten tables") {
  for (int n : {2, 10, 50}) {
    const auto& t1 = weingarten_table(1, n);
    CHECK(t1.wg(0, 0) == doctest::Approx(1.0 / n).epsilon(1e-14));
  }
  for (int n : {4, 10, 50, 200}) {
    const auto& t = weingarten_table(2, n);
    const double nn = n;
    for (int i = 0; i < 3; ++i) {
      CHECK(t.gram(i, i) == nn * nn);
      for (int j = 0; j < 3; ++j) {
        const double expected = i == j ? (nn + 1) / (nn * (nn - 1) * (nn + 2)) : -1.0 / (nn * (nn - 1) * (nn + 2));
        CHECK(rel_err(t.wg(i, j), expected) < 1e-12);
      }
    }
  }
  // exact d = 3 entries by coset type, from rational arithmetic
  for (int n : {6, 10, 50, 200}) {
    const double x = n;
    const auto& t = weingarten_table(3, n);
    for (int i = 0; i < 15; ++i) {
      for (int j = 0; j < 15; ++j) {
        const Partition& rho = t.coset(i, j);
        double expected;
        if (rho == Partition{1, 1, 1}) expected = (x * x + 3 * x - 2) / (x * (x - 2) * (x - 1) * (x + 2) * (x + 4));
        else if (rho == Partition{2, 1}) expected = -1.0 / (x * (x - 2) * (x - 1) * (x + 4));
        else expected = 2.0 / (x * (x - 2) * (x - 1) * (x + 2) * (x + 4));
        CHECK(rel_err(t.wg(i, j), expected) < 1e-10);
      }
    }
  }
  CHECK(weingarten_table(3, 10).wg(0, 0) == doctest::Approx(1.0 / 945).epsilon(1e-12));
}

TEST_CASE("table invariants") {
  for (int d = 1; d <= 4; ++d) {
    for (int n : {2 * d, 10, 50, 200}) {
      const auto& t = weingarten_table(d, n);
      const Eigen::MatrixXd& g = t.gram;
      const Eigen::MatrixXd& w = t.wg;
      CHECK((g - g.transpose()).cwiseAbs().maxCoeff() == 0.0);
      for (Eigen::Index i = 0; i < g.rows(); ++i) CHECK(g(i, i) == std::pow(static_cast<double>(n), d));
      CHECK((w * g * w - w).cwiseAbs().maxCoeff() <= 1e-8 * w.cwiseAbs().maxCoeff());
      CHECK((g * w * g - g).cwiseAbs().maxCoeff() <= 1e-8 * g.cwiseAbs().maxCoeff());
      if (d <= 3) {
        // wg depends only on the coset type
        std::map<Partition, double> by_type;
        for (Eigen::Index i = 0; i < w.rows(); ++i)
          for (Eigen::Index j = 0; j < w.cols(); ++j) {
            const auto [it, fresh] = by_type.try_emplace(t.coset(static_cast<int>(i), static_cast<int>(j)), w(i, j));
            if (!fresh) CHECK(std::abs(it->second - w(i, j)) <= 1e-12 * w.cwiseAbs().maxCoeff());
          }
      }
      REQUIRE(t.catalan.size() == static_cast<std::size_t>(d));
    }
  }
  // degenerate n: pseudo-inverse identities still hold
  const auto& small = weingarten_table(3, 2);
  CHECK((small.gram * small.wg * small.gram - small.gram).cwiseAbs().maxCoeff() <= 1e-8 * small.gram.cwiseAbs().maxCoeff());
}

TEST_CASE("haar moments") {
  for (int n : {10, 50, 200}) {
    const double x = n;
    CHECK(haar_moment(std::vector{1, 1}, std::vector{1, 1}, n) == doctest::Approx(1.0 / x).epsilon(1e-14));
    CHECK(haar_moment(std::vector{1, 1}, std::vector{1, 2}, n) == 0.0);
    CHECK(rel_err(haar_moment(std::vector{1, 1, 1, 1}, std::vector{1, 1, 1, 1}, n), 3.0 / (x * (x + 2))) < 1e-12);
    CHECK(rel_err(haar_moment(std::vector(6, 1), std::vector(6, 1), n), 15.0 / (x * (x + 2) * (x + 4))) < 1e-10);
    // E[a11^2 a12^2] = 1/(n(n+2))
    CHECK(rel_err(haar_moment(std::vector{1, 1, 1, 1}, std::vector{1, 1, 2, 2}, n), 1.0 / (x * (x + 2))) < 1e-12);
    // E[a11^2 a22^2] = (n+1)/(n(n-1)(n+2))
    CHECK(rel_err(haar_moment(std::vector{1, 1, 2, 2}, std::vector{1, 1, 2, 2}, n), (x + 1) / (x * (x - 1) * (x + 2))) <
          1e-12);
  }
  CHECK(haar_moment(std::vector{1, 1, 1}, std::vector{1, 1, 1}, 10) == 0.0);
  CHECK(haar_moment(std::vector<int>{}, std::vector<int>{}, 10) == 1.0);
  CHECK_THROWS_AS(haar_moment(std::vector{1, 1}, std::vector{1}, 10), DimensionMismatch);
  CHECK_THROWS_AS(haar_moment(std::vector(12, 1), std::vector(12, 1), 10), UnsupportedDegree);
  CHECK(weingarten_table(2, 50).to_json()["partitions"][1] == "{(1,3),(2,4)}");
}

TEST_CASE("relabeling symmetry") {
  const std::vector rows{1, 2, 1, 3, 2, 3}, cols{4, 4, 2, 2, 5, 5};
  const double base = haar_moment(rows, cols, 10);
  std::vector r2 = rows, c2 = cols;
  for (int& v : r2) v = v == 1 ? 3 : v == 3 ? 1 : v;
  for (int& v : c2) v = v == 4 ? 7 : v == 2 ? 1 : v;
  CHECK(haar_moment(r2, c2, 10) == doctest::Approx(base).epsilon(1e-12));
  // transposition swaps the roles of rows and columns
  CHECK(haar_moment(cols, rows, 10) == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("haar moments against Monte Carlo frames") {
  const int n = 6, draws = 200000;
  Rng rng = make_stream(30, 0);
  // degree <= 4 monomials of the first row of a 6 x 3 frame
  const std::vector<std::vector<int>> monomials{{1, 1}, {1, 2}, {1, 1, 1, 1}, {1, 1, 2, 2}, {1, 1, 1, 2}, {1, 2, 3, 3}};
  std::vector<std::vector<double>> samples(monomials.size());
  for (int t = 0; t < draws; ++t) {
    const StiefelFrame f = haar_frame(n, 3, rng);
    for (std::size_t m = 0; m < monomials.size(); ++m) {
      double v = 1.0;
      for (int c : monomials[m]) v *= f.cols()(0, c - 1);
      samples[m].push_back(v);
    }
  }
  for (std::size_t m = 0; m < monomials.size(); ++m) {
    const std::vector<int> rows(monomials[m].size(), 1);
    const double exact = haar_moment(rows, monomials[m], n);
    const auto ms = test::mean_se(samples[m]);
    CHECK(std::abs(ms.mean - exact) <= 4 * ms.se);
  }
}

TEST_CASE("wick moments and catalan numbers") {
  CHECK(wick_moment(std::vector{1, 1, 1, 1}) == 3.0);
  CHECK(wick_moment(std::vector{1, 1, 2, 2}) == 1.0);
  CHECK(wick_moment(std::vector(6, 1)) == 15.0);
  CHECK(wick_moment(std::vector{1, 2}) == 0.0);
  CHECK(wick_moment(std::vector(10, 4)) == 945.0);
  const double cat[] = {1, 1, 2, 5, 14, 42};
  for (int k = 0; k < 6; ++k) CHECK(catalan(k) == cat[k]);
}

TEST_CASE("weingarten asymptotics") {
  CHECK(weingarten_asymptotic({1}, 37) == doctest::Approx(1.0 / 37).epsilon(1e-15));
  const int n = 100;
  const double x = n;
  CHECK(weingarten_asymptotic({1, 1}, n) == doctest::Approx(1e-4).epsilon(1e-15));
  const auto& t = weingarten_table(2, n);
  CHECK(std::abs(t.wg(0, 0) / weingarten_asymptotic({1, 1}, n) - 1.0) < 3.0 / x);
  CHECK(std::abs(std::abs(t.wg(0, 1)) / weingarten_asymptotic({2}, n) - 1.0) < 3.0 / x);
  // d = 3 with sign (-1)^{d - len(rho)}
  const auto& t3 = weingarten_table(3, n);
  for (int j = 0; j < 15; ++j) {
    const Partition& rho = t3.coset(0, j);
    const double sign = (3 - rho.size()) % 2 ? -1.0 : 1.0;
    CHECK(std::abs(t3.wg(0, j) / (sign * weingarten_asymptotic(rho, n)) - 1.0) < 10.0 / x);
  }
}

TEST_CASE("moment matching") {
  const std::vector<double> e1{1.0, 0.0};
  MomentMatch m = moment_match_check(2, 0, 1, e1, 50, 2);
  CHECK(m.exact == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(m.gaussian == 1.0);
  m = moment_match_check(4, 0, 1, e1, 50, 2);
  CHECK(m.exact == doctest::Approx(150.0 / 52.0).epsilon(1e-12));
  CHECK(m.gaussian == 3.0);
  CHECK(m.ratio == doctest::Approx(50.0 / 52.0).epsilon(1e-12));
  m = moment_match_check(3, 2, 1, e1, 50, 2);
  CHECK(m.exact == 0.0);
  CHECK(m.gaussian == 0.0);
  CHECK_THROWS_AS(moment_match_check(6, 6, 1, e1, 50, 2), UnsupportedDegree);

  // factorized and fully expanded routes agree
  const std::vector<double> u{0.6, -0.3, 0.74};
  for (auto [a, b] : {std::pair{0, 2}, std::pair{2, 2}, std::pair{1, 3}, std::pair{0, 4}, std::pair{4, 2}, std::pair{3, 3}}) {
    const MomentMatch f = moment_match_check(a, b, 2, u, 12, 3);
    const MomentMatch e = moment_match_check_expanded(a, b, 2, u, 12, 3);
    CHECK(rel_err(f.exact, e.exact) < 1e-10);
    CHECK(rel_err(f.gaussian, e.gaussian) < 1e-12);
  }
  // O(1/n): n |ratio - 1| stays bounded
  for (int d = 1; d <= 3; ++d) {
    for (auto [a, b] : {std::pair{2 * d, 0}, std::pair{d, d}, std::pair{0, 2 * d}}) {
      if ((a + b) % 2) continue;
      double lo = 1e300, hi = 0;
      for (int n : {10, 50, 200}) {
        const double s = n * std::abs(moment_match_check(a, b, 1, u, n, 3).ratio - 1.0);
        lo = std::min(lo, s);
        hi = std::max(hi, s);
      }
      CHECK(hi < 40.0);
      if (lo > 1e-8) CHECK(hi / lo < 2.0);
    }
  }
}
