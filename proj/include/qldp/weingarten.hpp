#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

namespace qldp {

/// A perfect matching of {1, ..., 2d}, in canonical form: each pair (a, b)
/// has a < b and the pairs are listed by increasing first element.
struct PairPartition {
  int d = 0;
  std::vector<std::pair<int, int>> pairs;

  std::string to_string() const;  // "{(1,2),(3,4)}"
  friend bool operator==(const PairPartition&, const PairPartition&) = default;
};

/// Integer partition of d, parts in nonincreasing order.
using Partition = std::vector<int>;

struct CosetType {
  int loops = 0;
  Partition rho;
};

/// All pair partitions of {1..2d}, canonical and lexicographically sorted.
/// Supported for 1 <= d <= 5, otherwise UnsupportedDegree.
std::vector<PairPartition> pair_partitions(int d);

/// Components of the union graph of two matchings; rho lists the component
/// sizes halved, sorted descending.
CosetType coset_type(const PairPartition& m, const PairPartition& nn);

struct WeingartenTable {
  int d = 0;
  int n = 0;
  std::vector<PairPartition> partitions;
  Eigen::MatrixXd gram;  // n^{loops(m, nn)}
  Eigen::MatrixXd wg;    // pseudo-inverse of gram
  std::vector<std::vector<int>> coset_index;  // (i, j) -> index into coset_types
  std::vector<Partition> coset_types;
  std::vector<double> catalan;                // c_0 .. c_{d-1}
  Eigen::VectorXd wg_row_sums;

  const Partition& coset(int i, int j) const { return coset_types[coset_index[i][j]]; }
  nlohmann::json to_json() const;
};

/// Cached per (d, n); safe to call from several threads.
const WeingartenTable& weingarten_table(int d, int n);

/// E[a_{i1 j1} ... a_{i2d j2d}] for a Haar orthogonal n x n matrix, with
/// 1-based labels. Odd degree gives 0.
double haar_moment(std::span<const int> row_idx, std::span<const int> col_idx, int n);

/// E[g_{l1} ... g_{lm}] for independent standard Gaussians g labelled by l.
double wick_moment(std::span<const int> labels);

double catalan(int k);

/// Leading-order magnitude prod c_{rho_i - 1} n^{-2d + len(rho)}. The exact
/// entry carries the sign (-1)^{d - len(rho)}.
double weingarten_asymptotic(const Partition& rho, int n);

struct MomentMatch {
  double exact = 0.0;
  double gaussian = 0.0;
  double ratio = 1.0;
};

/// E[(sqrt(n) a_{1j})^alpha <u, sqrt(n) a_1>^beta] for the first row a_1 of a
/// Haar n x k frame (j is 1-based, u has length k), together with the same
/// moment for a standard Gaussian vector. alpha + beta <= 10.
MomentMatch moment_match_check(int alpha, int beta, int j, std::span<const double> u, int n,
                               int k);

/// Same quantity computed by the full multinomial expansion of <u, a_1>^beta
/// into haar_moment / wick_moment terms. Cost grows like |supp u|^beta.
MomentMatch moment_match_check_expanded(int alpha, int beta, int j, std::span<const double> u,
                                        int n, int k);

}  // namespace qldp
