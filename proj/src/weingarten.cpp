#include "qldp/weingarten.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <limits>
#include <numeric>
#include <sstream>

#include "qldp/errors.hpp"

namespace qldp {

namespace {

void check_degree(int d) {
  if (d < 1 || d > 5) throw UnsupportedDegree("pair partitions are supported for 1 <= d <= 5");
}

void extend(std::vector<int>& free, std::vector<std::pair<int, int>>& cur, int d,
            std::vector<PairPartition>& out) {
  if (free.empty()) {
    out.push_back(PairPartition{d, cur});
    return;
  }
  const int first = free.front();
  for (std::size_t k = 1; k < free.size(); ++k) {
    const int second = free[k];
    std::vector<int> rest;
    rest.reserve(free.size() - 2);
    for (std::size_t i = 1; i < free.size(); ++i)
      if (i != k) rest.push_back(free[i]);
    cur.emplace_back(first, second);
    extend(rest, cur, d, out);
    cur.pop_back();
  }
}

// For each partition, does every pair join equal labels?
bool respects(const PairPartition& m, std::span<const int> labels) {
  for (const auto& [a, b] : m.pairs)
    if (labels[a - 1] != labels[b - 1]) return false;
  return true;
}

double odd_double_factorial(int m) {  // (m-1)!! for even m
  double r = 1.0;
  for (int i = m - 1; i > 1; i -= 2) r *= i;
  return r;
}

}  // namespace

std::string PairPartition::to_string() const {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (i) os << ',';
    os << '(' << pairs[i].first << ',' << pairs[i].second << ')';
  }
  os << '}';
  return os.str();
}

std::vector<PairPartition> pair_partitions(int d) {
  check_degree(d);
  std::vector<int> free(2 * d);
  std::iota(free.begin(), free.end(), 1);
  std::vector<std::pair<int, int>> cur;
  std::vector<PairPartition> out;
  extend(free, cur, d, out);
  return out;
}

CosetType coset_type(const PairPartition& m, const PairPartition& nn) {
  if (m.d != nn.d) throw DimensionMismatch("coset_type: partitions of different degree");
  const int size = 2 * m.d;
  std::vector<int> partner_m(size), partner_n(size);
  for (const auto& [a, b] : m.pairs) { partner_m[a - 1] = b - 1; partner_m[b - 1] = a - 1; }
  for (const auto& [a, b] : nn.pairs) { partner_n[a - 1] = b - 1; partner_n[b - 1] = a - 1; }

  // Every vertex has one m-edge and one n-edge, so components are cycles
  // alternating between the two matchings.
  std::vector<bool> seen(size, false);
  CosetType out;
  for (int start = 0; start < size; ++start) {
    if (seen[start]) continue;
    int len = 0, v = start;
    bool use_m = true;
    while (!seen[v]) {
      seen[v] = true;
      ++len;
      v = use_m ? partner_m[v] : partner_n[v];
      use_m = !use_m;
    }
    ++out.loops;
    out.rho.push_back(len / 2);
  }
  std::sort(out.rho.begin(), out.rho.end(), std::greater<>());
  return out;
}

double catalan(int k) {
  if (k < 0) throw InvalidParameter("catalan index must be nonnegative");
  double c = 1.0;
  for (int i = 0; i < k; ++i) c = c * 2.0 * (2 * i + 1) / (i + 2);
  return c;
}

namespace {

std::unique_ptr<WeingartenTable> build_table(int d, int n) {
  auto t = std::make_unique<WeingartenTable>();
  t->d = d;
  t->n = n;
  t->partitions = pair_partitions(d);
  const int m = static_cast<int>(t->partitions.size());
  t->gram.resize(m, m);
  t->coset_index.assign(m, std::vector<int>(m, 0));
  std::map<Partition, int> ids;
  for (int i = 0; i < m; ++i) {
    for (int j = i; j < m; ++j) {
      const CosetType ct = coset_type(t->partitions[i], t->partitions[j]);
      const double g = std::pow(static_cast<double>(n), ct.loops);
      t->gram(i, j) = g;
      t->gram(j, i) = g;
      auto [it, inserted] = ids.try_emplace(ct.rho, static_cast<int>(t->coset_types.size()));
      if (inserted) t->coset_types.push_back(ct.rho);
      t->coset_index[i][j] = it->second;
      t->coset_index[j][i] = it->second;
    }
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(t->gram);
  const Eigen::VectorXd& ev = eig.eigenvalues();
  const double cutoff = 1e-10 * ev.cwiseAbs().maxCoeff();
  Eigen::VectorXd inv(ev.size());
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    inv(i) = std::abs(ev(i)) > cutoff ? 1.0 / ev(i) : 0.0;
  const Eigen::MatrixXd& v = eig.eigenvectors();
  t->wg = v * inv.asDiagonal() * v.transpose();
  t->wg = 0.5 * (t->wg + t->wg.transpose()).eval();
  t->wg_row_sums = t->wg.rowwise().sum();

  for (int i = 0; i < d; ++i) t->catalan.push_back(catalan(i));
  return t;
}

}  // namespace

const WeingartenTable& weingarten_table(int d, int n) {
  check_degree(d);
  if (n < 1) throw InvalidParameter("weingarten_table needs n >= 1");
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::unique_ptr<WeingartenTable>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{d, n}];
  if (!slot) slot = build_table(d, n);
  return *slot;
}

nlohmann::json WeingartenTable::to_json() const {
  nlohmann::json j;
  j["d"] = d;
  j["n"] = n;
  std::vector<std::string> names;
  for (const auto& p : partitions) names.push_back(p.to_string());
  j["partitions"] = names;
  j["catalan"] = catalan;
  const auto rows = static_cast<int>(partitions.size());
  nlohmann::json g = nlohmann::json::array(), w = nlohmann::json::array(),
                 c = nlohmann::json::array();
  for (int i = 0; i < rows; ++i) {
    std::vector<double> gr(rows), wr(rows);
    std::vector<Partition> cr(rows);
    for (int k = 0; k < rows; ++k) {
      gr[k] = gram(i, k);
      wr[k] = wg(i, k);
      cr[k] = coset(i, k);
    }
    g.push_back(gr);
    w.push_back(wr);
    c.push_back(cr);
  }
  j["gram"] = g;
  j["wg"] = w;
  j["coset"] = c;
  return j;
}

double haar_moment(std::span<const int> row_idx, std::span<const int> col_idx, int n) {
  if (row_idx.size() != col_idx.size()) {
    throw DimensionMismatch("haar_moment: row and column index lists differ in length");
  }
  if (n < 1) throw InvalidParameter("haar_moment needs n >= 1");
  for (int i : row_idx)
    if (i < 1 || i > n) throw InvalidParameter("haar_moment: row index out of range");
  for (int j : col_idx)
    if (j < 1 || j > n) throw InvalidParameter("haar_moment: column index out of range");
  if (row_idx.empty()) return 1.0;
  if (row_idx.size() % 2 != 0) return 0.0;
  const int d = static_cast<int>(row_idx.size() / 2);
  const WeingartenTable& t = weingarten_table(d, n);
  const int m = static_cast<int>(t.partitions.size());

  std::vector<int> cols;
  for (int b = 0; b < m; ++b)
    if (respects(t.partitions[b], col_idx)) cols.push_back(b);
  if (cols.empty()) return 0.0;

  const bool rows_equal =
      std::all_of(row_idx.begin(), row_idx.end(), [&](int i) { return i == row_idx[0]; });
  double sum = 0.0;
  if (rows_equal) {
    for (int b : cols) sum += t.wg_row_sums(b);
    return sum;
  }
  for (int a = 0; a < m; ++a) {
    if (!respects(t.partitions[a], row_idx)) continue;
    for (int b : cols) sum += t.wg(a, b);
  }
  return sum;
}

double wick_moment(std::span<const int> labels) {
  std::map<int, int> counts;
  for (int l : labels) ++counts[l];
  double r = 1.0;
  for (const auto& [label, c] : counts) {
    if (c % 2 != 0) return 0.0;
    r *= odd_double_factorial(c);
  }
  return r;
}

double weingarten_asymptotic(const Partition& rho, int n) {
  const int d = std::accumulate(rho.begin(), rho.end(), 0);
  check_degree(d);
  double c = 1.0;
  for (int part : rho) {
    if (part < 1) throw InvalidParameter("partition parts must be positive");
    c *= catalan(part - 1);
  }
  return c * std::pow(static_cast<double>(n), -2 * d + static_cast<int>(rho.size()));
}

namespace {

void check_moment_args(int alpha, int beta, int j, std::span<const double> u, int n, int k) {
  if (alpha < 0 || beta < 0) throw InvalidParameter("moment orders must be nonnegative");
  if (alpha + beta > 10) throw UnsupportedDegree("moment_match_check supports alpha + beta <= 10");
  if (k < 1 || k > n) throw InvalidParameter("moment_match_check needs 1 <= k <= n");
  if (j < 1 || j > k) throw InvalidParameter("moment_match_check: column j out of range");
  if (static_cast<int>(u.size()) != k) throw DimensionMismatch("u must have length k");
}

MomentMatch finish(double exact, double gaussian) {
  MomentMatch r{exact, gaussian, 1.0};
  if (gaussian != 0.0) r.ratio = exact / gaussian;
  else if (exact != 0.0) r.ratio = std::numeric_limits<double>::infinity();
  return r;
}

}  // namespace

MomentMatch moment_match_check(int alpha, int beta, int j, std::span<const double> u, int n,
                               int k) {
  check_moment_args(alpha, beta, j, u, n, k);
  const int total = alpha + beta;
  if (total == 0) return {1.0, 1.0, 1.0};
  if (total % 2 != 0) return {0.0, 0.0, 1.0};
  const int d = total / 2;
  const double uj = u[j - 1];
  double uu = 0.0;
  for (double x : u) uu += x * x;

  // Positions 1..alpha carry column j; the rest carry a free column l
  // weighted by u_l. Summing over l factorizes across the pairs of nn.
  const WeingartenTable& t = weingarten_table(d, n);
  double exact = 0.0, gaussian = 0.0;
  for (std::size_t b = 0; b < t.partitions.size(); ++b) {
    double f = 1.0;
    for (const auto& [x, y] : t.partitions[b].pairs) {
      const bool xa = x <= alpha, ya = y <= alpha;
      if (xa && ya) continue;
      f *= (xa || ya) ? uj : uu;
    }
    exact += t.wg_row_sums(static_cast<Eigen::Index>(b)) * f;
    gaussian += f;
  }
  exact *= std::pow(static_cast<double>(n), d);
  return finish(exact, gaussian);
}

MomentMatch moment_match_check_expanded(int alpha, int beta, int j, std::span<const double> u,
                                        int n, int k) {
  check_moment_args(alpha, beta, j, u, n, k);
  const int total = alpha + beta;
  if (total % 2 != 0) return {0.0, 0.0, 1.0};
  std::vector<int> support;
  for (int l = 0; l < k; ++l)
    if (u[l] != 0.0) support.push_back(l + 1);

  std::vector<int> rows(total, 1), cols(total, j);
  std::vector<std::size_t> digit(beta, 0);
  double exact = 0.0, gaussian = 0.0;
  if (beta > 0 && support.empty()) return finish(0.0, 0.0);
  for (;;) {
    double weight = 1.0;
    for (int i = 0; i < beta; ++i) {
      cols[alpha + i] = support[digit[i]];
      weight *= u[support[digit[i]] - 1];
    }
    exact += weight * haar_moment(rows, cols, n);
    gaussian += weight * wick_moment(cols);
    int pos = 0;
    while (pos < beta && ++digit[pos] == support.size()) digit[pos++] = 0;
    if (pos == beta) break;
  }
  exact *= std::pow(static_cast<double>(n), total / 2.0);
  return finish(exact, gaussian);
}

}  // namespace qldp
