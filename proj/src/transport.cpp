#include "medrep/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "medrep/error.hpp"

namespace medrep {
namespace {

constexpr double kMassTolerance = 1e-6;

void validate(const Distribution& d, const char* name) {
  if (d.weights.empty()) throw ArgumentError(std::string(name) + ": distribution has no support");
  if (!d.support_ids.empty() && d.support_ids.size() != d.weights.size()) {
    throw ArgumentError(std::string(name) + ": weights and support ids differ in length");
  }
  for (double w : d.weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw ArgumentError(std::string(name) + ": weights must be finite and non-negative");
    }
  }
}

// Basis of a transportation problem: m + n − 1 cells forming a spanning tree
// over row nodes 0..m−1 and column nodes m..m+n−1.
class TransportSimplex {
 public:
  TransportSimplex(std::vector<double> supply, std::vector<double> demand, const CostMatrix& costs)
      : m_(supply.size()), n_(demand.size()), costs_(costs),
        flow_(m_ * n_, 0.0), basic_(m_ * n_, 0) {
    north_west_corner(std::move(supply), std::move(demand));
  }

  void solve() {
    double max_cost = 0.0;
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) max_cost = std::max(max_cost, costs_(i, j));
    }
    const double tol = 1e-12 * std::max(1.0, max_cost);
    // Termination is guaranteed by the Bland fallback; the cap only guards
    // against arithmetic pathologies.
    const std::size_t max_pivots = 50 * (m_ + n_) * (m_ * n_ + 1) + 1000;
    std::size_t degenerate_run = 0;

    while (true) {
      compute_potentials();
      const bool bland = degenerate_run > m_ + n_;
      std::size_t entering = kNone;
      double best = -tol;
      for (std::size_t cell = 0; cell < m_ * n_ && !(bland && entering != kNone); ++cell) {
        if (basic_[cell]) continue;
        const std::size_t i = cell / n_;
        const std::size_t j = cell % n_;
        const double reduced = costs_(i, j) - u_[i] - v_[j];
        if (reduced < best) {
          best = reduced;
          entering = cell;
        }
      }
      if (entering == kNone) return;
      if (++pivots_ > max_pivots) throw Error("transport simplex exceeded its pivot limit");
      const bool degenerate = pivot(entering);
      degenerate_run = degenerate ? degenerate_run + 1 : 0;
    }
  }

  std::vector<double> take_flows() { return std::move(flow_); }
  std::size_t pivots() const { return pivots_; }

 private:
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  void north_west_corner(std::vector<double> supply, std::vector<double> demand) {
    std::size_t i = 0;
    std::size_t j = 0;
    while (true) {
      const std::size_t cell = i * n_ + j;
      const double x = std::min(supply[i], demand[j]);
      flow_[cell] = x;
      basic_[cell] = 1;
      basis_.push_back(cell);
      supply[i] -= x;
      demand[j] -= x;
      if (i == m_ - 1 && j == n_ - 1) break;
      if (i == m_ - 1) {
        ++j;
      } else if (j == n_ - 1) {
        ++i;
      } else if (supply[i] == 0.0) {
        ++i;
      } else {
        ++j;
      }
    }
  }

  void build_adjacency() {
    adjacency_.assign(m_ + n_, {});
    for (std::size_t cell : basis_) {
      const std::size_t i = cell / n_;
      const std::size_t j = cell % n_;
      adjacency_[i].push_back(cell);
      adjacency_[m_ + j].push_back(cell);
    }
  }

  std::size_t other_end(std::size_t node, std::size_t cell) const {
    const std::size_t i = cell / n_;
    const std::size_t j = cell % n_;
    return node == i ? m_ + j : i;
  }

  void compute_potentials() {
    build_adjacency();
    u_.assign(m_, 0.0);
    v_.assign(n_, 0.0);
    std::vector<char> seen(m_ + n_, 0);
    std::vector<std::size_t> stack = {0};
    seen[0] = 1;
    while (!stack.empty()) {
      const std::size_t node = stack.back();
      stack.pop_back();
      for (std::size_t cell : adjacency_[node]) {
        const std::size_t next = other_end(node, cell);
        if (seen[next]) continue;
        seen[next] = 1;
        const std::size_t i = cell / n_;
        const std::size_t j = cell % n_;
        if (next >= m_) {
          v_[j] = costs_(i, j) - u_[i];
        } else {
          u_[i] = costs_(i, j) - v_[j];
        }
        stack.push_back(next);
      }
    }
  }

  // Returns true for a degenerate (zero-step) pivot.
  bool pivot(std::size_t entering) {
    const std::size_t row = entering / n_;
    const std::size_t col_node = m_ + entering % n_;

    // Tree path from the entering row to the entering column.
    std::vector<std::size_t> parent_cell(m_ + n_, kNone);
    std::vector<char> seen(m_ + n_, 0);
    std::vector<std::size_t> queue = {row};
    seen[row] = 1;
    for (std::size_t head = 0; head < queue.size() && !seen[col_node]; ++head) {
      const std::size_t node = queue[head];
      for (std::size_t cell : adjacency_[node]) {
        const std::size_t next = other_end(node, cell);
        if (seen[next]) continue;
        seen[next] = 1;
        parent_cell[next] = cell;
        queue.push_back(next);
      }
    }

    // Walk back from the column; edges alternate −, +, −, ... starting there.
    std::vector<std::size_t> minus;
    std::vector<std::size_t> plus = {entering};
    bool negative = true;
    for (std::size_t node = col_node; node != row;) {
      const std::size_t cell = parent_cell[node];
      (negative ? minus : plus).push_back(cell);
      negative = !negative;
      node = other_end(node, cell);
    }

    std::size_t leaving = kNone;
    double theta = std::numeric_limits<double>::infinity();
    for (std::size_t cell : minus) {
      if (flow_[cell] < theta || (flow_[cell] == theta && cell < leaving)) {
        theta = flow_[cell];
        leaving = cell;
      }
    }
    for (std::size_t cell : minus) flow_[cell] -= theta;
    for (std::size_t cell : plus) flow_[cell] += theta;
    flow_[leaving] = 0.0;

    basic_[leaving] = 0;
    basic_[entering] = 1;
    *std::find(basis_.begin(), basis_.end(), leaving) = entering;
    return theta == 0.0;
  }

  std::size_t m_;
  std::size_t n_;
  const CostMatrix& costs_;
  std::vector<double> flow_;
  std::vector<char> basic_;
  std::vector<std::size_t> basis_;
  std::vector<std::vector<std::size_t>> adjacency_;
  std::vector<double> u_;
  std::vector<double> v_;
  std::size_t pivots_ = 0;
};

}  // namespace

Distribution Distribution::from_counts(const std::vector<double>& counts) {
  Distribution d;
  const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
  if (!(total > 0.0)) throw ArgumentError("distribution needs positive total mass");
  d.weights.reserve(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    d.weights.push_back(counts[i] / total);
    d.support_ids.push_back(i);
  }
  return d;
}

CostMatrix CostMatrix::transposed() const {
  CostMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  }
  return t;
}

TransportPlan solve_emd(const Distribution& p, const Distribution& q, const CostMatrix& costs) {
  validate(p, "source");
  validate(q, "target");
  if (costs.rows() != p.size() || costs.cols() != q.size()) {
    throw ArgumentError("cost matrix is " + std::to_string(costs.rows()) + "x" +
                        std::to_string(costs.cols()) + ", distributions are " +
                        std::to_string(p.size()) + "x" + std::to_string(q.size()));
  }
  for (std::size_t i = 0; i < costs.rows(); ++i) {
    for (std::size_t j = 0; j < costs.cols(); ++j) {
      if (!(costs(i, j) >= 0.0) || !std::isfinite(costs(i, j))) {
        throw ArgumentError("costs must be finite and non-negative");
      }
    }
  }
  const double mass_p = std::accumulate(p.weights.begin(), p.weights.end(), 0.0);
  const double mass_q = std::accumulate(q.weights.begin(), q.weights.end(), 0.0);
  if (std::abs(mass_p - mass_q) > kMassTolerance) {
    throw InfeasibleError("marginal masses differ: " + std::to_string(mass_p) + " vs " +
                          std::to_string(mass_q));
  }
  std::vector<double> demand = q.weights;
  if (mass_q > 0.0 && mass_p != mass_q) {
    for (double& w : demand) w *= mass_p / mass_q;
  }

  TransportSimplex simplex(p.weights, std::move(demand), costs);
  simplex.solve();

  TransportPlan plan;
  plan.rows = p.size();
  plan.cols = q.size();
  plan.pivots = simplex.pivots();
  plan.flows = simplex.take_flows();
  for (std::size_t i = 0; i < plan.rows; ++i) {
    for (std::size_t j = 0; j < plan.cols; ++j) plan.total_cost += plan.flow(i, j) * costs(i, j);
  }
  return plan;
}

double emd_lower_bound(const Distribution& p, const Distribution& q, const CostMatrix& costs) {
  validate(p, "source");
  validate(q, "target");
  if (costs.rows() != p.size() || costs.cols() != q.size()) {
    throw ArgumentError("cost matrix does not match the distributions");
  }
  constexpr double kInf = std::numeric_limits<double>::infinity();
  double from_rows = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p.weights[i] == 0.0) continue;
    double nearest = kInf;
    for (std::size_t j = 0; j < q.size(); ++j) {
      if (q.weights[j] > 0.0) nearest = std::min(nearest, costs(i, j));
    }
    if (nearest < kInf) from_rows += p.weights[i] * nearest;
  }
  double from_cols = 0.0;
  for (std::size_t j = 0; j < q.size(); ++j) {
    if (q.weights[j] == 0.0) continue;
    double nearest = kInf;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (p.weights[i] > 0.0) nearest = std::min(nearest, costs(i, j));
    }
    if (nearest < kInf) from_cols += q.weights[j] * nearest;
  }
  return std::max(from_rows, from_cols);
}

}  // namespace medrep
