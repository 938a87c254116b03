#pragma once

#include <cstddef>
#include <vector>

namespace medrep {

// Discrete distribution over `support_ids` (indices into whatever the caller
// transports; the solver only uses the weights).
struct Distribution {
  std::vector<double> weights;
  std::vector<std::size_t> support_ids;

  std::size_t size() const { return weights.size(); }

  // Normalized histogram with support 0..counts.size()-1.
  static Distribution from_counts(const std::vector<double>& counts);
};

class CostMatrix {
 public:
  CostMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

  CostMatrix transposed() const;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
};

struct TransportPlan {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> flows;  // row-major rows × cols
  double total_cost = 0.0;
  std::size_t pivots = 0;

  double flow(std::size_t i, std::size_t j) const { return flows[i * cols + j]; }
};

// Exact minimum-cost transport between p and q under `costs`, by the
// transportation form of the network simplex: north-west-corner start,
// potentials on the spanning-tree basis, most-negative reduced cost entering
// (lowest row-major index on ties, Bland's rule after a run of degenerate
// pivots), lowest-index leaving cell on ties.
//
// Throws ArgumentError on empty or mismatched inputs, negative weights, or
// negative/non-finite costs, and InfeasibleError when the total masses differ
// by more than 1e-6. Masses that agree within that tolerance are reconciled
// by rescaling q.
TransportPlan solve_emd(const Distribution& p, const Distribution& q, const CostMatrix& costs);

// max(Σ_i p_i min_j c_ij, Σ_j q_j min_i c_ij) over positive-weight support;
// never exceeds the optimal cost.
double emd_lower_bound(const Distribution& p, const Distribution& q, const CostMatrix& costs);

}  // namespace medrep
