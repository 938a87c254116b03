#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace medrep {

struct SampleSummary {
  std::size_t n = 0;
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation (n − 1)
};

struct TTestResult {
  double t = 0.0;
  std::size_t df = 0;
  bool significant_at_05 = false;
  bool significant_at_01 = false;
  bool significant_at_001 = false;
};

// Product-moment correlation. Throws ArgumentError for mismatched or short
// inputs and UndefinedError when either vector has zero variance.
double pearson(std::span<const double> x, std::span<const double> y);

// (v − min)/(max − min). Throws UndefinedError when all values are equal.
std::vector<double> minmax_normalize(std::span<const double> values);

// Throws ArgumentError for fewer than two values.
SampleSummary summarize(std::span<const double> sample);

// Student's pooled two-sample t-test of a − b, df = n_a + n_b − 2.
// Significance uses two-tailed critical values tabulated for df ≤ 30; larger
// df use the df = 30 row, which is conservative.
TTestResult pooled_ttest(const SampleSummary& a, const SampleSummary& b);

// Two-tailed critical t for alpha ∈ {0.05, 0.01, 0.001}.
double t_critical(std::size_t df, double alpha);

}  // namespace medrep
