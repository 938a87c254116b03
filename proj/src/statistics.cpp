#include "medrep/statistics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "medrep/error.hpp"

namespace medrep {
namespace {

// Two-tailed Student t critical values, df = 1..30.
constexpr std::array<double, 30> kT05 = {
    12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228,
    2.201,  2.179, 2.160, 2.145, 2.131, 2.120, 2.110, 2.101, 2.093, 2.086,
    2.080,  2.074, 2.069, 2.064, 2.060, 2.056, 2.052, 2.048, 2.045, 2.042};
constexpr std::array<double, 30> kT01 = {
    63.657, 9.925, 5.841, 4.604, 4.032, 3.707, 3.499, 3.355, 3.250, 3.169,
    3.106,  3.055, 3.012, 2.977, 2.947, 2.921, 2.898, 2.878, 2.861, 2.845,
    2.831,  2.819, 2.807, 2.797, 2.787, 2.779, 2.771, 2.763, 2.756, 2.750};
constexpr std::array<double, 30> kT001 = {
    636.619, 31.599, 12.924, 8.610, 6.869, 5.959, 5.408, 5.041, 4.781, 4.587,
    4.437,   4.318,  4.221,  4.140, 4.073, 4.015, 3.965, 3.922, 3.883, 3.850,
    3.819,   3.792,  3.768,  3.745, 3.725, 3.707, 3.690, 3.674, 3.659, 3.646};

double mean_of(std::span<const double> x) {
  double sum = 0.0;
  for (double v : x) sum += v;
  return sum / static_cast<double>(x.size());
}

}  // namespace

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ArgumentError("pearson: vectors differ in length");
  if (x.size() < 2) throw ArgumentError("pearson: need at least two observations");
  const double mx = mean_of(x);
  const double my = mean_of(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw UndefinedError("pearson: zero variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<double> minmax_normalize(std::span<const double> values) {
  if (values.size() < 2) throw ArgumentError("min-max normalization needs at least two values");
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double min = *lo;
  const double range = *hi - *lo;
  if (!(range > 0.0)) throw UndefinedError("min-max normalization: all values are equal");
  std::vector<double> out;
  out.reserve(values.size());
  for (double v : values) out.push_back((v - min) / range);
  return out;
}

SampleSummary summarize(std::span<const double> sample) {
  if (sample.size() < 2) throw ArgumentError("summary statistics need at least two values");
  SampleSummary s;
  s.n = sample.size();
  s.mean = mean_of(sample);
  double ss = 0.0;
  for (double v : sample) ss += (v - s.mean) * (v - s.mean);
  s.sd = std::sqrt(ss / static_cast<double>(s.n - 1));
  return s;
}

double t_critical(std::size_t df, double alpha) {
  if (df == 0) throw ArgumentError("t critical value needs df >= 1");
  const std::size_t row = std::min<std::size_t>(df, 30) - 1;
  if (alpha == 0.05) return kT05[row];
  if (alpha == 0.01) return kT01[row];
  if (alpha == 0.001) return kT001[row];
  throw ArgumentError("t critical values are tabulated for alpha 0.05, 0.01, 0.001 only");
}

TTestResult pooled_ttest(const SampleSummary& a, const SampleSummary& b) {
  if (a.n < 2 || b.n < 2) throw ArgumentError("t-test needs at least two observations per group");
  TTestResult r;
  r.df = a.n + b.n - 2;
  const double na = static_cast<double>(a.n);
  const double nb = static_cast<double>(b.n);
  const double pooled = ((na - 1.0) * a.sd * a.sd + (nb - 1.0) * b.sd * b.sd) / static_cast<double>(r.df);
  const double diff = a.mean - b.mean;
  const double se = std::sqrt(pooled * (1.0 / na + 1.0 / nb));
  if (se == 0.0) {
    if (diff == 0.0) throw UndefinedError("t statistic undefined: zero variance and equal means");
    r.t = std::copysign(std::numeric_limits<double>::infinity(), diff);
  } else {
    r.t = diff / se;
  }
  const double magnitude = std::abs(r.t);
  r.significant_at_05 = magnitude > t_critical(r.df, 0.05);
  r.significant_at_01 = magnitude > t_critical(r.df, 0.01);
  r.significant_at_001 = magnitude > t_critical(r.df, 0.001);
  return r;
}

}  // namespace medrep
