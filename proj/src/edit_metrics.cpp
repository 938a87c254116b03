#include "medrep/edit_metrics.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

#include "medrep/error.hpp"

namespace medrep {

std::size_t levenshtein(const TokenSequence& a, const TokenSequence& b) {
  const TokenSequence& lo = a.size() < b.size() ? a : b;  // shorter side spans the row
  const TokenSequence& hi = a.size() < b.size() ? b : a;
  std::vector<std::size_t> row(lo.size() + 1);
  std::iota(row.begin(), row.end(), std::size_t{0});
  for (std::size_t i = 1; i <= hi.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= lo.size(); ++j) {
      const std::size_t up = row[j];
      const std::size_t sub = diag + (hi[i - 1] == lo[j - 1] ? 0 : 1);
      row[j] = std::min({sub, up + 1, row[j - 1] + 1});
      diag = up;
    }
  }
  return row[lo.size()];
}

double levenshtein_normalized(const TokenSequence& a, const TokenSequence& b) {
  const std::size_t longest = std::max(a.size(), b.size());
  if (longest == 0) return 0.0;
  return static_cast<double>(levenshtein(a, b)) / static_cast<double>(longest);
}

AlignmentCounts align(const TokenSequence& ref, const TokenSequence& hyp) {
  const std::size_t n = ref.size();
  const std::size_t m = hyp.size();
  const std::size_t width = m + 1;
  std::vector<std::size_t> cost((n + 1) * width);
  auto at = [&](std::size_t i, std::size_t j) -> std::size_t& { return cost[i * width + j]; };

  for (std::size_t i = 0; i <= n; ++i) at(i, 0) = i;
  for (std::size_t j = 0; j <= m; ++j) at(0, j) = j;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t sub = at(i - 1, j - 1) + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
      at(i, j) = std::min({sub, at(i - 1, j) + 1, at(i, j - 1) + 1});
    }
  }

  AlignmentCounts counts;
  counts.ref_len = n;
  counts.hyp_len = m;
  std::size_t i = n;
  std::size_t j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0) {
      const bool same = ref[i - 1] == hyp[j - 1];
      if (at(i, j) == at(i - 1, j - 1) + (same ? 0 : 1)) {
        ++(same ? counts.hits : counts.substitutions);
        --i;
        --j;
        continue;
      }
    }
    if (i > 0 && at(i, j) == at(i - 1, j) + 1) {
      ++counts.deletions;
      --i;
    } else {
      ++counts.insertions;
      --j;
    }
  }
  return counts;
}

double wer(const TokenSequence& ref, const TokenSequence& hyp) {
  if (ref.empty()) throw UndefinedError("WER is undefined for an empty reference");
  const AlignmentCounts c = align(ref, hyp);
  return static_cast<double>(c.errors()) / static_cast<double>(c.ref_len);
}

double mer(const TokenSequence& ref, const TokenSequence& hyp) {
  if (ref.empty() && hyp.empty()) throw UndefinedError("MER is undefined when both sides are empty");
  const AlignmentCounts c = align(ref, hyp);
  return static_cast<double>(c.errors()) / static_cast<double>(c.hits + c.errors());
}

double wil(const TokenSequence& ref, const TokenSequence& hyp) {
  if (ref.empty() || hyp.empty()) throw UndefinedError("WIL is undefined when either side is empty");
  const AlignmentCounts c = align(ref, hyp);
  const double h = static_cast<double>(c.hits);
  return 1.0 - (h * h) / (static_cast<double>(c.ref_len) * static_cast<double>(c.hyp_len));
}

}  // namespace medrep
