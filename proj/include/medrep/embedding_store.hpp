#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "medrep/error.hpp"

namespace medrep {

enum class OovPolicy { Skip, Error };

using Vector = std::vector<double>;

// Immutable token → vector table. Vectors are stored exactly as read.
class EmbeddingStore {
 public:
  // Plain-text word-vector format: "<vocab_count> <dim>" header, then
  // "token v1 ... vdim" per line. Duplicate tokens: the last row wins and a
  // warning is emitted.
  static EmbeddingStore parse(std::string_view text, OovPolicy policy = OovPolicy::Skip,
                              const std::string& source = "<memory>", const WarningSink& warnings = {});
  static EmbeddingStore load(const std::filesystem::path& path, OovPolicy policy = OovPolicy::Skip,
                             const WarningSink& warnings = {});

  std::size_t dim() const { return dim_; }
  std::size_t vocabulary_size() const { return table_.size(); }
  OovPolicy oov_policy() const { return policy_; }

  // Exact match; nullptr when absent.
  const Vector* lookup(const std::string& token) const;

 private:
  EmbeddingStore(std::size_t dim, OovPolicy policy) : dim_(dim), policy_(policy) {}

  std::size_t dim_;
  OovPolicy policy_;
  std::unordered_map<std::string, Vector> table_;
};

// u·v / (‖u‖‖v‖), clamped to [−1, 1]. Throws ArgumentError on a dimension
// mismatch and UndefinedError on a zero vector.
double cosine(std::span<const double> u, std::span<const double> v);

double euclidean(std::span<const double> u, std::span<const double> v);

}  // namespace medrep
