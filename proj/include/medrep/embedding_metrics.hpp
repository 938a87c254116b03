#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "medrep/embedding_store.hpp"
#include "medrep/overlap_metrics.hpp"
#include "medrep/tokenize.hpp"
#include "medrep/transport.hpp"

namespace medrep {

// In-vocabulary tokens of a text with their vectors; `tokens` keeps the
// original sequence, `kept` the tokens that received a vector.
struct EmbeddedText {
  TokenSequence tokens;
  std::vector<std::string> kept;
  std::vector<Vector> vectors;
  std::size_t oov_dropped = 0;
};

// Honors the store's OOV policy: Skip drops unknown tokens, Error throws OovError.
EmbeddedText embed(const TokenSequence& tokens, const EmbeddingStore& store);

// Normalized bag of words over distinct in-vocabulary types, in sorted type order.
struct Nbow {
  std::vector<std::string> types;
  Distribution distribution;
  std::size_t oov_dropped = 0;
};

// Throws UndefinedError when no token is in vocabulary.
Nbow nbow(const TokenSequence& tokens, const EmbeddingStore& store);

// EMD between the two nBOW distributions with Euclidean ground cost.
double wmd(const TokenSequence& cand, const TokenSequence& ref, const EmbeddingStore& store);

struct IdfWeights {
  std::map<std::string, double> weights;
  double unseen = 0.0;  // tokens absent from the corpus

  double operator()(const std::string& token) const {
    const auto it = weights.find(token);
    return it == weights.end() ? unseen : it->second;
  }
};

// idf(w) = ln((M + 1) / (df(w) + 1)) over M reference documents; tokens
// absent from the corpus get ln(M + 1).
IdfWeights compute_idf(const std::vector<TokenSequence>& references);

// Greedy max-cosine matching. Recall averages, over reference tokens, the best
// cosine to any candidate token; precision is the mirror image. Throws
// UndefinedError when either side is empty.
PRF greedy_match_score(const EmbeddedText& cand, const EmbeddedText& ref,
                       const IdfWeights* idf = nullptr);

// Precomputed per-token vectors keyed by report ("<id>.ai" / "<id>.gp").
// Tab-separated lines `report<TAB>token_index<TAB>token<TAB>v1 v2 ... vd`
// after a `report\ttoken_index\ttoken\tvector` header; indices of a report
// must run 0..n−1.
class ContextualEmbeddings {
 public:
  static ContextualEmbeddings parse(std::string_view text, const std::string& source = "<memory>");
  static ContextualEmbeddings load(const std::filesystem::path& path);

  std::size_t dim() const { return dim_; }
  // Throws LookupError for an unknown report key.
  EmbeddedText text(const std::string& report_key) const;
  bool contains(const std::string& report_key) const { return reports_.count(report_key) > 0; }

 private:
  std::size_t dim_ = 0;
  std::map<std::string, EmbeddedText> reports_;
};

}  // namespace medrep
