#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "medrep/corpus.hpp"
#include "medrep/embedding_metrics.hpp"
#include "medrep/embedding_store.hpp"
#include "medrep/overlap_metrics.hpp"
#include "medrep/tokenize.hpp"

namespace medrep {

enum class Category { EditDistance, Embedding, TextOverlap };
enum class Orientation { HigherBetter, LowerBetter };

std::string_view category_name(Category category);
std::string_view orientation_name(Orientation orientation);

struct ValueRange {
  double lo = 0.0;
  double hi = 1.0;  // +inf for unbounded distances

  bool contains(double v) const { return v >= lo && v <= hi; }
};

struct MetricDescriptor {
  std::string id;
  std::string display_name;
  Category category;
  Orientation orientation;
  ValueRange range;
  bool needs_embeddings = false;
  bool core = false;  // one of the ten metrics in the default comparison set
};

// Stable ids: levenshtein, levenshtein-w, wer, mer, wil, rouge-1, rouge-2,
// rouge-l, bleu, f-measure, meteor, chrf, bertscore, wmd.
const std::vector<MetricDescriptor>& registry();

const MetricDescriptor* find_metric(std::string_view id,
                                    const std::vector<MetricDescriptor>& descriptors = registry());

// Throws LookupError listing the known ids.
const MetricDescriptor& require_metric(std::string_view id,
                                       const std::vector<MetricDescriptor>& descriptors = registry());

std::vector<std::string> core_metric_ids();

// Everything one scoring run needs; immutable once built and shareable
// across threads.
struct ScoringContext {
  TokenizerConfig tokenizer;
  TextMode text_mode;
  std::shared_ptr<const EmbeddingStore> embeddings;
  std::shared_ptr<const ContextualEmbeddings> contextual;  // optional bertscore vectors
  std::shared_ptr<const SynonymDictionary> synonyms;       // optional METEOR stage
  std::shared_ptr<const IdfWeights> idf;                   // optional bertscore weighting
  BleuParams bleu;
  MeteorParams meteor;  // `synonyms` above overrides meteor.synonyms
  double rouge_beta = 1.0;
  std::size_t chrf_max_n = 6;
  double chrf_beta = 2.0;
};

struct MetricScore {
  std::string metric_id;
  std::string pair_id;
  double value = 0.0;
  std::optional<double> precision;
  std::optional<double> recall;
  std::size_t oov_tokens = 0;    // embedding metrics only
  std::size_t total_tokens = 0;  // embedding metrics only
  std::vector<std::string> warnings;
};

// Candidate is scored against the reference. Throws ConfigurationError when
// an embedding metric has no vectors available.
MetricScore score_pair(const ReportPair& pair, std::string_view metric_id, const ScoringContext& context);

// Rows are pairs, columns are metrics, both in the given order. Every cell is
// filled and finite.
class ScoreMatrix {
 public:
  ScoreMatrix() = default;
  ScoreMatrix(std::vector<std::string> pair_ids, std::vector<std::string> metric_ids,
              std::vector<double> values);

  std::size_t rows() const { return pair_ids_.size(); }
  std::size_t cols() const { return metric_ids_.size(); }
  const std::vector<std::string>& pair_ids() const { return pair_ids_; }
  const std::vector<std::string>& metric_ids() const { return metric_ids_; }
  double at(std::size_t row, std::size_t col) const { return values_[row * cols() + col]; }

  // Throws LookupError for an unknown metric.
  std::vector<double> column(std::string_view metric_id) const;
  ScoreMatrix with_column(std::string_view metric_id, const std::vector<double>& values) const;

  // Header `pair_id,<metric ids>`; `decimals < 0` writes shortest exact values.
  std::string to_csv(int decimals = -1) const;
  static ScoreMatrix from_csv(std::string_view text, const std::string& source = "<memory>");
  std::string to_json() const;

 private:
  std::vector<std::string> pair_ids_;
  std::vector<std::string> metric_ids_;
  std::vector<double> values_;
};

struct OovTally {
  std::size_t oov_tokens = 0;
  std::size_t total_tokens = 0;
};

struct ScoringDiagnostics {
  std::vector<std::string> warnings;    // in cell order
  std::map<std::string, OovTally> oov;  // per embedding metric
};

// Scores every (pair, metric) cell on up to `jobs` threads. Output is
// independent of `jobs`. A failing cell aborts the run with an error naming
// the first failing (pair, metric) in row-major order.
ScoreMatrix score_corpus(const std::vector<ReportPair>& pairs, const std::vector<std::string>& metric_ids,
                         const ScoringContext& context, unsigned jobs = 1,
                         ScoringDiagnostics* diagnostics = nullptr);

// IDF over the reference side of `pairs`, tokenized with `context`.
IdfWeights reference_idf(const std::vector<ReportPair>& pairs, const ScoringContext& context);

}  // namespace medrep
