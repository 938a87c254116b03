#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "medrep/corpus.hpp"
#include "medrep/embedding_store.hpp"
#include "medrep/evaluation.hpp"
#include "medrep/tokenize.hpp"

namespace medrep::cli {

enum class OutputFormat { Csv, Json };

struct ScoreOptions {
  std::filesystem::path reports;
  std::vector<std::string> metrics;  // empty: every metric the inputs support
  TokenizerConfig tokenizer;
  std::optional<SectionTag> section;
  std::optional<std::filesystem::path> embeddings;
  std::optional<std::filesystem::path> contextual;
  std::optional<std::filesystem::path> synonyms;
  OovPolicy oov = OovPolicy::Skip;
  bool idf = false;
  unsigned jobs = 1;
  OutputFormat format = OutputFormat::Csv;
  int precision = 6;
  std::optional<std::filesystem::path> output;
};

struct EvaluateOptions {
  std::optional<std::filesystem::path> scores;
  std::optional<std::filesystem::path> annotations;
  std::optional<std::filesystem::path> from_correlations;
  CASConfig weights;
  std::size_t top_k = 3;
  OutputFormat format = OutputFormat::Csv;
  int precision = 3;
  std::optional<std::filesystem::path> output;
  std::optional<std::filesystem::path> correlations_out;
  std::optional<std::filesystem::path> cas_out;
};

struct StatsOptions {
  std::filesystem::path reports;
  OutputFormat format = OutputFormat::Csv;
  int precision = 3;
  std::optional<std::filesystem::path> output;
};

// Each command writes its result to `out` (or the output file) and
// diagnostics to `err`, and throws medrep::Error on failure.
void run_score(const ScoreOptions& options, std::ostream& out, std::ostream& err);
void run_evaluate(const EvaluateOptions& options, std::ostream& out, std::ostream& err);
void run_stats(const StatsOptions& options, std::ostream& out, std::ostream& err);
void run_metrics_list(OutputFormat format, std::ostream& out);

// "1,1,1,0.5" in MIS, INC, ADD_OFF, ADD_ON order.
CASConfig parse_cas_weights(const std::string& text);

// Entry point shared by the executable and the tests; returns the exit code.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace medrep::cli
