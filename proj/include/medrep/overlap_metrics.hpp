#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "medrep/tokenize.hpp"

namespace medrep {

struct PRF {
  double precision = 0.0;
  double recall = 0.0;
  double f = 0.0;
  double beta = 1.0;
};

// f = (1+β²)·P·R / (β²·P + R), or 0 when P + R == 0.
PRF make_prf(double precision, double recall, double beta = 1.0);

// Clipped unigram overlap; an empty side gives 0 for its component.
PRF prf_unigram(const TokenSequence& cand, const TokenSequence& ref, double beta = 1.0);

enum class BleuSmoothing { None, AddEpsilon };

struct BleuParams {
  std::size_t max_n = 4;
  BleuSmoothing smoothing = BleuSmoothing::AddEpsilon;
  double epsilon = 1e-9;  // replaces a zero modified precision
};

// Single-reference BLEU with brevity penalty min(1, exp(1 − |ref|/|cand|)).
// Orders beyond the candidate length are skipped. An empty candidate scores 0.
double bleu(const TokenSequence& cand, const TokenSequence& ref, const BleuParams& params = {});

// Clipped n-gram P/R/F. Throws ArgumentError for n == 0. When either side has
// fewer than n tokens the corresponding component is 0.
PRF rouge_n(const TokenSequence& cand, const TokenSequence& ref, std::size_t n, double beta = 1.0);

std::size_t lcs_length(const TokenSequence& a, const TokenSequence& b);

PRF rouge_l(const TokenSequence& cand, const TokenSequence& ref, double beta = 1.0);

// Symmetric synonym relation loaded from `word<TAB>syn1,syn2,...` lines.
class SynonymDictionary {
 public:
  SynonymDictionary() = default;

  static SynonymDictionary parse(std::string_view text, const TokenizerConfig& config,
                                 const std::string& source = "<memory>");
  static SynonymDictionary load(const std::filesystem::path& path, const TokenizerConfig& config);

  void add(const std::string& a, const std::string& b);
  bool related(const std::string& a, const std::string& b) const;
  bool empty() const { return relation_.empty(); }
  std::size_t size() const { return relation_.size(); }

 private:
  std::map<std::string, std::set<std::string>> relation_;
};

struct MeteorParams {
  double alpha = 0.9;
  double gamma = 0.5;
  double theta = 3.0;
  // Exact matching always runs first; a non-null dictionary enables the
  // synonym stage on the tokens left unmatched.
  const SynonymDictionary* synonyms = nullptr;
  // Upper bound on search nodes per stage when minimizing chunk count.
  std::size_t search_budget = 200000;
};

struct MeteorAlignment {
  std::vector<long> cand_to_ref;  // -1 for unmatched candidate tokens
  std::size_t matches = 0;
  std::size_t chunks = 0;
};

// Staged one-to-one unigram alignment. Each stage takes a maximum number of
// matches and, among those, the fewest chunks found within the budget.
MeteorAlignment meteor_align(const TokenSequence& cand, const TokenSequence& ref,
                             const MeteorParams& params = {});

// Number of maximal runs that are contiguous and in order on both sides.
std::size_t count_chunks(const std::vector<long>& cand_to_ref);

double meteor(const TokenSequence& cand, const TokenSequence& ref, const MeteorParams& params = {});

// Character n-gram F-score over whitespace-free text, n = 1..max_n. Orders
// with no reference n-grams are skipped; precision and recall are averaged
// across the remaining orders before combining.
PRF chrf_prf(std::string_view cand_text, std::string_view ref_text, std::size_t max_n = 6,
             double beta = 2.0);
double chrf(std::string_view cand_text, std::string_view ref_text, std::size_t max_n = 6,
            double beta = 2.0);

}  // namespace medrep
