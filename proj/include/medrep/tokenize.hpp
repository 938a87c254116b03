#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace medrep {

enum class Punctuation { Strip, KeepAsTokens };

// One instance is shared by every metric in a run.
struct TokenizerConfig {
  bool case_fold = true;
  bool unicode_normalize = true;  // canonical composition (NFC)
  Punctuation punctuation = Punctuation::Strip;
};

enum class Granularity { Word, Character };

struct TokenSequence {
  std::vector<std::string> tokens;
  Granularity granularity = Granularity::Word;

  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }
  const std::string& operator[](std::size_t i) const { return tokens[i]; }

  friend bool operator==(const TokenSequence&, const TokenSequence&) = default;
};

using NGram = std::vector<std::string>;

struct NGramMultiset {
  std::size_t n = 1;
  std::map<NGram, std::size_t> counts;

  std::size_t total() const;
};

// Case folding and NFC per config, then whitespace runs collapsed to a single
// space and trimmed. Idempotent.
std::string normalize(std::string_view text, const TokenizerConfig& config);

// Normalizes, splits on Unicode whitespace, then handles punctuation at token
// boundaries: Strip drops it, KeepAsTokens emits each punctuation character as
// its own token. Punctuation inside a token ("3.5", "oor-neus") is kept.
TokenSequence word_tokens(std::string_view text, const TokenizerConfig& config);

// One token per extended grapheme cluster; whitespace is retained.
TokenSequence char_tokens(std::string_view text);

NGramMultiset ngrams(const TokenSequence& seq, std::size_t n);

// Σ_g min(a[g], b[g]) over the shared n-grams.
std::size_t clipped_overlap(const NGramMultiset& a, const NGramMultiset& b);

std::size_t grapheme_count(std::string_view text);

// Raw whitespace-delimited words, no normalization.
std::vector<std::string> whitespace_words(std::string_view text);

std::string remove_whitespace(std::string_view text);

}  // namespace medrep
