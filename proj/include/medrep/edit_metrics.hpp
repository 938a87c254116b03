#pragma once

#include <cstddef>

#include "medrep/tokenize.hpp"

namespace medrep {

// Invariants: hits + substitutions + deletions == ref_len and
// hits + substitutions + insertions == hyp_len.
struct AlignmentCounts {
  std::size_t hits = 0;
  std::size_t substitutions = 0;
  std::size_t deletions = 0;
  std::size_t insertions = 0;
  std::size_t ref_len = 0;
  std::size_t hyp_len = 0;

  std::size_t errors() const { return substitutions + deletions + insertions; }

  friend bool operator==(const AlignmentCounts&, const AlignmentCounts&) = default;
};

// Unit-cost insert/delete/substitute distance.
std::size_t levenshtein(const TokenSequence& a, const TokenSequence& b);

// levenshtein / max(|a|, |b|); 0 when both are empty.
double levenshtein_normalized(const TokenSequence& a, const TokenSequence& b);

// Minimal-cost alignment. The backtrace prefers the diagonal (hit or
// substitution), then deletion, then insertion, so counts are deterministic
// when several minimal alignments exist.
AlignmentCounts align(const TokenSequence& ref, const TokenSequence& hyp);

// (S + D + I) / N1. Throws UndefinedError for an empty reference.
double wer(const TokenSequence& ref, const TokenSequence& hyp);

// (S + D + I) / (H + S + D + I). Throws UndefinedError when both are empty.
double mer(const TokenSequence& ref, const TokenSequence& hyp);

// 1 − H² / (N1 · N2). Throws UndefinedError when either side is empty.
double wil(const TokenSequence& ref, const TokenSequence& hyp);

}  // namespace medrep
