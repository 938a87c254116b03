#include "medrep/tokenize.hpp"

#include <algorithm>
#include <memory>

#include <unicode/brkiter.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include "medrep/error.hpp"

namespace medrep {
namespace {

icu::UnicodeString to_unicode(std::string_view text) {
  return icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
}

std::string to_utf8(const icu::UnicodeString& text) {
  std::string out;
  text.toUTF8String(out);
  return out;
}

// Decodes into code points; invalid sequences become U+FFFD via ICU.
std::vector<UChar32> code_points(std::string_view text) {
  const icu::UnicodeString u = to_unicode(text);
  std::vector<UChar32> out;
  out.reserve(static_cast<std::size_t>(u.length()));
  for (int32_t i = 0; i < u.length();) {
    const UChar32 c = u.char32At(i);
    out.push_back(c);
    i += U16_LENGTH(c);
  }
  return out;
}

std::string encode(const std::vector<UChar32>& cps, std::size_t begin, std::size_t end) {
  icu::UnicodeString u;
  for (std::size_t i = begin; i < end; ++i) u.append(cps[i]);
  return to_utf8(u);
}

bool is_space(UChar32 c) { return u_isUWhiteSpace(c) != 0; }
bool is_punct(UChar32 c) { return u_ispunct(c) != 0; }

const icu::Normalizer2& nfc() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* norm = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status) || norm == nullptr) {
    throw Error(std::string("ICU NFC normalizer unavailable: ") + u_errorName(status));
  }
  return *norm;
}

icu::UnicodeString compose(const icu::UnicodeString& text) {
  UErrorCode status = U_ZERO_ERROR;
  icu::UnicodeString out = nfc().normalize(text, status);
  if (U_FAILURE(status)) {
    throw Error(std::string("NFC normalization failed: ") + u_errorName(status));
  }
  return out;
}

icu::BreakIterator& grapheme_breaker() {
  thread_local std::unique_ptr<icu::BreakIterator> breaker = [] {
    UErrorCode status = U_ZERO_ERROR;
    std::unique_ptr<icu::BreakIterator> it(
        icu::BreakIterator::createCharacterInstance(icu::Locale::getRoot(), status));
    if (U_FAILURE(status) || !it) {
      throw Error(std::string("ICU grapheme iterator unavailable: ") + u_errorName(status));
    }
    return it;
  }();
  return *breaker;
}

template <typename Fn>
void for_each_grapheme(std::string_view text, Fn&& fn) {
  const icu::UnicodeString u = to_unicode(text);
  icu::BreakIterator& it = grapheme_breaker();
  it.setText(u);
  int32_t start = it.first();
  for (int32_t end = it.next(); end != icu::BreakIterator::DONE; start = end, end = it.next()) {
    fn(u, start, end);
  }
}

}  // namespace

std::size_t NGramMultiset::total() const {
  std::size_t sum = 0;
  for (const auto& [gram, count] : counts) sum += count;
  return sum;
}

std::string normalize(std::string_view text, const TokenizerConfig& config) {
  icu::UnicodeString u = to_unicode(text);
  if (config.unicode_normalize) u = compose(u);
  if (config.case_fold) {
    u.foldCase();
    if (config.unicode_normalize) u = compose(u);
  }

  icu::UnicodeString out;
  bool pending_space = false;
  for (int32_t i = 0; i < u.length();) {
    const UChar32 c = u.char32At(i);
    i += U16_LENGTH(c);
    if (is_space(c)) {
      pending_space = !out.isEmpty();
      continue;
    }
    if (pending_space) out.append(static_cast<UChar>(u' '));
    pending_space = false;
    out.append(c);
  }
  return to_utf8(out);
}

TokenSequence word_tokens(std::string_view text, const TokenizerConfig& config) {
  TokenSequence seq{{}, Granularity::Word};
  const std::vector<UChar32> cps = code_points(normalize(text, config));

  auto emit_word = [&](std::size_t begin, std::size_t end) {
    std::size_t lo = begin;
    std::size_t hi = end;
    while (lo < hi && is_punct(cps[lo])) ++lo;
    while (hi > lo && is_punct(cps[hi - 1])) --hi;
    const bool keep = config.punctuation == Punctuation::KeepAsTokens;
    if (keep) {
      for (std::size_t i = begin; i < lo; ++i) seq.tokens.push_back(encode(cps, i, i + 1));
    }
    if (lo < hi) seq.tokens.push_back(encode(cps, lo, hi));
    if (keep) {
      for (std::size_t i = hi; i < end; ++i) seq.tokens.push_back(encode(cps, i, i + 1));
    }
  };

  std::size_t start = 0;
  for (std::size_t i = 0; i <= cps.size(); ++i) {
    if (i == cps.size() || is_space(cps[i])) {
      if (i > start) emit_word(start, i);
      start = i + 1;
    }
  }
  return seq;
}

TokenSequence char_tokens(std::string_view text) {
  TokenSequence seq{{}, Granularity::Character};
  for_each_grapheme(text, [&](const icu::UnicodeString& u, int32_t start, int32_t end) {
    seq.tokens.push_back(to_utf8(icu::UnicodeString(u, start, end - start)));
  });
  return seq;
}

NGramMultiset ngrams(const TokenSequence& seq, std::size_t n) {
  if (n == 0) throw ArgumentError("n-gram order must be at least 1");
  NGramMultiset out;
  out.n = n;
  if (seq.size() < n) return out;
  for (std::size_t i = 0; i + n <= seq.size(); ++i) {
    NGram gram(seq.tokens.begin() + static_cast<std::ptrdiff_t>(i),
               seq.tokens.begin() + static_cast<std::ptrdiff_t>(i + n));
    ++out.counts[std::move(gram)];
  }
  return out;
}

std::size_t clipped_overlap(const NGramMultiset& a, const NGramMultiset& b) {
  std::size_t matched = 0;
  auto ia = a.counts.begin();
  auto ib = b.counts.begin();
  while (ia != a.counts.end() && ib != b.counts.end()) {
    if (ia->first < ib->first) {
      ++ia;
    } else if (ib->first < ia->first) {
      ++ib;
    } else {
      matched += std::min(ia->second, ib->second);
      ++ia;
      ++ib;
    }
  }
  return matched;
}

std::size_t grapheme_count(std::string_view text) {
  std::size_t count = 0;
  for_each_grapheme(text, [&](const icu::UnicodeString&, int32_t, int32_t) { ++count; });
  return count;
}

std::vector<std::string> whitespace_words(std::string_view text) {
  const std::vector<UChar32> cps = code_points(text);
  std::vector<std::string> words;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= cps.size(); ++i) {
    if (i == cps.size() || is_space(cps[i])) {
      if (i > start) words.push_back(encode(cps, start, i));
      start = i + 1;
    }
  }
  return words;
}

std::string remove_whitespace(std::string_view text) {
  icu::UnicodeString out;
  for (UChar32 c : code_points(text)) {
    if (!is_space(c)) out.append(c);
  }
  return to_utf8(out);
}

}  // namespace medrep
