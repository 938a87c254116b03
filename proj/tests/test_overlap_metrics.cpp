#include <doctest.h>

#include <cmath>
#include <random>

#include "medrep/error.hpp"
#include "medrep/overlap_metrics.hpp"
#include "oracles.hpp"

using namespace medrep;

namespace {

TokenSequence seq(std::vector<std::string> t) { return TokenSequence{std::move(t)}; }

}  // namespace

TEST_CASE("prf_unigram examples") {
  const PRF p = prf_unigram(seq({"the", "cat", "sat"}), seq({"the", "cat"}));
  CHECK(p.precision == doctest::Approx(2.0 / 3.0));
  CHECK(p.recall == doctest::Approx(1.0));
  CHECK(p.f == doctest::Approx(0.8));
  const PRF same = prf_unigram(seq({"a", "b"}), seq({"a", "b"}));
  CHECK(same.f == 1.0);
  const PRF none = prf_unigram(seq({"a"}), seq({"b"}));
  CHECK(none.precision == 0.0);
  CHECK(none.recall == 0.0);
  CHECK(none.f == 0.0);
}

TEST_CASE("make_prf with beta") {
  CHECK(make_prf(0.0, 0.0).f == 0.0);
  CHECK(make_prf(1.0, 2.0 / 3.0, 2.0).f == doctest::Approx(5.0 * (2.0 / 3.0) / (4.0 + 2.0 / 3.0)));
}

TEST_CASE("bleu examples") {
  const auto abcd = seq({"a", "b", "c", "d"});
  CHECK(bleu(abcd, abcd) == doctest::Approx(1.0));
  BleuParams none;
  none.smoothing = BleuSmoothing::None;
  CHECK(bleu(seq({"a", "b"}), seq({"c", "d"}), none) == 0.0);
  BleuParams two;
  two.max_n = 2;
  CHECK(bleu(abcd, seq({"a", "b", "c", "d", "e"}), two) == doctest::Approx(std::exp(1.0 - 5.0 / 4.0)).epsilon(1e-9));
  CHECK(bleu(seq({}), abcd) == 0.0);
}

TEST_CASE("bleu matches a brute-force n-gram count") {
  std::mt19937_64 rng(21);
  const oracle::Tokens alphabet{"a", "b", "c"};
  BleuParams params;
  params.smoothing = BleuSmoothing::None;
  params.max_n = 2;
  for (int trial = 0; trial < 300; ++trial) {
    const auto c = oracle::random_tokens(rng, 8, alphabet, 2);
    const auto r = oracle::random_tokens(rng, 8, alphabet, 1);
    CHECK(bleu(seq(c), seq(r), params) == doctest::Approx(oracle::bleu(c, r, 2)).epsilon(1e-12));
  }
}

TEST_CASE("rouge_n examples") {
  const PRF r1 = rouge_n(seq({"the", "cat", "sat"}), seq({"the", "cat"}), 1);
  CHECK(r1.recall == doctest::Approx(1.0));
  CHECK(r1.precision == doctest::Approx(2.0 / 3.0));
  const PRF r2 = rouge_n(seq({"a", "b", "c"}), seq({"a", "b", "d"}), 2);
  CHECK(r2.precision == doctest::Approx(0.5));
  CHECK(r2.recall == doctest::Approx(0.5));
  CHECK(rouge_n(seq({"a", "b"}), seq({"a", "b"}), 2).f == 1.0);
  CHECK(rouge_n(seq({"a"}), seq({"a"}), 2).f == 0.0);
  CHECK_THROWS_AS(rouge_n(seq({"a"}), seq({"a"}), 0), ArgumentError);
}

TEST_CASE("rouge_n matches a brute-force n-gram intersection") {
  std::mt19937_64 rng(22);
  const oracle::Tokens alphabet{"a", "b", "c", "d"};
  for (int trial = 0; trial < 300; ++trial) {
    const auto c = oracle::random_tokens(rng, 8, alphabet, 3);
    const auto r = oracle::random_tokens(rng, 8, alphabet, 3);
    for (std::size_t n = 1; n <= 3; ++n) {
      const double m = static_cast<double>(oracle::clipped_matches(c, r, n));
      const PRF got = rouge_n(seq(c), seq(r), n);
      CHECK(got.precision == doctest::Approx(m / static_cast<double>(c.size() - n + 1)));
      CHECK(got.recall == doctest::Approx(m / static_cast<double>(r.size() - n + 1)));
    }
  }
}

TEST_CASE("lcs examples and oracle") {
  CHECK(lcs_length(char_tokens("ABCBDAB"), char_tokens("BDCABA")) == 4);
  CHECK(lcs_length(seq({"a", "b", "c"}), seq({"a", "b", "c"})) == 3);
  CHECK(lcs_length(seq({"a", "b"}), seq({"c", "d"})) == 0);
  std::mt19937_64 rng(23);
  const oracle::Tokens alphabet{"a", "b", "c"};
  for (int trial = 0; trial < 300; ++trial) {
    const auto a = oracle::random_tokens(rng, 8, alphabet);
    const auto b = oracle::random_tokens(rng, 8, alphabet);
    CHECK(lcs_length(seq(a), seq(b)) == oracle::lcs(a, b));
  }
}

TEST_CASE("rouge_l examples") {
  CHECK(rouge_l(seq({"a", "b"}), seq({"a", "b"})).f == 1.0);
  const PRF p = rouge_l(seq({"a", "x", "b"}), seq({"a", "b"}));
  CHECK(p.precision == doctest::Approx(2.0 / 3.0));
  CHECK(p.recall == 1.0);
  CHECK(p.f == doctest::Approx(0.8));
  CHECK(rouge_l(seq({"a"}), seq({"b"})).f == 0.0);
}

TEST_CASE("meteor examples") {
  const MeteorParams params;
  const auto abc = seq({"a", "b", "c"});
  CHECK(meteor(abc, abc) == doctest::Approx(1.0 - 0.5 * std::pow(1.0 / 3.0, 3.0)));
  CHECK(meteor(seq({"a"}), seq({"b"})) == 0.0);
  const MeteorAlignment swapped = meteor_align(seq({"a", "b"}), seq({"b", "a"}));
  CHECK(swapped.matches == 2);
  CHECK(swapped.chunks == 2);
  CHECK(meteor(seq({"a", "b"}), seq({"b", "a"})) == doctest::Approx(1.0 - params.gamma));
}

TEST_CASE("count_chunks") {
  CHECK(count_chunks({}) == 0);
  CHECK(count_chunks({-1, -1}) == 0);
  CHECK(count_chunks({0, 1, 2}) == 1);
  CHECK(count_chunks({0, -1, 1}) == 2);
  CHECK(count_chunks({1, 0}) == 2);
  CHECK(count_chunks({2, 3, 0, 1}) == 2);
}

TEST_CASE("meteor alignment matches exhaustive search") {
  std::mt19937_64 rng(24);
  const oracle::Tokens alphabet{"a", "b", "c"};
  for (int trial = 0; trial < 400; ++trial) {
    const auto c = oracle::random_tokens(rng, 7, alphabet);
    const auto r = oracle::random_tokens(rng, 7, alphabet);
    const auto expected = oracle::best_exact_alignment(c, r);
    const MeteorAlignment got = meteor_align(seq(c), seq(r));
    CHECK(got.matches == expected.matches);
    CHECK(got.chunks == expected.chunks);
    CHECK(oracle::chunks(got.cand_to_ref) == got.chunks);
    std::size_t matched = 0;
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (got.cand_to_ref[i] >= 0) {
        ++matched;
        CHECK(c[i] == r[static_cast<std::size_t>(got.cand_to_ref[i])]);
      }
    }
    CHECK(matched == got.matches);
  }
}

TEST_CASE("meteor synonym stage") {
  SynonymDictionary dict = SynonymDictionary::parse("koorts\tverhoging,temperatuur\n", {});
  CHECK(dict.related("koorts", "verhoging"));
  CHECK(dict.related("temperatuur", "koorts"));
  CHECK_FALSE(dict.related("koorts", "pijn"));
  MeteorParams params;
  params.synonyms = &dict;
  const auto cand = seq({"hoge", "koorts"});
  const auto ref = seq({"hoge", "verhoging"});
  CHECK(meteor_align(cand, ref).matches == 1);
  const MeteorAlignment staged = meteor_align(cand, ref, params);
  CHECK(staged.matches == 2);
  CHECK(staged.chunks == 1);
  CHECK(meteor(cand, ref, params) > meteor(cand, ref));
}

TEST_CASE("chrf examples") {
  CHECK(chrf("abc def", "abc def") == doctest::Approx(1.0));
  CHECK(chrf("abc", "xyz") == 0.0);
  const PRF p = chrf_prf("ab", "abc", 1);
  CHECK(p.precision == doctest::Approx(1.0));
  CHECK(p.recall == doctest::Approx(2.0 / 3.0));
  CHECK(p.f == doctest::Approx(5.0 * (2.0 / 3.0) / (4.0 + 2.0 / 3.0)).epsilon(1e-4));
  CHECK(chrf("ab", "abc", 1) == doctest::Approx(0.7143).epsilon(1e-4));
}

TEST_CASE("chrf ignores whitespace") {
  CHECK(chrf("a b c", "abc") == doctest::Approx(1.0));
}
