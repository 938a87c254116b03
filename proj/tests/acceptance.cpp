// Acceptance checks: one PASS/FAIL line per criterion, exit status 1 on any
// failure. Usage: medrep_acceptance <medrep executable> <fixture dir>.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "medrep/csv.hpp"
#include "medrep/edit_metrics.hpp"
#include "medrep/embedding_metrics.hpp"
#include "medrep/evaluation.hpp"
#include "medrep/overlap_metrics.hpp"
#include "medrep/statistics.hpp"
#include "medrep/transport.hpp"
#include "oracles.hpp"

using namespace medrep;
namespace fs = std::filesystem;

namespace {

std::string g_cli;
fs::path g_fixtures;

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool condition, const std::string& what) {
    if (!condition && ok) {
      ok = false;
      detail = what;
    }
  }
};

TokenSequence seq(std::vector<std::string> t) { return TokenSequence{std::move(t)}; }

CorrelationTable published_correlations() {
  return CorrelationTable::from_csv(csv::read_file(g_fixtures / "published_correlations.csv"));
}

std::string fmt(double v, int decimals = 4) { return csv::format_fixed(v, decimals); }

Outcome cas_reproduction() {
  Outcome o;
  const std::map<std::string, double> published{
      {"levenshtein", 0.229}, {"wer", 0.434},     {"bertscore", 0.618}, {"wmd", 0.241},       {"rouge-1", 0.284},
      {"rouge-2", 0.401},     {"rouge-l", 0.209}, {"bleu", 0.364},      {"f-measure", 0.501}, {"meteor", 0.677}};
  const CasTable cas = compute_cas(published_correlations());
  o.require(cas.rows.size() == published.size(), "expected ten metrics");
  double worst = 0.0;
  for (const auto& [id, value] : published) {
    const double diff = std::abs(cas.row(id).cas - value);
    worst = std::max(worst, diff);
    o.require(diff <= 0.002, id + " CAS " + fmt(cas.row(id).cas) + " vs " + fmt(value, 3));
  }
  if (o.ok) o.detail = "max deviation " + fmt(worst);
  return o;
}

Outcome preferred_metrics() {
  Outcome o;
  const CorrelationTable t = published_correlations();
  const Ranking r = rank_metrics(compute_cas(t), t, 3);
  std::vector<std::string> ids;
  for (const auto& m : r.preferred) ids.push_back(m.metric_id);
  std::sort(ids.begin(), ids.end());
  o.require(ids == std::vector<std::string>{"rouge-l", "wmd"}, "preferred set differs");
  o.detail = "preferred:";
  for (const auto& id : ids) o.detail += " " + id;
  return o;
}

Outcome annotation_averages() {
  Outcome o;
  const std::vector<HumanAnnotation> rows = load_annotations(g_fixtures / "annotations.csv");
  const auto rounded = aggregate_annotations(rows).rounded();
  o.require(rounded == std::array<long, 5>{8, 2, 6, 3, 215}, "averages differ");
  o.detail = "averages";
  for (long v : rounded) o.detail += " " + std::to_string(v);
  return o;
}

Outcome ttest_reproduction() {
  Outcome o;
  const TTestResult chars = pooled_ttest({7, 1199.29, 197.0}, {7, 410.71, 94.32});
  const TTestResult wle = pooled_ttest({7, 7.62, 0.29}, {7, 6.04, 0.33});
  o.require(chars.df == 12 && wle.df == 12, "df != 12");
  o.require(std::abs(std::abs(chars.t) - 9.52) <= 0.1, "characters |t| = " + fmt(std::abs(chars.t)));
  o.require(std::abs(std::abs(wle.t) - 9.555) <= 0.1, "word length |t| = " + fmt(std::abs(wle.t)));
  if (o.ok) o.detail = "characters |t| " + fmt(std::abs(chars.t), 3) + ", word length |t| " + fmt(std::abs(wle.t), 3);
  return o;
}

Outcome edit_distance_suite() {
  Outcome o;
  std::mt19937_64 rng(1001);
  const oracle::Tokens alphabet{"a", "b", "c", "d"};
  const int trials = 1500;
  for (int i = 0; i < trials && o.ok; ++i) {
    const auto a = oracle::random_tokens(rng, 8, alphabet);
    const auto b = oracle::random_tokens(rng, 8, alphabet);
    const auto c = oracle::random_tokens(rng, 8, alphabet);
    const std::size_t ab = levenshtein(seq(a), seq(b));
    o.require(ab == oracle::edit_distance(a, b), "levenshtein differs from the recursive oracle");
    o.require(ab == levenshtein(seq(b), seq(a)), "asymmetric");
    o.require((ab == 0) == (a == b), "identity of indiscernibles");
    o.require(ab <= levenshtein(seq(a), seq(c)) + levenshtein(seq(c), seq(b)), "triangle inequality");
    if (!a.empty()) {
      o.require(wer(seq(a), seq(b)) * static_cast<double>(a.size()) == static_cast<double>(ab), "WER·N1 != distance");
    }
  }
  if (o.ok) o.detail = std::to_string(trials) + " random pairs";
  return o;
}

Outcome transport_suite() {
  Outcome o;
  std::mt19937_64 rng(2002);
  std::uniform_int_distribution<std::size_t> size(1, 4);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto weights = [&](std::size_t n) {
    std::vector<double> w(n);
    double s = 0.0;
    for (auto& x : w) s += (x = unit(rng) < 0.1 ? 0.0 : unit(rng) + 0.01);
    if (s == 0.0) s = w[0] = 1.0;
    for (auto& x : w) x /= s;
    return w;
  };
  auto dist = [](const std::vector<double>& w) {
    Distribution d;
    d.weights = w;
    for (std::size_t i = 0; i < w.size(); ++i) d.support_ids.push_back(i);
    return d;
  };
  const int trials = 600;
  double worst = 0.0;
  for (int t = 0; t < trials && o.ok; ++t) {
    const std::size_t m = size(rng), n = size(rng);
    const auto p = weights(m), q = weights(n);
    CostMatrix c(m, n);
    std::vector<std::vector<double>> dense(m, std::vector<double>(n));
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n; ++j) c(i, j) = dense[i][j] = t % 4 == 0 ? std::floor(5 * unit(rng)) : 10 * unit(rng);
    }
    const TransportPlan plan = solve_emd(dist(p), dist(q), c);
    const double diff = std::abs(plan.total_cost - oracle::transport_cost(p, q, dense));
    worst = std::max(worst, diff);
    o.require(diff <= 1e-7, "cost differs from vertex enumeration by " + std::to_string(diff));
    for (std::size_t i = 0; i < m; ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < n; ++j) row += plan.flow(i, j);
      o.require(std::abs(row - p[i]) <= 1e-7, "row marginal violated");
    }
    for (std::size_t j = 0; j < n; ++j) {
      double col = 0.0;
      for (std::size_t i = 0; i < m; ++i) col += plan.flow(i, j);
      o.require(std::abs(col - q[j]) <= 1e-7, "column marginal violated");
    }
  }

  const oracle::Tokens vocab{"koorts", "pijn", "rust", "hoest", "knie", "oor"};
  std::string file = "6 4\n";
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  for (const auto& w : vocab) {
    file += w;
    for (int k = 0; k < 4; ++k) file += " " + std::to_string(coord(rng));
    file += "\n";
  }
  const EmbeddingStore store = EmbeddingStore::parse(file);
  for (int t = 0; t < 200 && o.ok; ++t) {
    const auto a = seq(oracle::random_tokens(rng, 7, vocab, 1));
    const auto b = seq(oracle::random_tokens(rng, 7, vocab, 1));
    o.require(wmd(a, a, store) == 0.0, "WMD(x,x) != 0");
    o.require(std::abs(wmd(a, b, store) - wmd(b, a, store)) <= 1e-9, "WMD asymmetric");
  }
  if (o.ok) o.detail = std::to_string(trials) + " random problems, max cost deviation " + std::to_string(worst);
  return o;
}

Outcome overlap_suite() {
  Outcome o;
  std::mt19937_64 rng(3003);
  const oracle::Tokens vocab{"de", "patient", "heeft", "koorts", "pijn", "en", "rust"};
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  std::string file = std::to_string(vocab.size()) + " 3\n";
  for (const auto& w : vocab) {
    file += w + " " + std::to_string(coord(rng)) + " " + std::to_string(coord(rng)) + " " + std::to_string(coord(rng)) + "\n";
  }
  const EmbeddingStore store = EmbeddingStore::parse(file);
  for (int t = 0; t < 500 && o.ok; ++t) {
    const auto rawa = oracle::random_tokens(rng, 10, vocab, 1);
    const auto rawb = oracle::random_tokens(rng, 10, vocab, 1);
    const auto a = seq(rawa), b = seq(rawb);
    std::string text;
    for (const auto& w : rawa) text += (text.empty() ? "" : " ") + w;

    for (std::size_t n = 1; n <= std::min<std::size_t>(4, a.size()); ++n) {
      o.require(rouge_n(a, a, n).f == 1.0, "ROUGE-" + std::to_string(n) + " identity");
    }
    o.require(rouge_l(a, a).f == 1.0, "ROUGE-L identity");
    o.require(std::abs(chrf(text, text) - 1.0) <= 1e-12, "CHRF identity");
    o.require(std::abs(bleu(a, a) - 1.0) <= 1e-12, "BLEU identity");
    o.require(rouge_n(a, b, 1).f == prf_unigram(a, b).f, "ROUGE-1 F != unigram F");

    const PRF ab = prf_unigram(a, b), ba = prf_unigram(b, a);
    o.require(ab.precision == ba.recall && ab.recall == ba.precision, "unigram P/R duality");
    const PRF gab = greedy_match_score(embed(a, store), embed(b, store));
    const PRF gba = greedy_match_score(embed(b, store), embed(a, store));
    o.require(std::abs(gab.precision - gba.recall) <= 1e-12 && std::abs(gab.recall - gba.precision) <= 1e-12,
              "greedy P/R duality");
  }
  BleuParams two;
  two.max_n = 2;
  const double example = bleu(seq({"a", "b", "c", "d"}), seq({"a", "b", "c", "d", "e"}), two);
  o.require(std::abs(example - 0.7788007830714049) <= 1e-6, "BLEU example = " + std::to_string(example));
  if (o.ok) o.detail = "500 random pairs, BLEU example " + fmt(example, 6);
  return o;
}

Outcome orientation_suite() {
  Outcome o;
  const std::vector<HumanAnnotation> annotations = load_annotations(g_fixtures / "annotations.csv");
  std::vector<std::string> pair_ids;
  for (const auto& a : annotations) pair_ids.push_back(a.pair_id);

  std::mt19937_64 rng(4004);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::string> metric_ids;
  for (const auto& d : registry()) metric_ids.push_back(d.id);
  std::vector<double> values;
  for (std::size_t r = 0; r < pair_ids.size(); ++r) {
    for (std::size_t c = 0; c < metric_ids.size(); ++c) values.push_back(unit(rng));
  }
  const ScoreMatrix scores(pair_ids, metric_ids, values);
  const CorrelationTable base = correlate(scores, annotations);
  const CasTable base_cas = compute_cas(base);

  for (const auto& d : registry()) {
    if (d.orientation != Orientation::LowerBetter) continue;
    std::vector<double> col = scores.column(d.id);
    for (double& v : col) v = -v;
    std::vector<MetricDescriptor> flipped = registry();
    for (auto& f : flipped) {
      if (f.id == d.id) f.orientation = Orientation::HigherBetter;
    }
    const CorrelationTable t = correlate(scores.with_column(d.id, col), annotations, flipped);
    o.require(t == base, "correlation table changed when flipping " + d.id);
    o.require(compute_cas(t) == base_cas, "CAS table changed when flipping " + d.id);
  }

  for (int trial = 0; trial < 100 && o.ok; ++trial) {
    CorrelationTable t;
    for (std::size_t m = 0; m < 10; ++m) {
      CorrelationRow row;
      row.metric_id = "m" + std::to_string(m);
      for (double& r : row.r) r = 2.0 * unit(rng) - 1.0;
      t.rows.push_back(row);
    }
    const CasTable before = compute_cas(t);
    const std::size_t column = static_cast<std::size_t>(trial % 4);
    const double shift = 2.0 * unit(rng) - 1.0;
    CorrelationTable shifted = t;
    for (auto& row : shifted.rows) row.r[column] += shift;
    const CasTable after = compute_cas(shifted);
    for (std::size_t m = 0; m < before.rows.size(); ++m) {
      o.require(std::abs(before.rows[m].cas - after.rows[m].cas) <= 1e-12, "shift changed CAS");
    }
  }
  if (o.ok) o.detail = "orientation flips bit-identical; 100 shifted tables";
  return o;
}

int shell(const std::string& command) { return std::system(command.c_str()); }

std::string quote(const fs::path& p) { return "'" + p.string() + "'"; }

Outcome determinism() {
  Outcome o;
  const fs::path dir = fs::temp_directory_path() / ("medrep-acceptance-" + std::to_string(std::random_device{}()));
  fs::create_directories(dir);
  std::vector<std::string> outputs;
  for (int run = 0; run < 2 && o.ok; ++run) {
    const fs::path scores = dir / ("scores" + std::to_string(run) + ".csv");
    const fs::path eval = dir / ("eval" + std::to_string(run) + ".csv");
    const std::string jobs = run == 0 ? "1" : "4";
    const int s = shell(quote(g_cli) + " score --reports " + quote(g_fixtures / "corpus") + " --embeddings " +
                        quote(g_fixtures / "vectors.txt") + " --synonyms " + quote(g_fixtures / "synonyms.tsv") +
                        " --jobs " + jobs + " --precision -1 -o " + quote(scores) + " 2>/dev/null");
    const int e = shell(quote(g_cli) + " evaluate --scores " + quote(scores) + " --annotations " +
                        quote(g_fixtures / "annotations.csv") + " -o " + quote(eval) + " 2>/dev/null");
    o.require(s == 0 && e == 0, "command failed");
    if (o.ok) outputs.push_back(csv::read_file(scores) + "\x1f" + csv::read_file(eval));
  }
  fs::remove_all(dir);
  if (o.ok) o.require(outputs[0] == outputs[1], "outputs differ between runs");
  if (o.ok) o.detail = "two runs byte-identical (" + std::to_string(outputs[0].size()) + " bytes)";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::cerr << "usage: medrep_acceptance <medrep executable> <fixture dir>\n";
    return 2;
  }
  g_cli = argv[1];
  g_fixtures = argv[2];

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"CAS reproduction from published correlations", cas_reproduction},
      {"preferred metrics at k=3", preferred_metrics},
      {"annotation averages", annotation_averages},
      {"t-tests from summary statistics", ttest_reproduction},
      {"edit-distance oracle suite", edit_distance_suite},
      {"transport oracle suite", transport_suite},
      {"overlap identity and duality suite", overlap_suite},
      {"pipeline orientation and shift invariance", orientation_suite},
      {"determinism of score + evaluate", determinism},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = criteria[i].second();
    } catch (const std::exception& e) {
      outcome.ok = false;
      outcome.detail = std::string("exception: ") + e.what();
    }
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    if (outcome.ok && i < 4 && ms >= 1000.0) {
      outcome.ok = false;
      outcome.detail = "exceeded the 1 s budget";
    }
    if (!outcome.ok) ++failures;
    std::cout << (outcome.ok ? "PASS" : "FAIL") << " [" << i + 1 << "] " << criteria[i].first << " - "
              << outcome.detail << " (" << csv::format_fixed(ms, 1) << " ms)\n";
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << "\n";
  return failures == 0 ? 0 : 1;
}
