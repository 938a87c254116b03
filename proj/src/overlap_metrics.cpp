#include "medrep/overlap_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "medrep/csv.hpp"
#include "medrep/error.hpp"

namespace medrep {
namespace {

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

// Candidate-to-reference compatibility for one alignment stage.
using Compat = std::vector<std::vector<std::size_t>>;

// Kuhn's augmenting-path matching, visiting candidates and their compatible
// reference positions in ascending order.
std::size_t max_matching(const Compat& compat, std::size_t ref_len, std::vector<long>& cand_to_ref) {
  std::vector<long> ref_to_cand(ref_len, -1);
  cand_to_ref.assign(compat.size(), -1);
  std::vector<char> visited;
  std::function<bool(std::size_t)> augment = [&](std::size_t i) {
    for (std::size_t j : compat[i]) {
      if (visited[j]) continue;
      visited[j] = 1;
      if (ref_to_cand[j] < 0 || augment(static_cast<std::size_t>(ref_to_cand[j]))) {
        ref_to_cand[j] = static_cast<long>(i);
        cand_to_ref[i] = static_cast<long>(j);
        return true;
      }
    }
    return false;
  };
  std::size_t size = 0;
  for (std::size_t i = 0; i < compat.size(); ++i) {
    if (compat[i].empty()) continue;
    visited.assign(ref_len, 0);
    if (augment(i)) ++size;
  }
  return size;
}

// Repeatedly takes the longest diagonal run of compatible free pairs.
std::vector<long> longest_run_greedy(const Compat& compat, std::size_t ref_len) {
  const std::size_t n = compat.size();
  std::vector<std::vector<char>> ok(n, std::vector<char>(ref_len, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j : compat[i]) ok[i][j] = 1;
  }
  std::vector<long> cand_to_ref(n, -1);
  std::vector<char> ref_used(ref_len, 0);
  std::vector<std::size_t> run((n + 1) * (ref_len + 1));
  auto cell = [&](std::size_t i, std::size_t j) -> std::size_t& { return run[i * (ref_len + 1) + j]; };

  while (true) {
    std::fill(run.begin(), run.end(), 0);
    std::size_t best = 0, bi = 0, bj = 0;
    for (std::size_t i = n; i-- > 0;) {
      for (std::size_t j = ref_len; j-- > 0;) {
        if (ok[i][j] && cand_to_ref[i] < 0 && !ref_used[j]) cell(i, j) = 1 + cell(i + 1, j + 1);
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < ref_len; ++j) {
        if (cell(i, j) > best) {
          best = cell(i, j);
          bi = i;
          bj = j;
        }
      }
    }
    if (best == 0) break;
    for (std::size_t k = 0; k < best; ++k) {
      cand_to_ref[bi + k] = static_cast<long>(bj + k);
      ref_used[bj + k] = 1;
    }
  }
  return cand_to_ref;
}

std::size_t matched(const std::vector<long>& cand_to_ref) {
  return static_cast<std::size_t>(
      std::count_if(cand_to_ref.begin(), cand_to_ref.end(), [](long j) { return j >= 0; }));
}

// Depth-first branch and bound over candidate positions. `fixed` holds the
// pairs of earlier stages; the stage must add exactly `target` matches.
class ChunkSearch {
 public:
  ChunkSearch(const Compat& compat, const std::vector<long>& fixed, std::size_t ref_len,
              std::size_t target, std::size_t budget)
      : compat_(compat), fixed_(fixed), target_(target), budget_(budget),
        current_(fixed), ref_used_(ref_len, 0) {
    for (long j : fixed) {
      if (j >= 0) ref_used_[static_cast<std::size_t>(j)] = 1;
    }
    remaining_.assign(compat.size() + 1, 0);
    for (std::size_t i = compat.size(); i-- > 0;) {
      remaining_[i] = remaining_[i + 1] + (compat[i].empty() ? 0 : 1);
    }
  }

  // `incumbent` must already be a full alignment with the target stage size.
  std::vector<long> run(std::vector<long> incumbent) {
    best_ = std::move(incumbent);
    best_chunks_ = count_chunks(best_);
    visit(0, 0, 0);
    return best_;
  }

 private:
  void visit(std::size_t i, std::size_t added, std::size_t chunks) {
    if (nodes_++ >= budget_ || chunks >= best_chunks_) return;
    if (added + remaining_[i] < target_) return;
    if (i == compat_.size()) {
      best_ = current_;
      best_chunks_ = chunks;
      return;
    }
    const long prev = i > 0 ? current_[i - 1] : -2;
    auto opens_chunk = [&](long j) { return !(prev >= 0 && j == prev + 1); };

    if (fixed_[i] >= 0 || compat_[i].empty()) {
      const long j = current_[i];
      visit(i + 1, added, chunks + (j >= 0 && opens_chunk(j) ? 1 : 0));
      return;
    }
    if (added < target_) {
      // Extending the open chunk first finds good solutions early.
      const long extend = prev >= 0 ? prev + 1 : -1;
      auto try_ref = [&](std::size_t j) {
        if (ref_used_[j]) return;
        ref_used_[j] = 1;
        current_[i] = static_cast<long>(j);
        visit(i + 1, added + 1, chunks + (opens_chunk(static_cast<long>(j)) ? 1 : 0));
        current_[i] = -1;
        ref_used_[j] = 0;
      };
      if (extend >= 0 && std::binary_search(compat_[i].begin(), compat_[i].end(),
                                            static_cast<std::size_t>(extend))) {
        try_ref(static_cast<std::size_t>(extend));
      }
      for (std::size_t j : compat_[i]) {
        if (static_cast<long>(j) != extend) try_ref(j);
      }
    }
    visit(i + 1, added, chunks);
  }

  const Compat& compat_;
  const std::vector<long>& fixed_;
  std::size_t target_;
  std::size_t budget_;
  std::size_t nodes_ = 0;
  std::vector<long> current_;
  std::vector<char> ref_used_;
  std::vector<std::size_t> remaining_;
  std::vector<long> best_;
  std::size_t best_chunks_ = 0;
};

template <typename Related>
void run_stage(const TokenSequence& cand, const TokenSequence& ref, std::vector<long>& cand_to_ref,
               std::size_t budget, Related related) {
  std::vector<char> ref_used(ref.size(), 0);
  for (long j : cand_to_ref) {
    if (j >= 0) ref_used[static_cast<std::size_t>(j)] = 1;
  }
  Compat compat(cand.size());
  bool any = false;
  for (std::size_t i = 0; i < cand.size(); ++i) {
    if (cand_to_ref[i] >= 0) continue;
    for (std::size_t j = 0; j < ref.size(); ++j) {
      if (!ref_used[j] && related(cand[i], ref[j])) {
        compat[i].push_back(j);
        any = true;
      }
    }
  }
  if (!any) return;

  std::vector<long> matching;
  const std::size_t target = max_matching(compat, ref.size(), matching);

  auto merged = [&](const std::vector<long>& stage) {
    std::vector<long> out = cand_to_ref;
    for (std::size_t i = 0; i < stage.size(); ++i) {
      if (stage[i] >= 0) out[i] = stage[i];
    }
    return out;
  };
  std::vector<long> incumbent = merged(matching);
  const std::vector<long> greedy = longest_run_greedy(compat, ref.size());
  if (matched(greedy) == target) {
    std::vector<long> candidate = merged(greedy);
    if (count_chunks(candidate) < count_chunks(incumbent)) incumbent = std::move(candidate);
  }
  ChunkSearch search(compat, cand_to_ref, ref.size(), target, budget);
  cand_to_ref = search.run(std::move(incumbent));
}

}  // namespace

PRF make_prf(double precision, double recall, double beta) {
  PRF out{precision, recall, 0.0, beta};
  const double b2 = beta * beta;
  if (precision + recall > 0.0) {
    out.f = (1.0 + b2) * precision * recall / (b2 * precision + recall);
  }
  return out;
}

PRF prf_unigram(const TokenSequence& cand, const TokenSequence& ref, double beta) {
  const std::size_t m = clipped_overlap(ngrams(cand, 1), ngrams(ref, 1));
  return make_prf(ratio(m, cand.size()), ratio(m, ref.size()), beta);
}

double bleu(const TokenSequence& cand, const TokenSequence& ref, const BleuParams& params) {
  if (params.max_n == 0) throw ArgumentError("BLEU max_n must be at least 1");
  if (params.smoothing == BleuSmoothing::AddEpsilon && !(params.epsilon > 0.0)) {
    throw ArgumentError("BLEU epsilon must be positive");
  }
  if (cand.empty()) return 0.0;

  // Orders longer than the candidate have no n-grams and are left out.
  const std::size_t orders = std::min(params.max_n, cand.size());
  double log_sum = 0.0;
  for (std::size_t n = 1; n <= orders; ++n) {
    const NGramMultiset c = ngrams(cand, n);
    const std::size_t total = c.total();
    double p = ratio(clipped_overlap(c, ngrams(ref, n)), total);
    if (p == 0.0) {
      if (params.smoothing == BleuSmoothing::None) return 0.0;
      p = params.epsilon;
    }
    log_sum += std::log(p) / static_cast<double>(orders);
  }
  const double bp = std::min(1.0, std::exp(1.0 - static_cast<double>(ref.size()) /
                                                     static_cast<double>(cand.size())));
  return bp * std::exp(log_sum);
}

PRF rouge_n(const TokenSequence& cand, const TokenSequence& ref, std::size_t n, double beta) {
  if (n == 0) throw ArgumentError("ROUGE-n requires n >= 1");
  const NGramMultiset c = ngrams(cand, n);
  const NGramMultiset r = ngrams(ref, n);
  const std::size_t m = clipped_overlap(c, r);
  return make_prf(ratio(m, c.total()), ratio(m, r.total()), beta);
}

std::size_t lcs_length(const TokenSequence& a, const TokenSequence& b) {
  std::vector<std::size_t> row(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = 0;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = a[i - 1] == b[j - 1] ? diag + 1 : std::max(up, row[j - 1]);
      diag = up;
    }
  }
  return row[b.size()];
}

PRF rouge_l(const TokenSequence& cand, const TokenSequence& ref, double beta) {
  const std::size_t l = lcs_length(cand, ref);
  return make_prf(ratio(l, cand.size()), ratio(l, ref.size()), beta);
}

SynonymDictionary SynonymDictionary::parse(std::string_view text, const TokenizerConfig& config,
                                           const std::string& source) {
  SynonymDictionary dict;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;

    const std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos) throw ParseError(source, line_no, "expected word<TAB>synonyms");
    const std::string word = normalize(line.substr(0, tab), config);
    if (word.empty()) throw ParseError(source, line_no, "empty headword");
    std::string_view rest = line.substr(tab + 1);
    while (!rest.empty()) {
      const std::size_t comma = rest.find(',');
      const std::string syn = normalize(rest.substr(0, comma), config);
      if (!syn.empty() && syn != word) dict.add(word, syn);
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
  }
  return dict;
}

SynonymDictionary SynonymDictionary::load(const std::filesystem::path& path,
                                          const TokenizerConfig& config) {
  return parse(csv::read_file(path), config, path.string());
}

void SynonymDictionary::add(const std::string& a, const std::string& b) {
  relation_[a].insert(b);
  relation_[b].insert(a);
}

bool SynonymDictionary::related(const std::string& a, const std::string& b) const {
  const auto it = relation_.find(a);
  return it != relation_.end() && it->second.count(b) > 0;
}

std::size_t count_chunks(const std::vector<long>& cand_to_ref) {
  std::size_t chunks = 0;
  long prev = -2;
  for (long j : cand_to_ref) {
    if (j >= 0 && !(prev >= 0 && j == prev + 1)) ++chunks;
    prev = j;
  }
  return chunks;
}

MeteorAlignment meteor_align(const TokenSequence& cand, const TokenSequence& ref,
                             const MeteorParams& params) {
  std::vector<long> cand_to_ref(cand.size(), -1);
  run_stage(cand, ref, cand_to_ref, params.search_budget,
            [](const std::string& a, const std::string& b) { return a == b; });
  if (params.synonyms != nullptr && !params.synonyms->empty()) {
    const SynonymDictionary& dict = *params.synonyms;
    run_stage(cand, ref, cand_to_ref, params.search_budget,
              [&](const std::string& a, const std::string& b) { return dict.related(a, b); });
  }
  MeteorAlignment out;
  out.matches = matched(cand_to_ref);
  out.chunks = count_chunks(cand_to_ref);
  out.cand_to_ref = std::move(cand_to_ref);
  return out;
}

double meteor(const TokenSequence& cand, const TokenSequence& ref, const MeteorParams& params) {
  if (!(params.alpha > 0.0 && params.alpha < 1.0)) throw ArgumentError("METEOR alpha must be in (0,1)");
  if (params.gamma < 0.0 || params.theta < 0.0) throw ArgumentError("METEOR gamma and theta must be >= 0");
  const MeteorAlignment a = meteor_align(cand, ref, params);
  if (a.matches == 0) return 0.0;
  const double p = ratio(a.matches, cand.size());
  const double r = ratio(a.matches, ref.size());
  const double fmean = p * r / (params.alpha * p + (1.0 - params.alpha) * r);
  const double penalty = params.gamma * std::pow(ratio(a.chunks, a.matches), params.theta);
  return fmean * (1.0 - penalty);
}

PRF chrf_prf(std::string_view cand_text, std::string_view ref_text, std::size_t max_n, double beta) {
  if (max_n == 0) throw ArgumentError("chrF max_n must be at least 1");
  const TokenSequence cand = char_tokens(remove_whitespace(cand_text));
  const TokenSequence ref = char_tokens(remove_whitespace(ref_text));
  double p_sum = 0.0;
  double r_sum = 0.0;
  std::size_t orders = 0;
  for (std::size_t n = 1; n <= max_n; ++n) {
    const NGramMultiset r = ngrams(ref, n);
    if (r.total() == 0) continue;
    const NGramMultiset c = ngrams(cand, n);
    const std::size_t m = clipped_overlap(c, r);
    p_sum += ratio(m, c.total());
    r_sum += ratio(m, r.total());
    ++orders;
  }
  if (orders == 0) return make_prf(0.0, 0.0, beta);
  return make_prf(p_sum / static_cast<double>(orders), r_sum / static_cast<double>(orders), beta);
}

double chrf(std::string_view cand_text, std::string_view ref_text, std::size_t max_n, double beta) {
  return chrf_prf(cand_text, ref_text, max_n, beta).f;
}

}  // namespace medrep
