#include "medrep/metric.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <set>
#include <thread>

#include <json.hpp>

#include "medrep/csv.hpp"
#include "medrep/edit_metrics.hpp"
#include "medrep/error.hpp"

namespace medrep {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<MetricDescriptor> build_registry() {
  using C = Category;
  using O = Orientation;
  const ValueRange unit{0.0, 1.0};
  const ValueRange unbounded{0.0, kInf};
  return {
      {"levenshtein", "Levenshtein", C::EditDistance, O::LowerBetter, unit, false, true},
      {"levenshtein-w", "Levenshtein (word)", C::EditDistance, O::LowerBetter, unit, false, false},
      {"wer", "WER", C::EditDistance, O::LowerBetter, unbounded, false, true},
      {"mer", "MER", C::EditDistance, O::LowerBetter, unit, false, false},
      {"wil", "WIL", C::EditDistance, O::LowerBetter, unit, false, false},
      {"bertscore", "BertScore", C::Embedding, O::HigherBetter, {-1.0, 1.0}, true, true},
      {"wmd", "WMD", C::Embedding, O::LowerBetter, unbounded, true, true},
      {"rouge-1", "ROUGE-1", C::TextOverlap, O::HigherBetter, unit, false, true},
      {"rouge-2", "ROUGE-2", C::TextOverlap, O::HigherBetter, unit, false, true},
      {"rouge-l", "ROUGE-L", C::TextOverlap, O::HigherBetter, unit, false, true},
      {"bleu", "BLEU", C::TextOverlap, O::HigherBetter, unit, false, true},
      {"f-measure", "F-Measure", C::TextOverlap, O::HigherBetter, unit, false, true},
      {"meteor", "METEOR", C::TextOverlap, O::HigherBetter, unit, false, true},
      {"chrf", "CHRF", C::TextOverlap, O::HigherBetter, unit, false, false},
  };
}

std::string known_ids(const std::vector<MetricDescriptor>& descriptors) {
  std::string out;
  for (const auto& d : descriptors) {
    if (!out.empty()) out += ", ";
    out += d.id;
  }
  return out;
}

std::string report_key(const Report& report) {
  return report.id + "." + std::string(kind_suffix(report.kind));
}

void set_prf(MetricScore& score, const PRF& prf) {
  score.value = prf.f;
  score.precision = prf.precision;
  score.recall = prf.recall;
}

EmbeddedText embedded_side(const Report& report, const TokenSequence& words,
                           const ScoringContext& context) {
  if (context.contextual && context.contextual->contains(report_key(report))) {
    return context.contextual->text(report_key(report));
  }
  if (!context.embeddings) {
    throw ConfigurationError("bertscore needs word vectors (--embeddings) or contextual vectors for " +
                             report_key(report));
  }
  return embed(words, *context.embeddings);
}

}  // namespace

std::string_view category_name(Category category) {
  switch (category) {
    case Category::EditDistance: return "edit-distance";
    case Category::Embedding: return "embedding";
    case Category::TextOverlap: return "text-overlap";
  }
  return "?";
}

std::string_view orientation_name(Orientation orientation) {
  return orientation == Orientation::HigherBetter ? "higher-better" : "lower-better";
}

const std::vector<MetricDescriptor>& registry() {
  static const std::vector<MetricDescriptor> table = build_registry();
  return table;
}

const MetricDescriptor* find_metric(std::string_view id, const std::vector<MetricDescriptor>& descriptors) {
  for (const auto& d : descriptors) {
    if (d.id == id) return &d;
  }
  return nullptr;
}

const MetricDescriptor& require_metric(std::string_view id, const std::vector<MetricDescriptor>& descriptors) {
  const MetricDescriptor* d = find_metric(id, descriptors);
  if (d == nullptr) {
    throw LookupError("unknown metric '" + std::string(id) + "'; known metrics: " + known_ids(descriptors));
  }
  return *d;
}

std::vector<std::string> core_metric_ids() {
  std::vector<std::string> out;
  for (const auto& d : registry()) {
    if (d.core) out.push_back(d.id);
  }
  return out;
}

MetricScore score_pair(const ReportPair& pair, std::string_view metric_id, const ScoringContext& context) {
  const MetricDescriptor& descriptor = require_metric(metric_id);
  MetricScore score;
  score.metric_id = descriptor.id;
  score.pair_id = pair.pair_id;

  const std::string cand_text = normalize(report_text(pair.candidate, context.text_mode), context.tokenizer);
  const std::string ref_text = normalize(report_text(pair.reference, context.text_mode), context.tokenizer);
  auto words = [&](const std::string& text) { return word_tokens(text, context.tokenizer); };
  const std::string& id = descriptor.id;

  if (id == "levenshtein") {
    score.value = levenshtein_normalized(char_tokens(cand_text), char_tokens(ref_text));
  } else if (id == "levenshtein-w") {
    score.value = levenshtein_normalized(words(cand_text), words(ref_text));
  } else if (id == "wer") {
    score.value = wer(words(ref_text), words(cand_text));
  } else if (id == "mer") {
    score.value = mer(words(ref_text), words(cand_text));
  } else if (id == "wil") {
    score.value = wil(words(ref_text), words(cand_text));
  } else if (id == "rouge-1" || id == "rouge-2") {
    const std::size_t n = id == "rouge-1" ? 1 : 2;
    const TokenSequence ref = words(ref_text);
    if (ref.size() < n) {
      score.warnings.push_back(id + ": reference of pair " + pair.pair_id + " has fewer than " +
                               std::to_string(n) + " tokens; recall undefined, scored 0");
    }
    set_prf(score, rouge_n(words(cand_text), ref, n, context.rouge_beta));
  } else if (id == "rouge-l") {
    set_prf(score, rouge_l(words(cand_text), words(ref_text), context.rouge_beta));
  } else if (id == "f-measure") {
    set_prf(score, prf_unigram(words(cand_text), words(ref_text), 1.0));
  } else if (id == "bleu") {
    score.value = bleu(words(cand_text), words(ref_text), context.bleu);
  } else if (id == "meteor") {
    MeteorParams params = context.meteor;
    if (context.synonyms) params.synonyms = context.synonyms.get();
    score.value = meteor(words(cand_text), words(ref_text), params);
  } else if (id == "chrf") {
    set_prf(score, chrf_prf(cand_text, ref_text, context.chrf_max_n, context.chrf_beta));
  } else if (id == "bertscore") {
    const EmbeddedText cand = embedded_side(pair.candidate, words(cand_text), context);
    const EmbeddedText ref = embedded_side(pair.reference, words(ref_text), context);
    score.oov_tokens = cand.oov_dropped + ref.oov_dropped;
    score.total_tokens = cand.tokens.size() + ref.tokens.size();
    set_prf(score, greedy_match_score(cand, ref, context.idf.get()));
  } else if (id == "wmd") {
    if (!context.embeddings) throw ConfigurationError("wmd needs word vectors (--embeddings)");
    const TokenSequence cand = words(cand_text);
    const TokenSequence ref = words(ref_text);
    const Nbow a = nbow(cand, *context.embeddings);
    const Nbow b = nbow(ref, *context.embeddings);
    score.oov_tokens = a.oov_dropped + b.oov_dropped;
    score.total_tokens = cand.size() + ref.size();
    score.value = wmd(cand, ref, *context.embeddings);
  } else {
    throw LookupError("metric '" + id + "' has no implementation");
  }

  if (!std::isfinite(score.value) || !descriptor.range.contains(score.value)) {
    throw Error(id + " produced out-of-range value " + std::to_string(score.value) + " for pair " +
                pair.pair_id);
  }
  return score;
}

ScoreMatrix::ScoreMatrix(std::vector<std::string> pair_ids, std::vector<std::string> metric_ids,
                         std::vector<double> values)
    : pair_ids_(std::move(pair_ids)), metric_ids_(std::move(metric_ids)), values_(std::move(values)) {
  if (values_.size() != pair_ids_.size() * metric_ids_.size()) {
    throw ValidationError("score matrix is not rectangular");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw ValidationError("score matrix contains a non-finite value");
  }
  std::set<std::string> seen(pair_ids_.begin(), pair_ids_.end());
  if (seen.size() != pair_ids_.size()) throw DuplicateError("score matrix repeats a pair id");
  seen = std::set<std::string>(metric_ids_.begin(), metric_ids_.end());
  if (seen.size() != metric_ids_.size()) throw DuplicateError("score matrix repeats a metric id");
}

std::vector<double> ScoreMatrix::column(std::string_view metric_id) const {
  for (std::size_t c = 0; c < cols(); ++c) {
    if (metric_ids_[c] != metric_id) continue;
    std::vector<double> out(rows());
    for (std::size_t r = 0; r < rows(); ++r) out[r] = at(r, c);
    return out;
  }
  throw LookupError("score matrix has no column '" + std::string(metric_id) + "'");
}

ScoreMatrix ScoreMatrix::with_column(std::string_view metric_id, const std::vector<double>& values) const {
  if (values.size() != rows()) throw ArgumentError("replacement column has the wrong length");
  std::vector<double> out = values_;
  for (std::size_t c = 0; c < cols(); ++c) {
    if (metric_ids_[c] != metric_id) continue;
    for (std::size_t r = 0; r < rows(); ++r) out[r * cols() + c] = values[r];
    return ScoreMatrix(pair_ids_, metric_ids_, std::move(out));
  }
  throw LookupError("score matrix has no column '" + std::string(metric_id) + "'");
}

std::string ScoreMatrix::to_csv(int decimals) const {
  std::vector<std::string> header = {"pair_id"};
  header.insert(header.end(), metric_ids_.begin(), metric_ids_.end());
  std::string out = csv::join(header) + "\n";
  for (std::size_t r = 0; r < rows(); ++r) {
    std::vector<std::string> fields = {pair_ids_[r]};
    for (std::size_t c = 0; c < cols(); ++c) {
      fields.push_back(decimals < 0 ? csv::format_exact(at(r, c)) : csv::format_fixed(at(r, c), decimals));
    }
    out += csv::join(fields) + "\n";
  }
  return out;
}

ScoreMatrix ScoreMatrix::from_csv(std::string_view text, const std::string& source) {
  const auto rows = csv::parse(text, source);
  if (rows.empty()) throw ParseError(source, 1, "missing header");
  const auto& header = rows.front().fields;
  if (header.empty() || header.front() != "pair_id") {
    throw ParseError(source, rows.front().line, "first column must be pair_id");
  }
  std::vector<std::string> metrics(header.begin() + 1, header.end());
  std::vector<std::string> pairs;
  std::vector<double> values;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.fields.size() != header.size()) {
      throw ParseError(source, row.line, "expected " + std::to_string(header.size()) + " fields");
    }
    pairs.push_back(row.fields[0]);
    for (std::size_t c = 1; c < row.fields.size(); ++c) {
      values.push_back(csv::parse_real(row.fields[c], source, row.line, header[c]));
    }
  }
  return ScoreMatrix(std::move(pairs), std::move(metrics), std::move(values));
}

std::string ScoreMatrix::to_json() const {
  nlohmann::ordered_json doc;
  doc["metrics"] = metric_ids_;
  doc["rows"] = nlohmann::ordered_json::array();
  for (std::size_t r = 0; r < rows(); ++r) {
    nlohmann::ordered_json row;
    row["pair_id"] = pair_ids_[r];
    for (std::size_t c = 0; c < cols(); ++c) row["scores"][metric_ids_[c]] = at(r, c);
    doc["rows"].push_back(std::move(row));
  }
  return doc.dump(2) + "\n";
}

ScoreMatrix score_corpus(const std::vector<ReportPair>& pairs, const std::vector<std::string>& metric_ids,
                         const ScoringContext& context, unsigned jobs, ScoringDiagnostics* diagnostics) {
  for (const std::string& id : metric_ids) {
    const MetricDescriptor& d = require_metric(id);
    if (d.id == "wmd" && !context.embeddings) {
      throw ConfigurationError("metric wmd needs word vectors (--embeddings)");
    }
    if (d.id == "bertscore" && !context.embeddings && !context.contextual) {
      throw ConfigurationError("metric bertscore needs word vectors (--embeddings) or contextual vectors");
    }
  }

  const std::size_t cells = pairs.size() * metric_ids.size();
  std::vector<MetricScore> results(cells);
  std::vector<std::exception_ptr> failures(cells);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t cell = next++; cell < cells; cell = next++) {
      const auto& pair = pairs[cell / metric_ids.size()];
      const auto& id = metric_ids[cell % metric_ids.size()];
      try {
        results[cell] = score_pair(pair, id, context);
      } catch (...) {
        failures[cell] = std::current_exception();
      }
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(cells, 1))));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  for (std::size_t cell = 0; cell < cells; ++cell) {
    if (!failures[cell]) continue;
    const std::string where = "pair " + pairs[cell / metric_ids.size()].pair_id + ", metric " +
                              metric_ids[cell % metric_ids.size()] + ": ";
    try {
      std::rethrow_exception(failures[cell]);
    } catch (const ConfigurationError& e) {
      throw ConfigurationError(where + e.what());
    } catch (const std::exception& e) {
      throw Error(where + e.what());
    }
  }

  std::vector<std::string> pair_ids;
  for (const auto& pair : pairs) pair_ids.push_back(pair.pair_id);
  std::vector<double> values;
  values.reserve(cells);
  for (const MetricScore& s : results) {
    values.push_back(s.value);
    if (diagnostics) {
      diagnostics->warnings.insert(diagnostics->warnings.end(), s.warnings.begin(), s.warnings.end());
      if (s.total_tokens > 0) {
        OovTally& tally = diagnostics->oov[s.metric_id];
        tally.oov_tokens += s.oov_tokens;
        tally.total_tokens += s.total_tokens;
      }
    }
  }
  return ScoreMatrix(std::move(pair_ids), metric_ids, std::move(values));
}

IdfWeights reference_idf(const std::vector<ReportPair>& pairs, const ScoringContext& context) {
  std::vector<TokenSequence> refs;
  for (const auto& pair : pairs) {
    refs.push_back(word_tokens(report_text(pair.reference, context.text_mode), context.tokenizer));
  }
  return compute_idf(refs);
}

}  // namespace medrep
