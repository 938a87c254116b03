#include "medrep/embedding_metrics.hpp"

#include <charconv>
#include <cmath>
#include <set>

#include "medrep/csv.hpp"
#include "medrep/error.hpp"

namespace medrep {

EmbeddedText embed(const TokenSequence& tokens, const EmbeddingStore& store) {
  EmbeddedText out;
  out.tokens = tokens;
  for (const std::string& token : tokens.tokens) {
    const Vector* v = store.lookup(token);
    if (v == nullptr) {
      if (store.oov_policy() == OovPolicy::Error) {
        throw OovError("token '" + token + "' is not in the embedding vocabulary");
      }
      ++out.oov_dropped;
      continue;
    }
    out.kept.push_back(token);
    out.vectors.push_back(*v);
  }
  return out;
}

Nbow nbow(const TokenSequence& tokens, const EmbeddingStore& store) {
  const EmbeddedText embedded = embed(tokens, store);
  if (embedded.kept.empty()) {
    throw UndefinedError("no in-vocabulary tokens (" + std::to_string(embedded.oov_dropped) +
                         " out of vocabulary)");
  }
  std::map<std::string, double> counts;
  for (const std::string& token : embedded.kept) counts[token] += 1.0;

  Nbow out;
  out.oov_dropped = embedded.oov_dropped;
  std::vector<double> mass;
  for (const auto& [type, count] : counts) {
    out.types.push_back(type);
    mass.push_back(count);
  }
  out.distribution = Distribution::from_counts(mass);
  return out;
}

double wmd(const TokenSequence& cand, const TokenSequence& ref, const EmbeddingStore& store) {
  const Nbow a = nbow(cand, store);
  const Nbow b = nbow(ref, store);
  CostMatrix costs(a.types.size(), b.types.size());
  for (std::size_t i = 0; i < a.types.size(); ++i) {
    const Vector& u = *store.lookup(a.types[i]);
    for (std::size_t j = 0; j < b.types.size(); ++j) {
      costs(i, j) = a.types[i] == b.types[j] ? 0.0 : euclidean(u, *store.lookup(b.types[j]));
    }
  }
  return solve_emd(a.distribution, b.distribution, costs).total_cost;
}

IdfWeights compute_idf(const std::vector<TokenSequence>& references) {
  std::map<std::string, std::size_t> df;
  for (const TokenSequence& ref : references) {
    for (const std::string& type : std::set<std::string>(ref.tokens.begin(), ref.tokens.end())) {
      ++df[type];
    }
  }
  const double m = static_cast<double>(references.size());
  IdfWeights idf;
  for (const auto& [type, count] : df) {
    idf.weights[type] = std::log((m + 1.0) / (static_cast<double>(count) + 1.0));
  }
  idf.unseen = std::log(m + 1.0);
  return idf;
}

namespace {

double idf_of(const IdfWeights* idf, const std::string& token) {
  return idf == nullptr ? 1.0 : (*idf)(token);
}

// Weighted mean over `side` of the best cosine against `other`.
double directed_score(const EmbeddedText& side, const EmbeddedText& other, const IdfWeights* idf) {
  double weighted = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < side.vectors.size(); ++i) {
    double best = -1.0;
    for (const Vector& v : other.vectors) best = std::max(best, cosine(side.vectors[i], v));
    const double w = idf_of(idf, side.kept[i]);
    weighted += w * best;
    total += w;
  }
  if (!(total > 0.0)) throw UndefinedError("greedy matching: IDF weights sum to zero");
  return weighted / total;
}

}  // namespace

PRF greedy_match_score(const EmbeddedText& cand, const EmbeddedText& ref, const IdfWeights* idf) {
  if (cand.vectors.empty() || ref.vectors.empty()) {
    throw UndefinedError("greedy matching needs in-vocabulary tokens on both sides");
  }
  const double precision = directed_score(cand, ref, idf);
  const double recall = directed_score(ref, cand, idf);
  return make_prf(precision, recall, 1.0);
}

ContextualEmbeddings ContextualEmbeddings::parse(std::string_view text, const std::string& source) {
  ContextualEmbeddings out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool header_seen = false;
  while (pos < text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;

    std::vector<std::string_view> cols;
    for (std::size_t start = 0;;) {
      const std::size_t tab = line.find('\t', start);
      cols.push_back(line.substr(start, tab == std::string_view::npos ? std::string_view::npos : tab - start));
      if (tab == std::string_view::npos) break;
      start = tab + 1;
    }
    if (!header_seen) {
      if (cols.size() != 4 || cols[0] != "report" || cols[1] != "token_index" || cols[2] != "token" ||
          cols[3] != "vector") {
        throw ParseError(source, line_no, "expected header report<TAB>token_index<TAB>token<TAB>vector");
      }
      header_seen = true;
      continue;
    }
    if (cols.size() != 4) throw ParseError(source, line_no, "expected 4 tab-separated columns");

    const std::string key(cols[0]);
    const long index = csv::parse_integer(std::string(cols[1]), source, line_no, "token_index");
    Vector v;
    std::string_view rest = cols[3];
    while (!rest.empty()) {
      const std::size_t sp = rest.find(' ');
      const std::string_view field = rest.substr(0, sp);
      if (!field.empty()) v.push_back(csv::parse_real(std::string(field), source, line_no, "vector"));
      if (sp == std::string_view::npos) break;
      rest.remove_prefix(sp + 1);
    }
    if (v.empty()) throw ParseError(source, line_no, "empty vector");
    if (out.dim_ == 0) out.dim_ = v.size();
    if (v.size() != out.dim_) {
      throw ParseError(source, line_no,
                       "expected " + std::to_string(out.dim_) + " components, got " + std::to_string(v.size()));
    }
    EmbeddedText& report = out.reports_[key];
    if (index != static_cast<long>(report.kept.size())) {
      throw ParseError(source, line_no,
                       "token_index " + std::to_string(index) + " out of sequence for " + key);
    }
    report.tokens.tokens.emplace_back(cols[2]);
    report.kept.emplace_back(cols[2]);
    report.vectors.push_back(std::move(v));
  }
  if (!header_seen) throw ParseError(source, 1, "empty contextual embedding file");
  return out;
}

ContextualEmbeddings ContextualEmbeddings::load(const std::filesystem::path& path) {
  return parse(csv::read_file(path), path.string());
}

EmbeddedText ContextualEmbeddings::text(const std::string& report_key) const {
  const auto it = reports_.find(report_key);
  if (it == reports_.end()) throw LookupError("no contextual embeddings for report " + report_key);
  return it->second;
}

}  // namespace medrep
