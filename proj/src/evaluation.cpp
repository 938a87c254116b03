#include "medrep/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include <json.hpp>

#include "medrep/csv.hpp"
#include "medrep/statistics.hpp"

namespace medrep {
namespace {

std::size_t index_of(Aspect a) { return static_cast<std::size_t>(a); }

std::vector<std::size_t> order_by(const std::vector<double>& keys, const std::vector<std::string>& ids) {
  std::vector<std::size_t> order(keys.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (keys[a] != keys[b]) return keys[a] < keys[b];
    return ids[a] < ids[b];
  });
  return order;
}

// Records ties whose members fall on both sides of the top-k boundary.
void note_boundary_ties(const std::string& label, const std::vector<double>& keys,
                        const std::vector<std::string>& ids, const std::vector<std::size_t>& order,
                        std::size_t k, std::vector<std::string>& ties) {
  if (k == 0 || k >= order.size()) return;
  const double boundary = keys[order[k - 1]];
  if (keys[order[k]] != boundary) return;
  std::string members;
  for (std::size_t idx : order) {
    if (keys[idx] != boundary) continue;
    if (!members.empty()) members += ", ";
    members += ids[idx];
  }
  ties.push_back(label + " tie at rank " + std::to_string(k) + " between " + members +
                 " resolved by metric id");
}

}  // namespace

std::string_view aspect_key(Aspect aspect) {
  switch (aspect) {
    case Aspect::Missing: return "mis";
    case Aspect::Incorrect: return "inc";
    case Aspect::AddedOnTopic: return "add_on";
    case Aspect::AddedOffTopic: return "add_off";
    case Aspect::PostEditTime: return "pet";
  }
  return "?";
}

double aspect_value(const HumanAnnotation& a, Aspect aspect) {
  switch (aspect) {
    case Aspect::Missing: return static_cast<double>(a.missing);
    case Aspect::Incorrect: return static_cast<double>(a.incorrect);
    case Aspect::AddedOnTopic: return static_cast<double>(a.added_on_topic);
    case Aspect::AddedOffTopic: return static_cast<double>(a.added_off_topic);
    case Aspect::PostEditTime: return a.post_edit_seconds;
  }
  return 0.0;
}

long round_half_up(double value) { return static_cast<long>(std::floor(value + 0.5)); }

std::array<long, 5> AspectAverages::rounded() const {
  std::array<long, 5> out{};
  for (std::size_t i = 0; i < mean.size(); ++i) out[i] = round_half_up(mean[i]);
  return out;
}

AspectAverages aggregate_annotations(std::span<const HumanAnnotation> annotations) {
  if (annotations.empty()) throw ArgumentError("no annotations to aggregate");
  AspectAverages out;
  out.n = annotations.size();
  for (Aspect aspect : kAspects) {
    double sum = 0.0;
    for (const auto& a : annotations) sum += aspect_value(a, aspect);
    out.mean[index_of(aspect)] = sum / static_cast<double>(out.n);
  }
  return out;
}

const CorrelationRow& CorrelationTable::row(std::string_view metric_id) const {
  for (const auto& r : rows) {
    if (r.metric_id == metric_id) return r;
  }
  throw LookupError("correlation table has no metric '" + std::string(metric_id) + "'");
}

std::string CorrelationTable::to_csv(int decimals) const {
  std::string out = "metric,mis,inc,add_on,add_off,pet\n";
  for (const auto& r : rows) {
    std::vector<std::string> fields = {r.metric_id};
    for (double v : r.r) fields.push_back(decimals < 0 ? csv::format_exact(v) : csv::format_fixed(v, decimals));
    out += csv::join(fields) + "\n";
  }
  return out;
}

CorrelationTable CorrelationTable::from_csv(std::string_view text, const std::string& source) {
  const auto rows = csv::parse(text, source);
  const std::vector<std::string> expected = {"metric", "mis", "inc", "add_on", "add_off", "pet"};
  if (rows.empty() || rows.front().fields != expected) {
    throw ParseError(source, rows.empty() ? 1 : rows.front().line,
                     "expected header metric,mis,inc,add_on,add_off,pet");
  }
  CorrelationTable table;
  std::set<std::string> seen;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (row.fields.size() != expected.size()) {
      throw ParseError(source, row.line, "expected " + std::to_string(expected.size()) + " fields");
    }
    CorrelationRow r;
    r.metric_id = row.fields[0];
    if (!seen.insert(r.metric_id).second) throw DuplicateError(source + ": metric " + r.metric_id + " repeated");
    for (std::size_t c = 0; c < 5; ++c) {
      r.r[c] = csv::parse_real(row.fields[c + 1], source, row.line, expected[c + 1]);
      if (r.r[c] < -1.0 || r.r[c] > 1.0) {
        throw ValidationError(source + ":" + std::to_string(row.line) + ": correlation outside [-1, 1]");
      }
    }
    table.rows.push_back(std::move(r));
  }
  return table;
}

CorrelationTable correlate(const ScoreMatrix& scores, std::span<const HumanAnnotation> annotations,
                           const std::vector<MetricDescriptor>& descriptors, const WarningSink& warnings) {
  if (scores.rows() < kMinCorrelationPairs) {
    throw ArgumentError("correlation needs at least " + std::to_string(kMinCorrelationPairs) +
                        " scored pairs, got " + std::to_string(scores.rows()));
  }
  std::map<std::string, const HumanAnnotation*> by_pair;
  for (const auto& a : annotations) by_pair[a.pair_id] = &a;

  std::array<std::vector<double>, 5> aspect_columns;
  std::set<std::string> scored;
  for (const std::string& pair_id : scores.pair_ids()) {
    const auto it = by_pair.find(pair_id);
    if (it == by_pair.end()) throw JoinError("no annotation for scored pair " + pair_id);
    scored.insert(pair_id);
    for (Aspect aspect : kAspects) aspect_columns[index_of(aspect)].push_back(aspect_value(*it->second, aspect));
  }
  for (const auto& [pair_id, annotation] : by_pair) {
    if (!scored.count(pair_id)) warn(warnings, "annotation for " + pair_id + " has no scores; ignored");
  }
  if (scores.rows() < 10) {
    warn(warnings, "correlations over " + std::to_string(scores.rows()) + " pairs are statistically fragile");
  }

  CorrelationTable table;
  for (const std::string& metric_id : scores.metric_ids()) {
    const MetricDescriptor& d = require_metric(metric_id, descriptors);
    const std::vector<double> column = scores.column(metric_id);
    CorrelationRow row;
    row.metric_id = metric_id;
    for (Aspect aspect : kAspects) {
      double r = 0.0;
      try {
        r = pearson(column, aspect_columns[index_of(aspect)]);
      } catch (const UndefinedError& e) {
        throw UndefinedError("metric " + metric_id + ", aspect " + std::string(aspect_key(aspect)) + ": " +
                             e.what());
      }
      row.r[index_of(aspect)] = d.orientation == Orientation::LowerBetter ? -r : r;
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

const CasRow& CasTable::row(std::string_view metric_id) const {
  for (const auto& r : rows) {
    if (r.metric_id == metric_id) return r;
  }
  throw LookupError("CAS table has no metric '" + std::string(metric_id) + "'");
}

CasTable compute_cas(const CorrelationTable& table, const CASConfig& config) {
  if (table.rows.size() < 2) throw ArgumentError("CAS normalization needs at least two metrics");
  const std::array<double, 4> weights = {config.weight_mis, config.weight_inc, config.weight_add_on,
                                         config.weight_add_off};
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw ArgumentError("CAS weights must be finite and non-negative");
  }
  const double denominator = config.denominator();
  if (!(denominator > 0.0)) throw ArgumentError("CAS weights must not all be zero");

  std::array<std::vector<double>, 4> normalized;
  for (std::size_t k = 0; k < kDefectAspects.size(); ++k) {
    std::vector<double> column;
    for (const auto& row : table.rows) column.push_back(row[kDefectAspects[k]]);
    try {
      normalized[k] = minmax_normalize(column);
    } catch (const UndefinedError&) {
      throw UndefinedError("aspect " + std::string(aspect_key(kDefectAspects[k])) +
                           ": every metric has the same correlation");
    }
  }

  CasTable out;
  for (std::size_t m = 0; m < table.rows.size(); ++m) {
    CasRow row;
    row.metric_id = table.rows[m].metric_id;
    double weighted = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
      row.normalized[k] = normalized[k][m];
      weighted += weights[k] * normalized[k][m];
    }
    row.cas = weighted / denominator;
    out.rows.push_back(std::move(row));
  }
  return out;
}

Ranking rank_metrics(const CasTable& cas, const CorrelationTable& correlations, std::size_t k) {
  std::vector<std::string> ids;
  std::vector<double> cas_keys;
  std::vector<double> pet_keys;
  for (const auto& row : cas.rows) {
    ids.push_back(row.metric_id);
    cas_keys.push_back(row.cas);
    pet_keys.push_back(correlations.row(row.metric_id)[Aspect::PostEditTime]);
  }
  if (correlations.rows.size() != cas.rows.size()) {
    throw ArgumentError("CAS and correlation tables cover different metrics");
  }

  Ranking out;
  out.k = std::min(k, ids.size());
  const auto cas_order = order_by(cas_keys, ids);
  const auto pet_order = order_by(pet_keys, ids);
  std::vector<std::size_t> cas_rank(ids.size());
  std::vector<std::size_t> pet_rank(ids.size());
  for (std::size_t pos = 0; pos < ids.size(); ++pos) {
    cas_rank[cas_order[pos]] = pos + 1;
    pet_rank[pet_order[pos]] = pos + 1;
  }
  note_boundary_ties("CAS", cas_keys, ids, cas_order, out.k, out.ties);
  note_boundary_ties("PET", pet_keys, ids, pet_order, out.k, out.ties);

  for (std::size_t idx : cas_order) {
    RankedMetric m{ids[idx], cas_rank[idx], pet_rank[idx]};
    if (m.cas_rank <= out.k && m.pet_rank <= out.k) out.preferred.push_back(m);
    out.all.push_back(std::move(m));
  }
  return out;
}

namespace {

std::string fmt(double v, int decimals) {
  return decimals < 0 ? csv::format_exact(v) : csv::format_fixed(v, decimals);
}

const RankedMetric& ranked(const Ranking& ranking, const std::string& id) {
  for (const auto& m : ranking.all) {
    if (m.metric_id == id) return m;
  }
  throw LookupError("ranking has no metric '" + id + "'");
}

}  // namespace

std::string evaluation_csv(const CorrelationTable& correlations, const CasTable& cas, const Ranking& ranking,
                           int decimals) {
  std::string out = "metric,mis,inc,add_on,add_off,cas,pet,cas_rank,pet_rank,preferred\n";
  for (const auto& row : correlations.rows) {
    const RankedMetric& m = ranked(ranking, row.metric_id);
    const bool preferred = m.cas_rank <= ranking.k && m.pet_rank <= ranking.k;
    out += csv::join({row.metric_id, fmt(row[Aspect::Missing], decimals), fmt(row[Aspect::Incorrect], decimals),
                      fmt(row[Aspect::AddedOnTopic], decimals), fmt(row[Aspect::AddedOffTopic], decimals),
                      fmt(cas.row(row.metric_id).cas, decimals), fmt(row[Aspect::PostEditTime], decimals),
                      std::to_string(m.cas_rank), std::to_string(m.pet_rank), preferred ? "yes" : "no"}) +
           "\n";
  }
  return out;
}

std::string cas_csv(const CasTable& cas, const Ranking& ranking, int decimals) {
  std::string out = "metric,mis_norm,inc_norm,add_on_norm,add_off_norm,cas,cas_rank\n";
  for (const auto& row : cas.rows) {
    std::vector<std::string> fields = {row.metric_id};
    for (double v : row.normalized) fields.push_back(fmt(v, decimals));
    fields.push_back(fmt(row.cas, decimals));
    fields.push_back(std::to_string(ranked(ranking, row.metric_id).cas_rank));
    out += csv::join(fields) + "\n";
  }
  return out;
}

std::string evaluation_json(const CorrelationTable& correlations, const CasTable& cas, const Ranking& ranking,
                            const CASConfig& config) {
  nlohmann::ordered_json doc;
  doc["cas_weights"] = {{"mis", config.weight_mis},
                        {"inc", config.weight_inc},
                        {"add_off", config.weight_add_off},
                        {"add_on", config.weight_add_on},
                        {"denominator", config.denominator()}};
  doc["metrics"] = nlohmann::ordered_json::array();
  for (const auto& row : correlations.rows) {
    const CasRow& c = cas.row(row.metric_id);
    const RankedMetric& m = ranked(ranking, row.metric_id);
    nlohmann::ordered_json entry;
    entry["metric"] = row.metric_id;
    for (Aspect a : kAspects) entry["correlation"][std::string(aspect_key(a))] = row[a];
    for (std::size_t k = 0; k < kDefectAspects.size(); ++k) {
      entry["normalized"][std::string(aspect_key(kDefectAspects[k]))] = c.normalized[k];
    }
    entry["cas"] = c.cas;
    entry["cas_rank"] = m.cas_rank;
    entry["pet_rank"] = m.pet_rank;
    doc["metrics"].push_back(std::move(entry));
  }
  doc["top_k"] = ranking.k;
  doc["preferred"] = nlohmann::ordered_json::array();
  for (const auto& m : ranking.preferred) doc["preferred"].push_back(m.metric_id);
  doc["ties"] = ranking.ties;
  return doc.dump(2) + "\n";
}

}  // namespace medrep
