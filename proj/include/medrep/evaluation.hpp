#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "medrep/corpus.hpp"
#include "medrep/error.hpp"
#include "medrep/metric.hpp"

namespace medrep {

// Human evaluation aspects, in display order.
enum class Aspect { Missing, Incorrect, AddedOnTopic, AddedOffTopic, PostEditTime };

inline constexpr std::array<Aspect, 5> kAspects = {Aspect::Missing, Aspect::Incorrect,
                                                   Aspect::AddedOnTopic, Aspect::AddedOffTopic,
                                                   Aspect::PostEditTime};

// The four defect aspects that enter the composite score.
inline constexpr std::array<Aspect, 4> kDefectAspects = {Aspect::Missing, Aspect::Incorrect,
                                                         Aspect::AddedOnTopic, Aspect::AddedOffTopic};

// "mis", "inc", "add_on", "add_off", "pet".
std::string_view aspect_key(Aspect aspect);

double aspect_value(const HumanAnnotation& annotation, Aspect aspect);

long round_half_up(double value);

struct AspectAverages {
  std::size_t n = 0;
  std::array<double, 5> mean{};  // indexed like kAspects

  double operator[](Aspect a) const { return mean[static_cast<std::size_t>(a)]; }
  std::array<long, 5> rounded() const;
};

// Throws ArgumentError for an empty input.
AspectAverages aggregate_annotations(std::span<const HumanAnnotation> annotations);

struct CorrelationRow {
  std::string metric_id;
  std::array<double, 5> r{};  // oriented: higher metric score means better accuracy

  double operator[](Aspect a) const { return r[static_cast<std::size_t>(a)]; }
  friend bool operator==(const CorrelationRow&, const CorrelationRow&) = default;
};

struct CorrelationTable {
  std::vector<CorrelationRow> rows;

  const CorrelationRow& row(std::string_view metric_id) const;
  friend bool operator==(const CorrelationTable&, const CorrelationTable&) = default;

  // Header `metric,mis,inc,add_on,add_off,pet`.
  std::string to_csv(int decimals = 3) const;
  static CorrelationTable from_csv(std::string_view text, const std::string& source = "<memory>");
};

inline constexpr std::size_t kMinCorrelationPairs = 3;

// Pearson r between each metric column and each aspect over the pairs of
// `scores`. Rows of LowerBetter metrics are multiplied by −1. Throws JoinError
// when a scored pair has no annotation; annotations without scores are
// reported through `warnings`.
CorrelationTable correlate(const ScoreMatrix& scores, std::span<const HumanAnnotation> annotations,
                           const std::vector<MetricDescriptor>& descriptors = registry(),
                           const WarningSink& warnings = {});

struct CASConfig {
  double weight_mis = 1.0;
  double weight_inc = 1.0;
  double weight_add_off = 1.0;
  double weight_add_on = 0.5;

  double denominator() const { return weight_mis + weight_inc + weight_add_off + weight_add_on; }
};

struct CasRow {
  std::string metric_id;
  std::array<double, 4> normalized{};  // indexed like kDefectAspects
  double cas = 0.0;

  friend bool operator==(const CasRow&, const CasRow&) = default;
};

struct CasTable {
  std::vector<CasRow> rows;

  const CasRow& row(std::string_view metric_id) const;
  friend bool operator==(const CasTable&, const CasTable&) = default;
};

// Min-max normalizes each defect-aspect column across metrics, then takes the
// weighted mean. Throws ArgumentError for fewer than two metrics or invalid
// weights, and UndefinedError naming the aspect of a constant column.
CasTable compute_cas(const CorrelationTable& table, const CASConfig& config = {});

struct RankedMetric {
  std::string metric_id;
  std::size_t cas_rank = 0;  // 1 = lowest CAS
  std::size_t pet_rank = 0;  // 1 = most negative PET correlation
};

struct Ranking {
  std::size_t k = 3;
  std::vector<RankedMetric> all;        // every metric, in CAS-rank order
  std::vector<RankedMetric> preferred;  // top k on both lists, in CAS-rank order
  std::vector<std::string> ties;        // ties resolved by metric id
};

Ranking rank_metrics(const CasTable& cas, const CorrelationTable& correlations, std::size_t k = 3);

// Correlations, CAS, and ranks in one table:
// metric,mis,inc,add_on,add_off,cas,pet,cas_rank,pet_rank,preferred
std::string evaluation_csv(const CorrelationTable& correlations, const CasTable& cas,
                           const Ranking& ranking, int decimals = 3);
// metric,mis_norm,inc_norm,add_on_norm,add_off_norm,cas,cas_rank
std::string cas_csv(const CasTable& cas, const Ranking& ranking, int decimals = 3);
std::string evaluation_json(const CorrelationTable& correlations, const CasTable& cas,
                            const Ranking& ranking, const CASConfig& config);

}  // namespace medrep
