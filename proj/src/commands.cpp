#include "medrep/commands.hpp"

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "medrep/csv.hpp"
#include "medrep/error.hpp"
#include "medrep/metric.hpp"
#include "medrep/statistics.hpp"

namespace medrep::cli {
namespace {

void require_file(const std::filesystem::path& path, const std::string& what) {
  if (!std::filesystem::is_regular_file(path)) {
    throw Error(what + " '" + path.string() + "' does not exist or is not a file");
  }
}

void require_dir(const std::filesystem::path& path, const std::string& what) {
  if (!std::filesystem::is_directory(path)) {
    throw Error(what + " '" + path.string() + "' does not exist or is not a directory");
  }
}

void emit(const std::string& content, const std::optional<std::filesystem::path>& path, std::ostream& out) {
  if (!path) {
    out << content;
    return;
  }
  std::ofstream file(*path, std::ios::binary);
  if (!file) throw Error("cannot write '" + path->string() + "'");
  file << content;
  if (!file) throw Error("failed writing '" + path->string() + "'");
}

WarningSink to_stream(std::ostream& err) {
  return [&err](const std::string& message) { err << "warning: " << message << "\n"; };
}

std::string percent(std::size_t part, std::size_t whole) {
  return csv::format_fixed(whole == 0 ? 0.0 : 100.0 * static_cast<double>(part) / static_cast<double>(whole), 1) +
         "%";
}

}  // namespace

void run_score(const ScoreOptions& options, std::ostream& out, std::ostream& err) {
  require_dir(options.reports, "reports directory");
  if (options.embeddings) require_file(*options.embeddings, "embeddings file");
  if (options.contextual) require_file(*options.contextual, "contextual embeddings file");
  if (options.synonyms) require_file(*options.synonyms, "synonym dictionary");
  for (const std::string& id : options.metrics) require_metric(id);

  ScoringContext context;
  context.tokenizer = options.tokenizer;
  if (options.section) context.text_mode = TextMode::section(*options.section);
  const WarningSink warnings = to_stream(err);
  if (options.embeddings) {
    context.embeddings = std::make_shared<const EmbeddingStore>(
        EmbeddingStore::load(*options.embeddings, options.oov, warnings));
  }
  if (options.contextual) {
    context.contextual = std::make_shared<const ContextualEmbeddings>(ContextualEmbeddings::load(*options.contextual));
  }
  if (options.synonyms) {
    context.synonyms = std::make_shared<const SynonymDictionary>(
        SynonymDictionary::load(*options.synonyms, options.tokenizer));
  }

  std::vector<std::string> metrics = options.metrics;
  if (metrics.empty()) {
    for (const auto& d : registry()) {
      if (d.id == "wmd" && !context.embeddings) continue;
      if (d.id == "bertscore" && !context.embeddings && !context.contextual) continue;
      metrics.push_back(d.id);
    }
    if (!context.embeddings) warn(warnings, "no --embeddings given; embedding metrics skipped");
  }

  const PairingResult paired = pair_reports(load_reports(options.reports));
  for (const Report& r : paired.unmatched) {
    warn(warnings, "report " + r.id + "." + std::string(kind_suffix(r.kind)) + " has no counterpart; skipped");
  }
  if (options.idf) context.idf = std::make_shared<const IdfWeights>(reference_idf(paired.pairs, context));

  ScoringDiagnostics diagnostics;
  const ScoreMatrix matrix = score_corpus(paired.pairs, metrics, context, options.jobs, &diagnostics);
  for (const std::string& w : diagnostics.warnings) warn(warnings, w);
  for (const auto& [metric, tally] : diagnostics.oov) {
    err << "oov: " << metric << " dropped " << tally.oov_tokens << " of " << tally.total_tokens << " tokens ("
        << percent(tally.oov_tokens, tally.total_tokens) << ")\n";
  }

  emit(options.format == OutputFormat::Json ? matrix.to_json() : matrix.to_csv(options.precision),
       options.output, out);
}

void run_evaluate(const EvaluateOptions& options, std::ostream& out, std::ostream& err) {
  CorrelationTable correlations;
  if (options.from_correlations) {
    require_file(*options.from_correlations, "correlation table");
    correlations = CorrelationTable::from_csv(csv::read_file(*options.from_correlations),
                                              options.from_correlations->string());
  } else {
    if (!options.scores || !options.annotations) {
      throw ConfigurationError("evaluate needs --scores and --annotations, or --from-correlations");
    }
    require_file(*options.scores, "score matrix");
    require_file(*options.annotations, "annotation file");
    const ScoreMatrix scores = ScoreMatrix::from_csv(csv::read_file(*options.scores), options.scores->string());
    const auto annotations = load_annotations(*options.annotations);
    correlations = correlate(scores, annotations, registry(), to_stream(err));
  }

  const CasTable cas = compute_cas(correlations, options.weights);
  const Ranking ranking = rank_metrics(cas, correlations, options.top_k);
  for (const std::string& tie : ranking.ties) err << "note: " << tie << "\n";

  if (options.correlations_out) emit(correlations.to_csv(options.precision), options.correlations_out, out);
  if (options.cas_out) emit(cas_csv(cas, ranking, options.precision), options.cas_out, out);
  emit(options.format == OutputFormat::Json ? evaluation_json(correlations, cas, ranking, options.weights)
                                            : evaluation_csv(correlations, cas, ranking, options.precision),
       options.output, out);
}

void run_stats(const StatsOptions& options, std::ostream& out, std::ostream&) {
  require_dir(options.reports, "reports directory");
  const std::vector<Report> reports = load_reports(options.reports);

  std::map<ReportKind, std::vector<double>> chars;
  std::map<ReportKind, std::vector<double>> word_length;
  std::vector<std::pair<const Report*, LengthStats>> per_report;
  for (const Report& r : reports) {
    LengthStats s = length_stats(r);
    chars[r.kind].push_back(static_cast<double>(s.num_characters));
    word_length[r.kind].push_back(s.avg_word_length);
    per_report.emplace_back(&r, std::move(s));
  }
  for (ReportKind kind : {ReportKind::Reference, ReportKind::Candidate}) {
    if (chars[kind].size() < 2) {
      throw ArgumentError("stats needs at least two " + std::string(kind_suffix(kind)) + " reports, found " +
                          std::to_string(chars[kind].size()));
    }
  }

  struct Measure {
    std::string name;
    SampleSummary gp;
    SampleSummary ai;
    TTestResult test;
  };
  std::vector<Measure> measures;
  for (auto* source : {&chars, &word_length}) {
    Measure m;
    m.name = source == &chars ? "characters" : "word_length";
    m.gp = summarize((*source)[ReportKind::Reference]);
    m.ai = summarize((*source)[ReportKind::Candidate]);
    m.test = pooled_ttest(m.gp, m.ai);
    measures.push_back(std::move(m));
  }

  const int p = options.precision;
  std::string content;
  if (options.format == OutputFormat::Json) {
    nlohmann::ordered_json doc;
    doc["reports"] = nlohmann::ordered_json::array();
    for (const auto& [report, s] : per_report) {
      doc["reports"].push_back({{"id", report->id},
                                {"kind", kind_suffix(report->kind)},
                                {"characters", s.num_characters},
                                {"words", s.num_words},
                                {"avg_word_length", s.avg_word_length}});
    }
    for (const Measure& m : measures) {
      auto summary = [](const SampleSummary& s) {
        return nlohmann::ordered_json{{"n", s.n}, {"mean", s.mean}, {"sd", s.sd}};
      };
      doc["tests"][m.name] = {{"gp", summary(m.gp)},
                              {"ai", summary(m.ai)},
                              {"t", m.test.t},
                              {"df", m.test.df},
                              {"significant_at_0.05", m.test.significant_at_05},
                              {"significant_at_0.01", m.test.significant_at_01},
                              {"significant_at_0.001", m.test.significant_at_001}};
    }
    content = doc.dump(2) + "\n";
  } else {
    content = "report,kind,characters,words,avg_word_length\n";
    for (const auto& [report, s] : per_report) {
      content += csv::join({report->id, std::string(kind_suffix(report->kind)), std::to_string(s.num_characters),
                            std::to_string(s.num_words), csv::format_fixed(s.avg_word_length, p)}) +
                 "\n";
    }
    content += "\nmeasure,gp_n,gp_mean,gp_sd,ai_n,ai_mean,ai_sd,t,df,p_lt_0.05,p_lt_0.01,p_lt_0.001\n";
    for (const Measure& m : measures) {
      auto yn = [](bool b) { return std::string(b ? "yes" : "no"); };
      content += csv::join({m.name, std::to_string(m.gp.n), csv::format_fixed(m.gp.mean, p),
                            csv::format_fixed(m.gp.sd, p), std::to_string(m.ai.n), csv::format_fixed(m.ai.mean, p),
                            csv::format_fixed(m.ai.sd, p), csv::format_fixed(m.test.t, p),
                            std::to_string(m.test.df), yn(m.test.significant_at_05),
                            yn(m.test.significant_at_01), yn(m.test.significant_at_001)}) +
                 "\n";
    }
  }
  emit(content, options.output, out);
}

void run_metrics_list(OutputFormat format, std::ostream& out) {
  if (format == OutputFormat::Json) {
    nlohmann::ordered_json doc = nlohmann::ordered_json::array();
    for (const auto& d : registry()) {
      doc.push_back({{"id", d.id},
                     {"name", d.display_name},
                     {"category", category_name(d.category)},
                     {"orientation", orientation_name(d.orientation)},
                     {"needs_embeddings", d.needs_embeddings},
                     {"core", d.core}});
    }
    out << doc.dump(2) << "\n";
    return;
  }
  out << "id,name,category,orientation,range,needs_embeddings,core\n";
  for (const auto& d : registry()) {
    const std::string hi = std::isinf(d.range.hi) ? "inf" : csv::format_exact(d.range.hi);
    out << csv::join({d.id, d.display_name, std::string(category_name(d.category)),
                      std::string(orientation_name(d.orientation)),
                      "[" + csv::format_exact(d.range.lo) + ";" + hi + "]", d.needs_embeddings ? "yes" : "no",
                      d.core ? "yes" : "no"})
        << "\n";
  }
}

CASConfig parse_cas_weights(const std::string& text) {
  std::vector<double> values;
  std::stringstream in(text);
  std::string field;
  while (std::getline(in, field, ',')) values.push_back(csv::parse_real(field, "--cas-weights", 1, "weight"));
  if (values.size() != 4) throw ArgumentError("--cas-weights expects four values: mis,inc,add_off,add_on");
  CASConfig config;
  config.weight_mis = values[0];
  config.weight_inc = values[1];
  config.weight_add_off = values[2];
  config.weight_add_on = values[3];
  return config;
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Score generated medical reports against references and meta-evaluate the metrics"};
  app.require_subcommand(1);

  const std::map<std::string, OutputFormat> formats = {{"csv", OutputFormat::Csv}, {"json", OutputFormat::Json}};
  ScoreOptions score;
  std::string punctuation = "strip";
  std::string section;
  std::string oov = "skip";
  bool unicode_normalize = true;
  auto* score_cmd = app.add_subcommand("score", "Score every report pair with the selected metrics");
  score_cmd->add_option("--reports", score.reports, "Directory of <id>.ai.txt / <id>.gp.txt files")->required();
  score_cmd->add_option("--metrics,--metric", score.metrics, "Comma-separated metric ids")->delimiter(',');
  score_cmd->add_option("--embeddings", score.embeddings, "Word-vector text file")->envname("MEDREP_EMBEDDINGS");
  score_cmd->add_option("--contextual", score.contextual, "Per-token contextual vectors for bertscore");
  score_cmd->add_option("--synonyms", score.synonyms, "METEOR synonym dictionary");
  score_cmd->add_flag("--case-fold,!--no-case-fold", score.tokenizer.case_fold, "Case-fold before tokenizing");
  score_cmd->add_flag("--unicode-normalize,!--no-unicode-normalize", unicode_normalize, "Apply NFC");
  score_cmd->add_option("--punctuation", punctuation, "strip | keep")->check(CLI::IsMember({"strip", "keep"}));
  score_cmd->add_option("--section", section, "Score one SOEP section only")->check(CLI::IsMember({"S", "O", "E", "P"}));
  score_cmd->add_option("--oov", oov, "Out-of-vocabulary policy: skip | error")->check(CLI::IsMember({"skip", "error"}));
  score_cmd->add_flag("--idf", score.idf, "IDF-weight bertscore over the reference corpus");
  score_cmd->add_option("--jobs,-j", score.jobs, "Worker threads")->check(CLI::PositiveNumber);
  score_cmd->add_option("--format", score.format, "csv | json")->transform(CLI::CheckedTransformer(formats));
  score_cmd->add_option("--precision", score.precision, "CSV decimals (-1: shortest exact)");
  score_cmd->add_option("--output,-o", score.output, "Write to a file instead of stdout");

  EvaluateOptions evaluate;
  std::string weights;
  auto* eval_cmd = app.add_subcommand("evaluate", "Correlate scores with annotations and compute CAS");
  eval_cmd->add_option("--scores", evaluate.scores, "Score matrix CSV from `score`");
  eval_cmd->add_option("--annotations", evaluate.annotations, "Annotation CSV");
  eval_cmd->add_option("--from-correlations", evaluate.from_correlations, "Pre-oriented correlation table CSV");
  eval_cmd->add_option("--cas-weights", weights, "mis,inc,add_off,add_on (default 1,1,1,0.5)");
  eval_cmd->add_option("--top-k", evaluate.top_k, "Size of the preferred-metric lists");
  eval_cmd->add_option("--format", evaluate.format, "csv | json")->transform(CLI::CheckedTransformer(formats));
  eval_cmd->add_option("--precision", evaluate.precision, "CSV decimals (-1: shortest exact)");
  eval_cmd->add_option("--output,-o", evaluate.output, "Write to a file instead of stdout");
  eval_cmd->add_option("--correlations-out", evaluate.correlations_out, "Also write the correlation table");
  eval_cmd->add_option("--cas-out", evaluate.cas_out, "Also write the CAS table");

  StatsOptions stats;
  auto* stats_cmd = app.add_subcommand("stats", "Report length statistics and t-tests");
  stats_cmd->add_option("--reports", stats.reports, "Directory of report files")->required();
  stats_cmd->add_option("--format", stats.format, "csv | json")->transform(CLI::CheckedTransformer(formats));
  stats_cmd->add_option("--precision", stats.precision, "CSV decimals");
  stats_cmd->add_option("--output,-o", stats.output, "Write to a file instead of stdout");

  OutputFormat list_format = OutputFormat::Csv;
  auto* metrics_cmd = app.add_subcommand("metrics", "Metric registry");
  metrics_cmd->require_subcommand(1);
  auto* list_cmd = metrics_cmd->add_subcommand("list", "List the registered metrics");
  list_cmd->add_option("--format", list_format, "csv | json")->transform(CLI::CheckedTransformer(formats));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (score_cmd->parsed()) {
      score.tokenizer.unicode_normalize = unicode_normalize;
      score.tokenizer.punctuation = punctuation == "keep" ? Punctuation::KeepAsTokens : Punctuation::Strip;
      if (!section.empty()) score.section = section_from_letter(section.front());
      score.oov = oov == "error" ? OovPolicy::Error : OovPolicy::Skip;
      run_score(score, out, err);
    } else if (eval_cmd->parsed()) {
      if (!weights.empty()) evaluate.weights = parse_cas_weights(weights);
      run_evaluate(evaluate, out, err);
    } else if (stats_cmd->parsed()) {
      run_stats(stats, out, err);
    } else if (list_cmd->parsed()) {
      run_metrics_list(list_format, out);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace medrep::cli
