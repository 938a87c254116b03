#include "medrep/corpus.hpp"

#include <algorithm>
#include <set>
#include <tuple>

#include "medrep/csv.hpp"
#include "medrep/error.hpp"
#include "medrep/tokenize.hpp"

namespace medrep {
namespace {

constexpr std::string_view kAnnotationHeader[] = {"pair_id",  "missing",   "incorrect",
                                                  "added_on", "added_off", "post_edit_seconds"};

std::string_view rstrip(std::string_view s) {
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::string_view lstrip(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  return s;
}

bool is_ascii_upper(char c) { return c >= 'A' && c <= 'Z'; }

// Removes leading and trailing blank lines of a section body.
std::string finish_body(std::vector<std::string_view>& lines) {
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  std::size_t first = 0;
  while (first < lines.size() && lines[first].empty()) ++first;
  std::string body;
  for (std::size_t i = first; i < lines.size(); ++i) {
    if (i > first) body.push_back('\n');
    body.append(lines[i]);
  }
  return body;
}

bool any_nonempty(const Report& report) {
  return std::any_of(report.sections.begin(), report.sections.end(),
                     [](const auto& s) { return !s.second.empty(); });
}

int kind_rank(ReportKind kind) { return kind == ReportKind::Candidate ? 0 : 1; }

}  // namespace

char section_letter(SectionTag tag) {
  switch (tag) {
    case SectionTag::S: return 'S';
    case SectionTag::O: return 'O';
    case SectionTag::E: return 'E';
    case SectionTag::P: return 'P';
  }
  return '?';
}

std::optional<SectionTag> section_from_letter(char letter) {
  switch (letter) {
    case 'S': return SectionTag::S;
    case 'O': return SectionTag::O;
    case 'E': return SectionTag::E;
    case 'P': return SectionTag::P;
    default: return std::nullopt;
  }
}

std::string_view kind_suffix(ReportKind kind) {
  return kind == ReportKind::Candidate ? "ai" : "gp";
}

Report parse_report(std::string_view content, std::string id, ReportKind kind,
                    const std::string& source) {
  if (id.empty()) throw ValidationError(source + ": report id is empty");
  if (content.size() >= 3 && content.substr(0, 3) == "\xEF\xBB\xBF") content.remove_prefix(3);

  Report report;
  report.id = std::move(id);
  report.kind = kind;

  std::optional<SectionTag> current;
  std::vector<std::string_view> body;
  auto flush = [&] {
    if (current) report.sections[*current] = finish_body(body);
    body.clear();
  };

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= content.size()) {
    const std::size_t nl = content.find('\n', pos);
    const std::size_t end = nl == std::string_view::npos ? content.size() : nl;
    const std::string_view line = rstrip(content.substr(pos, end - pos));
    ++line_no;
    pos = end + 1;

    if (line.size() >= 2 && is_ascii_upper(line[0]) && line[1] == ':') {
      const auto tag = section_from_letter(line[0]);
      if (!tag) {
        throw ParseError(source, line_no, std::string("unknown section tag '") + line[0] + "'");
      }
      if (report.sections.count(*tag) || current == tag) {
        throw ParseError(source, line_no, std::string("section '") + line[0] + "' repeated");
      }
      flush();
      current = tag;
      body.push_back(lstrip(line.substr(2)));
    } else if (current) {
      body.push_back(line);
    } else if (!line.empty()) {
      if (line.front() != '#') {
        throw ParseError(source, line_no, "text before the first section marker");
      }
      constexpr std::string_view kLang = "language:";
      const std::string_view meta = lstrip(line.substr(1));
      if (meta.substr(0, kLang.size()) == kLang) {
        report.language_tag = std::string(lstrip(meta.substr(kLang.size())));
      }
    }
    if (nl == std::string_view::npos) break;
  }
  flush();

  if (!any_nonempty(report)) throw ParseError(source, line_no, "report has no non-empty section");
  return report;
}

std::string serialize_report(const Report& report) {
  std::string out = "# language: " + report.language_tag + "\n";
  for (const auto& [tag, text] : report.sections) {
    out.push_back(section_letter(tag));
    out.push_back(':');
    if (!text.empty()) {
      out.push_back(' ');
      out += text;
    }
    out.push_back('\n');
  }
  return out;
}

std::vector<Report> load_reports(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw Error("reports directory '" + dir.string() + "' does not exist");

  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".txt" &&
        entry.path().filename().string().front() != '.') {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());

  std::vector<Report> reports;
  std::set<std::pair<std::string, int>> seen;
  for (const auto& file : files) {
    const std::string stem = file.stem().string();  // "<id>.<kind>"
    const std::size_t dot = stem.rfind('.');
    const std::string kind_text = dot == std::string::npos ? "" : stem.substr(dot + 1);
    if (dot == std::string::npos || dot == 0 || (kind_text != "ai" && kind_text != "gp")) {
      throw ParseError(file.string(), 0, "filename must be <id>.ai.txt or <id>.gp.txt");
    }
    const ReportKind kind = kind_text == "ai" ? ReportKind::Candidate : ReportKind::Reference;
    Report report = parse_report(csv::read_file(file), stem.substr(0, dot), kind, file.string());
    if (!seen.emplace(report.id, kind_rank(kind)).second) {
      throw DuplicateError("duplicate report " + report.id + "." + kind_text);
    }
    reports.push_back(std::move(report));
  }
  std::sort(reports.begin(), reports.end(), [](const Report& a, const Report& b) {
    return std::forward_as_tuple(a.id, kind_rank(a.kind)) <
           std::forward_as_tuple(b.id, kind_rank(b.kind));
  });
  return reports;
}

PairingResult pair_reports(const std::vector<Report>& reports) {
  std::map<std::string, std::pair<const Report*, const Report*>> by_id;
  for (const Report& report : reports) {
    auto& slot = by_id[report.id];
    const Report*& target = report.kind == ReportKind::Candidate ? slot.first : slot.second;
    if (target != nullptr) {
      throw DuplicateError("report id '" + report.id + "' has two " +
                           (report.kind == ReportKind::Candidate ? "candidates" : "references"));
    }
    target = &report;
  }

  PairingResult result;
  for (const auto& [id, slot] : by_id) {
    if (slot.first && slot.second) {
      result.pairs.push_back(ReportPair{id, *slot.first, *slot.second});
    } else {
      result.unmatched.push_back(slot.first ? *slot.first : *slot.second);
    }
  }
  return result;
}

std::vector<HumanAnnotation> parse_annotations(std::string_view text, const std::string& source) {
  const std::vector<csv::Row> rows = csv::parse(text, source);
  if (rows.empty()) throw ParseError(source, 1, "missing header");

  const auto& header = rows.front().fields;
  const bool header_ok =
      header.size() == std::size(kAnnotationHeader) &&
      std::equal(header.begin(), header.end(), std::begin(kAnnotationHeader));
  if (!header_ok) {
    throw ParseError(source, rows.front().line,
                     "expected header pair_id,missing,incorrect,added_on,added_off,post_edit_seconds");
  }

  std::vector<HumanAnnotation> out;
  std::set<std::string> seen;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const csv::Row& row = rows[r];
    if (row.fields.size() != header.size()) {
      throw ParseError(source, row.line,
                       "expected " + std::to_string(header.size()) + " fields, got " +
                           std::to_string(row.fields.size()));
    }
    HumanAnnotation a;
    a.pair_id = row.fields[0];
    if (a.pair_id.empty()) throw ParseError(source, row.line, "empty pair_id");
    long* counts[] = {&a.missing, &a.incorrect, &a.added_on_topic, &a.added_off_topic};
    for (std::size_t c = 0; c < 4; ++c) {
      const std::string column(kAnnotationHeader[c + 1]);
      *counts[c] = csv::parse_integer(row.fields[c + 1], source, row.line, column);
      if (*counts[c] < 0) {
        throw ValidationError(source + ":" + std::to_string(row.line) + ": " + column +
                              " must be non-negative for pair " + a.pair_id);
      }
    }
    a.post_edit_seconds = csv::parse_real(row.fields[5], source, row.line, "post_edit_seconds");
    if (a.post_edit_seconds < 0) {
      throw ValidationError(source + ":" + std::to_string(row.line) +
                            ": post_edit_seconds must be non-negative for pair " + a.pair_id);
    }
    if (!seen.insert(a.pair_id).second) {
      throw DuplicateError(source + ":" + std::to_string(row.line) + ": duplicate annotation for " +
                           a.pair_id);
    }
    out.push_back(std::move(a));
  }
  return out;
}

std::vector<HumanAnnotation> load_annotations(const std::filesystem::path& path) {
  return parse_annotations(csv::read_file(path), path.string());
}

std::string serialize_annotations(const std::vector<HumanAnnotation>& annotations) {
  std::string out = "pair_id,missing,incorrect,added_on,added_off,post_edit_seconds\n";
  for (const auto& a : annotations) {
    out += csv::join({a.pair_id, std::to_string(a.missing), std::to_string(a.incorrect),
                      std::to_string(a.added_on_topic), std::to_string(a.added_off_topic),
                      csv::format_exact(a.post_edit_seconds)});
    out.push_back('\n');
  }
  return out;
}

std::string report_text(const Report& report, TextMode mode) {
  if (mode.only) {
    const auto it = report.sections.find(*mode.only);
    if (it == report.sections.end()) {
      throw LookupError(std::string("report ") + report.id + " has no section " +
                        section_letter(*mode.only));
    }
    return it->second;
  }
  std::string out;
  for (const auto& [tag, text] : report.sections) {
    if (text.empty()) continue;
    if (!out.empty()) out.push_back('\n');
    out += text;
  }
  return out;
}

LengthStats length_stats(const Report& report) {
  LengthStats stats;
  stats.report_id = report.id;
  std::size_t word_chars = 0;
  for (const auto& [tag, text] : report.sections) {
    stats.num_characters += grapheme_count(text);
    for (const std::string& word : whitespace_words(text)) {
      ++stats.num_words;
      word_chars += grapheme_count(word);
    }
  }
  if (stats.num_words > 0) {
    stats.avg_word_length = static_cast<double>(word_chars) / static_cast<double>(stats.num_words);
  }
  return stats;
}

}  // namespace medrep
