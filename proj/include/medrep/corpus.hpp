#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace medrep {

// SOEP sections in canonical order.
enum class SectionTag { S, O, E, P };

inline constexpr std::array<SectionTag, 4> kSectionOrder = {SectionTag::S, SectionTag::O,
                                                            SectionTag::E, SectionTag::P};

char section_letter(SectionTag tag);
std::optional<SectionTag> section_from_letter(char letter);

enum class ReportKind { Candidate, Reference };

// "ai" / "gp" as used in report filenames.
std::string_view kind_suffix(ReportKind kind);

struct Report {
  std::string id;
  ReportKind kind = ReportKind::Candidate;
  std::map<SectionTag, std::string> sections;  // std::map keeps S, O, E, P order
  std::string language_tag = "nl";

  friend bool operator==(const Report&, const Report&) = default;
};

struct ReportPair {
  std::string pair_id;
  Report candidate;
  Report reference;
};

struct PairingResult {
  std::vector<ReportPair> pairs;
  std::vector<Report> unmatched;
};

struct HumanAnnotation {
  std::string pair_id;
  long missing = 0;          // MIS
  long incorrect = 0;        // INC
  long added_on_topic = 0;   // ADD_ON
  long added_off_topic = 0;  // ADD_OFF
  double post_edit_seconds = 0.0;  // PET

  friend bool operator==(const HumanAnnotation&, const HumanAnnotation&) = default;
};

struct LengthStats {
  std::string report_id;
  std::size_t num_characters = 0;  // NRC, grapheme clusters
  std::size_t num_words = 0;
  double avg_word_length = 0.0;    // WLE
};

// Report file body. `source` names the file in error messages. Throws
// ParseError on unknown markers, text before the first marker, repeated
// sections, or a report whose sections are all empty.
Report parse_report(std::string_view content, std::string id, ReportKind kind,
                    const std::string& source = "<memory>");

// Canonical text form; parse_report(serialize_report(r)) == r.
std::string serialize_report(const Report& report);

// Reads every `<id>.<ai|gp>.txt` file in `dir`, sorted by id then kind
// (candidate first). Other files are ignored.
std::vector<Report> load_reports(const std::filesystem::path& dir);

// Throws DuplicateError when an id has two candidates or two references.
PairingResult pair_reports(const std::vector<Report>& reports);

std::vector<HumanAnnotation> parse_annotations(std::string_view csv,
                                               const std::string& source = "<memory>");
std::vector<HumanAnnotation> load_annotations(const std::filesystem::path& path);
std::string serialize_annotations(const std::vector<HumanAnnotation>& annotations);

struct TextMode {
  static TextMode full() { return {}; }
  static TextMode section(SectionTag tag) { return TextMode{tag}; }

  std::optional<SectionTag> only;  // nullopt: full concatenated report
};

// Full mode joins the non-empty sections in S, O, E, P order with '\n'.
std::string report_text(const Report& report, TextMode mode = TextMode::full());

LengthStats length_stats(const Report& report);

}  // namespace medrep
