#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "medrep/corpus.hpp"
#include "medrep/error.hpp"

using namespace medrep;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("medrep-corpus-" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  void write(const std::string& name, const std::string& content) const {
    std::ofstream(path / name, std::ios::binary) << content;
  }
};

Report sections(std::map<SectionTag, std::string> s) {
  Report r;
  r.id = "R1";
  r.sections = std::move(s);
  return r;
}

}  // namespace

TEST_CASE("parse_report reads SOEP markers") {
  const Report r = parse_report("# language: nl\nS: hoofdpijn\nsinds gisteren  \nO: koorts\n\nP: rust\n", "R1",
                                ReportKind::Reference);
  CHECK(r.id == "R1");
  CHECK(r.kind == ReportKind::Reference);
  CHECK(r.language_tag == "nl");
  CHECK(r.sections.at(SectionTag::S) == "hoofdpijn\nsinds gisteren");
  CHECK(r.sections.at(SectionTag::O) == "koorts");
  CHECK(r.sections.count(SectionTag::E) == 0);
  CHECK(r.sections.at(SectionTag::P) == "rust");
}

TEST_CASE("parse_report rejects malformed bodies") {
  CHECK_THROWS_AS(parse_report("X: onbekend\n", "R1", ReportKind::Candidate), ParseError);
  CHECK_THROWS_AS(parse_report("vrije tekst\nS: a\n", "R1", ReportKind::Candidate), ParseError);
  CHECK_THROWS_AS(parse_report("S: a\nS: b\n", "R1", ReportKind::Candidate), ParseError);
  CHECK_THROWS_AS(parse_report("S:\nO:   \n", "R1", ReportKind::Candidate), ParseError);
  CHECK_THROWS_AS(parse_report("", "R1", ReportKind::Candidate), ParseError);
}

TEST_CASE("parse errors carry the source line") {
  try {
    parse_report("S: a\nO: b\nX: c\n", "R1", ReportKind::Candidate, "R1.ai.txt");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("R1.ai.txt:3") != std::string::npos);
  }
}

TEST_CASE("serialize_report round-trips") {
  Report r = sections({{SectionTag::S, "pijn\nlinks"}, {SectionTag::E, "otitis"}});
  r.kind = ReportKind::Candidate;
  r.language_tag = "nl";
  CHECK(parse_report(serialize_report(r), r.id, r.kind) == r);
}

TEST_CASE("load_reports and pair_reports") {
  TempDir dir;
  SUBCASE("empty directory") { CHECK(load_reports(dir.path).empty()); }
  SUBCASE("seven pairs") {
    for (int i = 1; i <= 7; ++i) {
      const std::string id = "R" + std::to_string(i);
      dir.write(id + ".ai.txt", "S: kandidaat " + id + "\n");
      dir.write(id + ".gp.txt", "S: referentie " + id + "\n");
    }
    dir.write("notes.md", "genegeerd");
    const auto reports = load_reports(dir.path);
    REQUIRE(reports.size() == 14);
    CHECK(reports[0].id == "R1");
    CHECK(reports[0].kind == ReportKind::Candidate);
    CHECK(reports[1].kind == ReportKind::Reference);
    const auto paired = pair_reports(reports);
    CHECK(paired.pairs.size() == 7);
    CHECK(paired.unmatched.empty());
    CHECK(paired.pairs[0].pair_id == "R1");
    CHECK(paired.pairs[0].candidate.sections.at(SectionTag::S) == "kandidaat R1");
  }
  SUBCASE("unknown section tag") {
    dir.write("R1.ai.txt", "X: iets\n");
    CHECK_THROWS_AS(load_reports(dir.path), ParseError);
  }
  SUBCASE("badly named text file") {
    dir.write("R1.txt", "S: iets\n");
    CHECK_THROWS_AS(load_reports(dir.path), ParseError);
  }
}

TEST_CASE("pair_reports reports unmatched and duplicates") {
  Report cand = sections({{SectionTag::S, "a"}});
  Report ref = cand;
  ref.kind = ReportKind::Reference;
  CHECK(pair_reports({cand, ref}).pairs.size() == 1);

  const auto lonely = pair_reports({cand});
  CHECK(lonely.pairs.empty());
  CHECK(lonely.unmatched.size() == 1);

  CHECK_THROWS_AS(pair_reports({cand, cand, ref}), DuplicateError);
}

TEST_CASE("parse_annotations") {
  const std::string header = "pair_id,missing,incorrect,added_on,added_off,post_edit_seconds\n";
  const auto rows = parse_annotations(header + "R1,12,2,6,5,378\nR3,8,1,5,0,170\n");
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == HumanAnnotation{"R1", 12, 2, 6, 5, 378.0});
  CHECK(rows[1].added_off_topic == 0);

  CHECK_THROWS_AS(parse_annotations(header + "R1,-1,2,6,5,378\n"), ValidationError);
  CHECK_THROWS_AS(parse_annotations(header + "R1,1,2,6,5,378\nR1,1,2,6,5,378\n"), DuplicateError);
  CHECK_THROWS_AS(parse_annotations("id,a,b\nR1,1,2\n"), ParseError);
  CHECK_THROWS_AS(parse_annotations(header + "R1,x,2,6,5,378\n"), ParseError);
  CHECK(parse_annotations(serialize_annotations(rows)) == rows);
}

TEST_CASE("report_text modes") {
  const Report r = sections({{SectionTag::S, "a"}, {SectionTag::O, "b"}, {SectionTag::E, "c"}, {SectionTag::P, "d"}});
  CHECK(report_text(r) == "a\nb\nc\nd");
  CHECK(report_text(r, TextMode::section(SectionTag::O)) == "b");
  CHECK_THROWS_AS(report_text(sections({{SectionTag::S, "a"}}), TextMode::section(SectionTag::P)), LookupError);
}

TEST_CASE("length_stats") {
  const LengthStats s = length_stats(sections({{SectionTag::S, "ab cd"}}));
  CHECK(s.num_characters == 5);
  CHECK(s.num_words == 2);
  CHECK(s.avg_word_length == doctest::Approx(2.0));

  const LengthStats empty = length_stats(Report{});
  CHECK(empty.num_characters == 0);
  CHECK(empty.num_words == 0);
  CHECK(empty.avg_word_length == 0.0);
}

TEST_CASE("section letters") {
  for (SectionTag tag : kSectionOrder) CHECK(section_from_letter(section_letter(tag)) == tag);
  CHECK_FALSE(section_from_letter('X').has_value());
  CHECK(kind_suffix(ReportKind::Candidate) == "ai");
  CHECK(kind_suffix(ReportKind::Reference) == "gp");
}
