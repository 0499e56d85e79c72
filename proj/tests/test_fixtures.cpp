#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <set>
#include <string>
#include <vector>

#include "test_support.hpp"
#include "voidmap/fixtures.hpp"
#include "voidmap/history.hpp"
#include "voidmap/log.hpp"
#include "voidmap/soft404.hpp"
#include "voidmap/stream.hpp"
#include "voidmap/uri.hpp"
#include "voidmap/util.hpp"

using namespace voidmap;

namespace {

CorpusSpec mixed_spec() {
  CorpusSpec spec;
  spec.bucket_uris = {2, 2, 1, 0, 0};
  spec.pattern_uris = {
      {"404", 2},
      {"200", 2},
      {"404,200", 2},
      {"200,404", 2},
      {"200,404,200", 2},
      {"404,200,404", 2},
      {"404,200,404,200", 2},
      {"200,404,200,404,200++", 2},
  };
  spec.soft404_uris = 3;
  spec.lookalike_uris = 2;
  spec.collision_pairs = 2;
  spec.upper_host_uris = 2;
  spec.nonmemento_lines = 30;
  spec.redirect_lines = 20;
  spec.server_error_lines = 10;
  spec.gap_day = parse_date("2019-08-15");
  return spec;
}

}  // namespace

TEST_CASE("generation is a pure function of corpus spec and seed") {
  CorpusSpec spec = mixed_spec();
  auto first = build_corpus(spec);
  auto second = build_corpus(spec);
  REQUIRE(first.ok());
  REQUIRE(second.ok());
  CHECK(first.value().lines == second.value().lines);
  REQUIRE(first.value().uris.size() == second.value().uris.size());
  for (size_t i = 0; i < first.value().uris.size(); ++i)
    CHECK(first.value().uris[i].urir == second.value().uris[i].urir);

  CorpusSpec reseeded = spec;
  reseeded.seed = 43;
  auto third = build_corpus(reseeded);
  REQUIRE(third.ok());
  CHECK(first.value().lines != third.value().lines);
}

TEST_CASE("every generated line is valid CLF matching its entry label") {
  auto corpus = build_corpus(mixed_spec());
  REQUIRE(corpus.ok());
  const Corpus& c = corpus.value();
  REQUIRE(c.lines.size() == c.entries.size());
  REQUIRE(c.lines.size() == c.timestamps.size());

  EndpointConfig endpoints;
  int64_t previous_ts = 0;
  for (size_t i = 0; i < c.lines.size(); ++i) {
    auto entry = parse_log_line(c.lines[i]);
    REQUIRE(entry.ok());
    CHECK(entry.value().timestamp == c.timestamps[i]);
    CHECK(entry.value().timestamp >= previous_ts);  // time-ordered corpus
    previous_ts = entry.value().timestamp;

    auto classified = classify_request(entry.value(), endpoints);
    CHECK(classified.kind == c.entries[i].kind);
    CHECK(classified.urir == c.entries[i].urir);
    CHECK(entry.value().status == c.entries[i].logged_status);
    CHECK(c.entries[i].seq == i);
  }
}

TEST_CASE("planted soft-404s sit exactly on the template line, pre-boundary") {
  CorpusSpec spec = mixed_spec();
  auto corpus = build_corpus(spec);
  REQUIRE(corpus.ok());
  const Corpus& c = corpus.value();

  size_t planted = 0;
  for (size_t i = 0; i < c.lines.size(); ++i) {
    const EntryLabel& label = c.entries[i];
    auto entry = parse_log_line(c.lines[i]);
    REQUIRE(entry.ok());
    if (label.soft404) {
      ++planted;
      CHECK(label.kind == RequestKind::UriT);
      CHECK(label.logged_status == 200);
      CHECK(label.true_status == 404);
      CHECK(entry.value().bytes ==
            spec.k * int64_t(label.urir.size()) + spec.c);
      CHECK(entry.value().timestamp < spec.boundary);
    }
  }
  CHECK(planted == uint64_t(spec.soft404_uris) * spec.soft404_hits);

  // Lookalikes carry template-sized bodies but live after the boundary.
  for (const auto& label : c.uris) {
    if (!label.lookalike) continue;
    for (size_t i = 0; i < c.lines.size(); ++i) {
      if (c.entries[i].urir != label.urir) continue;
      auto entry = parse_log_line(c.lines[i]);
      REQUIRE(entry.ok());
      CHECK(entry.value().bytes ==
            spec.k * int64_t(label.urir.size()) + spec.c);
      CHECK(entry.value().timestamp >= spec.boundary);
      CHECK(c.entries[i].logged_status == 200);
      CHECK_FALSE(c.entries[i].soft404);
    }
  }
}

TEST_CASE("amendment driven by the labels has perfect precision and recall") {
  CorpusSpec spec = mixed_spec();
  auto corpus = build_corpus(spec);
  REQUIRE(corpus.ok());
  const Corpus& c = corpus.value();

  EndpointConfig endpoints;
  std::vector<MementoRequest> requests;
  for (const auto& line : c.lines) {
    auto entry = parse_log_line(line);
    REQUIRE(entry.ok());
    requests.push_back(classify_request(entry.value(), endpoints));
  }

  Soft404Model model;
  model.k = spec.k;
  model.c = spec.c;
  model.valid_until = spec.boundary;
  auto report = amend_stream(requests, model);

  uint64_t labeled = 0;
  for (size_t i = 0; i < requests.size(); ++i) {
    CHECK(requests[i].amended == c.entries[i].soft404);
    labeled += c.entries[i].soft404;
    // After amendment the logged stream agrees with the planted truth.
    if (c.entries[i].kind != RequestKind::NonMemento)
      CHECK(requests[i].entry.status == c.entries[i].true_status);
  }
  CHECK(report.amended == labeled);
  CHECK(report.amended + report.unchanged == requests.size());
}

TEST_CASE("histories over the generated corpus reproduce the labeled mix") {
  CorpusSpec spec = mixed_spec();
  auto corpus = build_corpus(spec);
  REQUIRE(corpus.ok());
  const Corpus& c = corpus.value();

  EndpointConfig endpoints;
  std::vector<MementoRequest> requests;
  for (const auto& line : c.lines) {
    auto entry = parse_log_line(line);
    REQUIRE(entry.ok());
    requests.push_back(classify_request(entry.value(), endpoints));
  }
  Soft404Model model;
  model.k = spec.k;
  model.c = spec.c;
  model.valid_until = spec.boundary;
  amend_stream(requests, model);
  filter_redirects(requests);
  std::erase_if(requests, [](const MementoRequest& r) {
    return has_upper_host(r.urir);
  });

  HistoryBuilder builder;
  for (const auto& r : requests) builder.add(r);
  auto histories = builder.finish();
  auto report = fluctuation_report(histories);

  std::map<std::string, uint64_t> expected;
  std::map<std::string, uint64_t> expected_404s;
  for (const auto& label : c.uris) {
    if (label.upper_host) continue;  // excluded upstream
    ++expected[label.pattern];
    expected_404s[label.urir] = label.count404;
  }
  CHECK(report == expected);

  for (const auto& [urir, want] : expected_404s) {
    const auto& history = histories.at(urir);
    auto it = history.counts_by_status.find(404);
    uint64_t got = it == history.counts_by_status.end() ? 0 : it->second;
    CAPTURE(urir);
    CHECK(got == want);
  }
}

TEST_CASE("the corpus writes as one file per day plus labels") {
  CorpusSpec spec = mixed_spec();
  auto corpus = build_corpus(spec);
  REQUIRE(corpus.ok());

  test_support::TempDir dir;
  auto written = write_corpus(corpus.value(), spec, dir.path.string());
  REQUIRE(written.ok());
  CHECK(written.value().lines == corpus.value().lines.size());
  CHECK(written.value().uris == corpus.value().uris.size());

  std::set<std::string> days;
  for (int64_t ts : corpus.value().timestamps) days.insert(format_date(ts));
  size_t expected_files = days.size() + !days.count("2019-08-15");
  CHECK(written.value().log_files.size() == expected_files);

  // Streaming the logs subdirectory back reproduces the corpus
  // line-for-line; labels.tsv lives one level up, out of the scanner's way.
  std::vector<std::string> lines;
  auto summary = scan_directory((dir.path / "logs").string(), ScanOptions{},
                                [&](LogEntry&& e) {
                                  lines.push_back(serialize_log_line(e));
                                });
  REQUIRE(summary.ok());
  CHECK(summary.value().parse_errors == 0);
  CHECK(lines == corpus.value().lines);

  std::string labels = test_support::read_file(written.value().labels_path);
  size_t label_lines = 0;
  for (char ch : labels) label_lines += ch == '\n';
  CHECK(label_lines ==
        corpus.value().uris.size() + corpus.value().entries.size());
}

TEST_CASE("corpus specs parse from the flat key-value format") {
  auto spec = parse_corpus_spec(
      "# fixture shape\n"
      "seed = 7\n"
      "range.start = 2019-01-01\n"
      "range.end = 2019-12-31\n"
      "boundary = 2019-11-18\n"
      "template.k = 3\n"
      "template.c = 150\n"
      "buckets.1s = 4\n"
      "buckets.100s = 2\n"
      "pattern.404,200 = 3\n"
      "pattern.200,404,200,404,200++ = 1\n"
      "soft404.uris = 5\n"
      "soft404.hits_per_uri = 6\n"
      "lookalikes = 2\n"
      "collisions = 1\n"
      "upper_host = 2\n"
      "noise.nonmemento = 10\n"
      "noise.redirects = 5\n"
      "noise.server_errors = 5\n"
      "gap_day = 2019-06-06\n");
  REQUIRE(spec.ok());
  const CorpusSpec& s = spec.value();
  CHECK(s.seed == 7);
  CHECK(s.bucket_uris == std::array<uint32_t, 5>{4, 0, 2, 0, 0});
  REQUIRE(s.pattern_uris.size() == 2);
  CHECK(s.pattern_uris[0] ==
        std::pair<std::string, uint32_t>{"404,200", 3});
  CHECK(s.soft404_uris == 5);
  CHECK(s.gap_day == parse_date("2019-06-06"));

  CHECK_FALSE(parse_corpus_spec("buckets.5s = 1\n").ok());
  CHECK_FALSE(parse_corpus_spec("template.k = 0\n").ok());
  CHECK_FALSE(parse_corpus_spec("mystery = 1\n").ok());
  CHECK(parse_corpus_spec("").ok());  // all-defaults spec
}

TEST_CASE("impossible shapes are rejected at generation time") {
  CorpusSpec inverted;
  inverted.start = parse_date("2019-12-01").value();
  inverted.end = parse_date("2019-01-01").value();
  CHECK_FALSE(build_corpus(inverted).ok());

  CorpusSpec early_boundary;
  early_boundary.boundary = early_boundary.start;
  CHECK_FALSE(build_corpus(early_boundary).ok());

  CorpusSpec bad_pattern;
  bad_pattern.pattern_uris = {{"404,404", 1}};
  CHECK_FALSE(build_corpus(bad_pattern).ok());

  CorpusSpec needs_marker;
  needs_marker.pattern_uris = {{"200,404,200,404,200", 1}};
  CHECK_FALSE(build_corpus(needs_marker).ok());

  CorpusSpec short_marker;
  short_marker.pattern_uris = {{"200,404++", 1}};
  CHECK_FALSE(build_corpus(short_marker).ok());

  CorpusSpec teapot;
  teapot.pattern_uris = {{"418", 1}};
  CHECK_FALSE(build_corpus(teapot).ok());
}
