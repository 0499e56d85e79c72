#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "voidmap/expected.hpp"
#include "voidmap/log.hpp"
#include "voidmap/profile.hpp"
#include "voidmap/stream.hpp"
#include "voidmap/util.hpp"

namespace voidmap {

// Deterministic synthetic-corpus generator. Given the same spec, generation
// is byte-identical: seeded RNG only, no wall clock, single-threaded. Every
// generated entry carries ground-truth labels so tests compare pipeline
// output against generation intent, not hand-typed constants.

struct CorpusSpec {
  uint64_t seed = 42;
  int64_t start = parse_date("2019-06-01").value();
  int64_t end = parse_date("2019-12-15").value();
  // TimeMap endpoint form and soft-404 era both switch at this day.
  int64_t boundary = parse_date("2019-11-18").value();
  int64_t k = 3;
  int64_t c = 150;

  // Always-404 URIs per request-count order of magnitude (1s..10000s).
  std::array<uint32_t, 5> bucket_uris{};
  // Extra URIs realizing a given 200/404 fluctuation pattern ("404,200";
  // a trailing "++" extends the sequence to five or more codes).
  std::vector<std::pair<std::string, uint32_t>> pattern_uris;

  uint32_t soft404_uris = 0;      // always-404, logged as templated 200s
  uint32_t soft404_hits = 6;      // pre-boundary hits per such URI
  uint32_t lookalike_uris = 0;    // genuine 200s with template-sized bodies,
                                  // dated after the boundary
  uint32_t collision_pairs = 0;   // raw spellings sharing a canonical form:
                                  // one always-404, one serving 200s
  uint32_t upper_host_uris = 0;   // uppercase-hostname URIs
  uint32_t nonmemento_lines = 0;
  uint32_t redirect_lines = 0;
  uint32_t server_error_lines = 0;
  std::optional<int64_t> gap_day;  // day written as an empty log file
};

struct UriLabel {
  std::string urir;
  std::string pattern;    // true collapsed pattern after amendment
  uint64_t count404 = 0;  // 404 responses after amendment
  bool soft404 = false;
  bool lookalike = false;
  bool upper_host = false;
  bool collision_void = false;     // the always-404 half of a pair
  bool collision_success = false;  // the half that served 200s
};

struct EntryLabel {
  uint64_t seq = 0;         // position in the time-ordered corpus
  RequestKind kind = RequestKind::NonMemento;
  std::string urir;         // empty for non-memento entries
  int logged_status = 0;
  int true_status = 0;      // what the archive really meant
  bool soft404 = false;     // entry should be amended
};

struct Corpus {
  std::vector<std::string> lines;   // time-ordered log lines
  std::vector<int64_t> timestamps;  // parallel to lines
  std::vector<EntryLabel> entries;  // parallel to lines
  std::vector<UriLabel> uris;
};

namespace detail {

// uniform_int_distribution is implementation-defined, which would tie the
// corpus bytes to a particular standard library. Plain modulo is stable
// everywhere and bias is irrelevant here.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}
  uint64_t below(uint64_t n) { return n ? engine_() % n : 0; }
  int64_t range(int64_t lo, int64_t hi) {  // inclusive
    return lo + static_cast<int64_t>(below(static_cast<uint64_t>(hi - lo + 1)));
  }
  template <typename T>
  const T& pick(const std::vector<T>& pool) {
    return pool[below(pool.size())];
  }

 private:
  std::mt19937_64 engine_;
};

inline std::string clf_timestamp(int64_t ts) {
  static constexpr const char* months[] = {"Jan", "Feb", "Mar", "Apr",
                                           "May", "Jun", "Jul", "Aug",
                                           "Sep", "Oct", "Nov", "Dec"};
  Utc t = epoch_to_utc(ts);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%02d/%s/%04d:%02d:%02d:%02d +0000", t.day,
                months[t.month - 1], t.year, t.hour, t.minute, t.second);
  return buf;
}

inline std::string timestamp14(int64_t ts) {
  Utc t = epoch_to_utc(ts);
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d%02d%02d%02d%02d%02d", t.year, t.month,
                t.day, t.hour, t.minute, t.second);
  return buf;
}

struct PlannedRequest {
  int64_t ts = 0;
  uint64_t order = 0;
  RequestKind kind = RequestKind::NonMemento;
  std::string urir;
  std::string path;
  int logged_status = 0;
  int true_status = 0;
  int64_t bytes = 0;  // -1 logs as "-"
  bool soft404 = false;
  std::string agent;
  std::string ip;
};

inline const std::vector<std::string>& agent_pool() {
  static const std::vector<std::string> pool = {
      "MemGator/1.5 (+https://memgator.example)",
      "UptimeRobot/2.0; http://www.uptimerobot.com/",
      "Mozilla/5.0 (X11; Linux x86_64) AppleWebKit/537.36 (KHTML, like "
      "Gecko) Chrome/78.0.3904.108 Safari/537.36",
      "Mozilla/5.0 (Windows NT 10.0; Win64; x64; rv:70.0) Gecko/20100101 "
      "Firefox/70.0",
      "curl/7.64.1",
      "Googlebot/2.1 (+http://www.google.com/bot.html)",
  };
  return pool;
}

// Parses "200,404,200++" into codes plus the extension marker.
inline bool parse_pattern(std::string_view text, std::vector<int>& codes,
                          bool& extended) {
  codes.clear();
  extended = false;
  if (text.ends_with("++")) {
    extended = true;
    text.remove_suffix(2);
  }
  for (auto part : split(text, ',')) {
    if (part == "200")
      codes.push_back(200);
    else if (part == "404")
      codes.push_back(404);
    else
      return false;
    if (codes.size() >= 2 && codes[codes.size() - 1] == codes[codes.size() - 2])
      return false;
  }
  return !codes.empty();
}

class Generator {
 public:
  explicit Generator(const CorpusSpec& spec) : spec_(spec), rng_(spec.seed) {}

  Expected<Corpus, std::string> run() {
    if (spec_.start > spec_.end) return std::string("range.start after range.end");
    if (spec_.boundary <= spec_.start)
      return std::string("boundary must fall after range.start");

    plan_buckets();
    if (auto err = plan_patterns(); !err.empty()) return err;
    plan_soft404();
    plan_lookalikes();
    plan_collisions();
    plan_upper_hosts();
    plan_noise();

    std::stable_sort(requests_.begin(), requests_.end(),
                     [](const PlannedRequest& a, const PlannedRequest& b) {
                       if (a.ts != b.ts) return a.ts < b.ts;
                       return a.order < b.order;
                     });

    Corpus corpus;
    corpus.uris = std::move(labels_);
    for (uint64_t seq = 0; seq < requests_.size(); ++seq) {
      const PlannedRequest& request = requests_[seq];
      corpus.lines.push_back(render(request));
      corpus.timestamps.push_back(request.ts);
      EntryLabel label;
      label.seq = seq;
      label.kind = request.kind;
      label.urir = request.urir;
      label.logged_status = request.logged_status;
      label.true_status = request.true_status;
      label.soft404 = request.soft404;
      corpus.entries.push_back(std::move(label));
    }
    return corpus;
  }

 private:
  int64_t day_end(int64_t day) { return day + 86399; }

  // n strictly increasing instants inside [lo, hi].
  std::vector<int64_t> instants(uint64_t n, int64_t lo, int64_t hi) {
    std::vector<int64_t> out;
    if (!n) return out;
    int64_t span = hi - lo;
    int64_t t = lo + rng_.range(0, std::max<int64_t>(0, span / 4));
    for (uint64_t i = 0; i < n; ++i) {
      out.push_back(t);
      int64_t room = hi - t;
      int64_t remaining = static_cast<int64_t>(n - i);
      int64_t step_cap = remaining > 0 ? std::max<int64_t>(1, room / remaining) : 1;
      t += 1 + rng_.range(0, std::max<int64_t>(0, step_cap - 1));
      if (t > hi) t = hi;  // degenerate squeeze: may repeat hi, still ordered
    }
    return out;
  }

  int64_t predict(const std::string& urir) {
    return spec_.k * static_cast<int64_t>(urir.size()) + spec_.c;
  }

  // Random sizes that must not sit on the template line for this URI.
  int64_t off_template(const std::string& urir, int64_t lo, int64_t hi) {
    for (;;) {
      int64_t bytes = rng_.range(lo, hi);
      if (bytes != predict(urir)) return bytes;
    }
  }

  void push(PlannedRequest request) {
    request.order = requests_.size();
    if (request.agent.empty()) request.agent = rng_.pick(agent_pool());
    if (request.ip.empty())
      request.ip = "172.16." + std::to_string(rng_.below(32)) + "." +
                   std::to_string(1 + rng_.below(250));
    requests_.push_back(std::move(request));
  }

  std::string render(const PlannedRequest& request) {
    std::string line = request.ip;
    line += " - - [";
    line += clf_timestamp(request.ts);
    line += "] \"GET ";
    line += request.path;
    line += " HTTP/1.1\" ";
    line += std::to_string(request.logged_status);
    line += ' ';
    line += request.bytes < 0 ? std::string("-") : std::to_string(request.bytes);
    line += " \"-\" \"";
    line += request.agent;
    line += '"';
    return line;
  }

  std::string timemap_path(const std::string& urir, int64_t ts) {
    return (ts < spec_.boundary ? "/wayback/timemap/*/" : "/wayback/timemap/link/") +
           urir;
  }

  // One memento request for `urir` at `ts`, mostly TimeMap traffic with some
  // replay mixed in.
  PlannedRequest memento(const std::string& urir, int64_t ts, int logged,
                         int truth, int64_t bytes) {
    PlannedRequest request;
    request.ts = ts;
    request.urir = urir;
    request.logged_status = logged;
    request.true_status = truth;
    request.bytes = bytes;
    if (rng_.below(10) < 7) {
      request.kind = RequestKind::UriT;
      request.path = timemap_path(urir, ts);
    } else {
      request.kind = RequestKind::UriM;
      request.path = "/wayback/" + timestamp14(ts - rng_.range(0, 86400 * 365)) +
                     "/" + urir;
    }
    return request;
  }

  void add_always_404(const std::string& urir, uint64_t hits, bool upper) {
    auto times = instants(hits, spec_.start, day_end(spec_.end));
    for (int64_t ts : times)
      push(memento(urir, ts, 404, 404, off_template(urir, 120, 900)));
    UriLabel label;
    label.urir = urir;
    label.pattern = "404";
    label.count404 = hits;
    label.upper_host = upper;
    labels_.push_back(std::move(label));
  }

  void plan_buckets() {
    static constexpr std::array<std::pair<uint64_t, uint64_t>, 5> ranges{
        {{1, 9}, {10, 99}, {100, 999}, {1000, 9999}, {10000, 12000}}};
    for (size_t bucket = 0; bucket < 5; ++bucket) {
      for (uint32_t i = 0; i < spec_.bucket_uris[bucket]; ++i) {
        std::string urir = "http://void" + std::to_string(bucket) + "-" +
                           std::to_string(i) + ".example/missing/p" +
                           std::to_string(rng_.below(1000));
        uint64_t hits = ranges[bucket].first +
                        rng_.below(ranges[bucket].second - ranges[bucket].first + 1);
        add_always_404(urir, hits, false);
      }
    }
  }

  std::string plan_patterns() {
    for (size_t p = 0; p < spec_.pattern_uris.size(); ++p) {
      const auto& [pattern, uri_count] = spec_.pattern_uris[p];
      std::vector<int> codes;
      bool extended = false;
      if (!parse_pattern(pattern, codes, extended))
        return "bad pattern: " + pattern;
      if (!extended && codes.size() >= 5)
        return "pattern of 5+ codes needs ++: " + pattern;
      if (extended && codes.size() != 5)
        return "++ patterns take exactly five codes: " + pattern;
      for (uint32_t i = 0; i < uri_count; ++i) {
        std::vector<int> realized = codes;
        if (extended) {
          while (realized.size() < 5) realized.push_back(flip(realized.back()));
          uint64_t extra = rng_.below(3);
          for (uint64_t e = 0; e < extra; ++e)
            realized.push_back(flip(realized.back()));
        }
        std::string urir = "http://flux" + std::to_string(p) + "-" +
                           std::to_string(i) + ".example/item/" +
                           std::to_string(rng_.below(10000));
        emit_pattern(urir, realized, pattern_label(realized));
      }
    }
    return "";
  }

  static int flip(int code) { return code == 200 ? 404 : 200; }

  static std::string pattern_label(const std::vector<int>& codes) {
    std::string out;
    size_t shown = std::min<size_t>(codes.size(), 5);
    for (size_t i = 0; i < shown; ++i) {
      if (i) out += ',';
      out += std::to_string(codes[i]);
    }
    if (codes.size() >= 5) out += "++";
    return out;
  }

  void emit_pattern(const std::string& urir, const std::vector<int>& codes,
                    const std::string& label_pattern) {
    std::vector<int> statuses;
    for (int code : codes) {
      uint64_t run = 1 + rng_.below(3);
      for (uint64_t r = 0; r < run; ++r) statuses.push_back(code);
    }
    auto times = instants(statuses.size(), spec_.start, day_end(spec_.end));
    uint64_t count404 = 0;
    for (size_t i = 0; i < statuses.size(); ++i) {
      int status = statuses[i];
      if (status == 404) ++count404;
      int64_t bytes = status == 404 ? off_template(urir, 120, 900)
                                    : off_template(urir, 1000, 60000);
      push(memento(urir, times[i], status, status, bytes));
    }
    UriLabel label;
    label.urir = urir;
    label.pattern = label_pattern;
    label.count404 = count404;
    labels_.push_back(std::move(label));
  }

  void plan_soft404() {
    for (uint32_t i = 0; i < spec_.soft404_uris; ++i) {
      std::string urir = "http://gone" + std::to_string(i) +
                         ".example/deleted/page" + std::to_string(rng_.below(1000));
      auto times =
          instants(spec_.soft404_hits, spec_.start, spec_.boundary - 1);
      for (int64_t ts : times) {
        PlannedRequest request;
        request.ts = ts;
        request.kind = RequestKind::UriT;
        request.urir = urir;
        request.path = timemap_path(urir, ts);
        request.logged_status = 200;
        request.true_status = 404;
        request.bytes = predict(urir);
        request.soft404 = true;
        push(std::move(request));
      }
      UriLabel label;
      label.urir = urir;
      label.pattern = "404";
      label.count404 = spec_.soft404_hits;
      label.soft404 = true;
      labels_.push_back(std::move(label));
    }
  }

  void plan_lookalikes() {
    if (!spec_.lookalike_uris) return;
    if (spec_.boundary > spec_.end) return;  // no post-boundary era to land in
    for (uint32_t i = 0; i < spec_.lookalike_uris; ++i) {
      std::string urir = "http://alive" + std::to_string(i) +
                         ".example/page" + std::to_string(rng_.below(1000));
      auto times = instants(2 + rng_.below(3), spec_.boundary, day_end(spec_.end));
      for (int64_t ts : times) {
        PlannedRequest request;
        request.ts = ts;
        request.kind = RequestKind::UriT;
        request.urir = urir;
        request.path = timemap_path(urir, ts);
        request.logged_status = 200;
        request.true_status = 200;
        request.bytes = predict(urir);  // coincidence by construction
        push(std::move(request));
      }
      UriLabel label;
      label.urir = urir;
      label.pattern = "200";
      label.lookalike = true;
      labels_.push_back(std::move(label));
    }
  }

  void plan_collisions() {
    for (uint32_t i = 0; i < spec_.collision_pairs; ++i) {
      std::string host = "coll" + std::to_string(i) + ".example";
      std::string voided = "http://" + host + "/docs/%7Euser" + std::to_string(i);
      std::string living = "http://" + host + "/docs/~user" + std::to_string(i);
      add_always_404(voided, 110 + rng_.below(60), false);
      auto& label = labels_.back();
      label.collision_void = true;

      auto times = instants(2 + rng_.below(3), spec_.start, day_end(spec_.end));
      for (int64_t ts : times)
        push(memento(living, ts, 200, 200, off_template(living, 1000, 60000)));
      UriLabel alive;
      alive.urir = living;
      alive.pattern = "200";
      alive.collision_success = true;
      labels_.push_back(std::move(alive));
    }
  }

  void plan_upper_hosts() {
    for (uint32_t i = 0; i < spec_.upper_host_uris; ++i) {
      std::string urir = "http://Mixed" + std::to_string(i) +
                         ".example/cased/p" + std::to_string(rng_.below(100));
      add_always_404(urir, 10 + rng_.below(40), true);
    }
  }

  void plan_noise() {
    static const std::vector<std::string> plain_paths = {
        "/favicon.ico", "/robots.txt", "/index.html", "/css/site.css",
        "/js/app.js",   "/about",      "/search?q=archive"};
    for (uint32_t i = 0; i < spec_.nonmemento_lines; ++i) {
      PlannedRequest request;
      request.ts = rng_.range(spec_.start, day_end(spec_.end));
      request.kind = RequestKind::NonMemento;
      request.path = rng_.pick(plain_paths);
      request.logged_status = rng_.below(5) ? 200 : 404;
      request.true_status = request.logged_status;
      request.bytes = rng_.range(100, 20000);
      push(std::move(request));
    }
    for (uint32_t i = 0; i < spec_.redirect_lines; ++i) {
      std::string urir = "http://moved" + std::to_string(rng_.below(20)) +
                         ".example/old/" + std::to_string(rng_.below(50));
      int64_t ts = rng_.range(spec_.start, day_end(spec_.end));
      PlannedRequest request = memento(urir, ts, 302, 302, -1);
      if (rng_.below(2)) request.bytes = rng_.range(0, 400);
      push(std::move(request));
    }
    for (uint32_t i = 0; i < spec_.server_error_lines; ++i) {
      std::string urir = "http://erratic" + std::to_string(rng_.below(10)) +
                         ".example/flaky/" + std::to_string(rng_.below(30));
      int64_t ts = rng_.range(spec_.start, day_end(spec_.end));
      int status = rng_.below(2) ? 500 : 503;
      push(memento(urir, ts, status, status, rng_.range(100, 2000)));
    }
  }

  CorpusSpec spec_;
  Rng rng_;
  std::vector<PlannedRequest> requests_;
  std::vector<UriLabel> labels_;
};

}  // namespace detail

inline Expected<Corpus, std::string> build_corpus(const CorpusSpec& spec) {
  return detail::Generator(spec).run();
}

inline std::string uri_label_flags(const UriLabel& label) {
  std::string flags;
  auto add = [&](const char* flag) {
    if (!flags.empty()) flags += ',';
    flags += flag;
  };
  if (label.soft404) add("soft404");
  if (label.lookalike) add("lookalike");
  if (label.upper_host) add("upper-host");
  if (label.collision_void) add("collision-void");
  if (label.collision_success) add("collision-success");
  return flags.empty() ? "-" : flags;
}

struct GeneratedCorpus {
  std::vector<std::string> log_files;
  std::string labels_path;
  uint64_t lines = 0;
  uint64_t uris = 0;
  uint64_t planted_soft404 = 0;
};

// Writes one logs/access-YYYY-MM-DD.log per day with traffic (plus an empty
// file for the configured gap day) and labels.tsv with one "uri" row per
// planned resource and one "entry" row per log line. Labels sit outside the
// logs/ subdirectory so the log scanner never sees them.
inline Expected<GeneratedCorpus, IoError> write_corpus(const Corpus& corpus,
                                                       const CorpusSpec& spec,
                                                       const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  std::string logs_dir = out_dir + "/logs";
  fs::create_directories(logs_dir, ec);
  if (ec) return IoError{logs_dir, ec.message()};

  GeneratedCorpus summary;
  std::ofstream log;
  std::string open_day;
  for (size_t i = 0; i < corpus.lines.size(); ++i) {
    std::string day = format_date(corpus.timestamps[i]);
    if (day != open_day) {
      std::string path = logs_dir + "/access-" + day + ".log";
      log.close();
      log.open(path, std::ios::binary);
      if (!log) return IoError{path, "cannot open for writing"};
      open_day = day;
      summary.log_files.push_back(path);
    }
    log << corpus.lines[i] << '\n';
  }
  log.close();

  if (spec.gap_day) {
    std::string path = logs_dir + "/access-" + format_date(*spec.gap_day) + ".log";
    if (std::find(summary.log_files.begin(), summary.log_files.end(), path) ==
        summary.log_files.end()) {
      std::ofstream gap(path, std::ios::binary);
      if (!gap) return IoError{path, "cannot open for writing"};
      summary.log_files.push_back(path);
    }
  }
  std::sort(summary.log_files.begin(), summary.log_files.end());

  summary.labels_path = out_dir + "/labels.tsv";
  std::ofstream labels(summary.labels_path, std::ios::binary);
  if (!labels) return IoError{summary.labels_path, "cannot open for writing"};
  for (const auto& label : corpus.uris) {
    labels << "uri\t" << label.urir << '\t' << label.pattern << '\t'
           << label.count404 << '\t' << uri_label_flags(label) << '\n';
  }
  for (const auto& entry : corpus.entries) {
    labels << "entry\t" << entry.seq << '\t' << kind_name(entry.kind) << '\t'
           << (entry.urir.empty() ? "-" : entry.urir) << '\t'
           << entry.logged_status << '\t' << entry.true_status << '\t'
           << (entry.soft404 ? '1' : '0') << '\n';
    if (entry.soft404) ++summary.planted_soft404;
  }
  summary.lines = corpus.lines.size();
  summary.uris = corpus.uris.size();
  return summary;
}

struct SpecError {
  size_t line = 0;
  std::string reason;
};

// Same flat key = value format as the pipeline config.
inline Expected<CorpusSpec, SpecError> parse_corpus_spec(std::string_view text) {
  CorpusSpec spec;
  size_t lineno = 0;
  size_t start = 0;
  while (start <= text.size()) {
    size_t end = text.find('\n', start);
    std::string_view raw = end == std::string_view::npos
                               ? text.substr(start)
                               : text.substr(start, end - start);
    start = end == std::string_view::npos ? text.size() + 1 : end + 1;
    ++lineno;
    std::string line;
    {
      size_t b = 0, e = raw.size();
      while (b < e && (raw[b] == ' ' || raw[b] == '\t')) ++b;
      while (e > b && (raw[e - 1] == ' ' || raw[e - 1] == '\t' || raw[e - 1] == '\r'))
        --e;
      line.assign(raw.substr(b, e - b));
    }
    if (line.empty() || line[0] == '#') continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos) return SpecError{lineno, "expected key = value"};
    auto trim_part = [](std::string_view s) {
      size_t b = 0, e = s.size();
      while (b < e && s[b] == ' ') ++b;
      while (e > b && s[e - 1] == ' ') --e;
      return std::string(s.substr(b, e - b));
    };
    std::string key = trim_part(std::string_view(line).substr(0, eq));
    std::string value = trim_part(std::string_view(line).substr(eq + 1));
    auto bad = [&](const char* what) {
      return SpecError{lineno, std::string("bad ") + what + ": " + value};
    };

    auto as_u32 = [&]() -> std::optional<uint32_t> {
      auto v = parse_u64(value);
      if (!v || *v > UINT32_MAX) return std::nullopt;
      return static_cast<uint32_t>(*v);
    };

    if (key == "seed") {
      auto v = parse_u64(value);
      if (!v) return bad("seed");
      spec.seed = *v;
    } else if (key == "range.start") {
      auto v = parse_date(value);
      if (!v) return bad("range.start");
      spec.start = *v;
    } else if (key == "range.end") {
      auto v = parse_date(value);
      if (!v) return bad("range.end");
      spec.end = *v;
    } else if (key == "boundary") {
      auto v = parse_date(value);
      if (!v) return bad("boundary");
      spec.boundary = *v;
    } else if (key == "template.k") {
      auto v = parse_i64(value);
      if (!v || *v < 1) return bad("template.k");
      spec.k = *v;
    } else if (key == "template.c") {
      auto v = parse_i64(value);
      if (!v || *v < 0) return bad("template.c");
      spec.c = *v;
    } else if (key.starts_with("buckets.")) {
      std::string_view bucket = std::string_view(key).substr(8);
      auto v = as_u32();
      if (!v) return bad("bucket count");
      bool known = false;
      for (size_t i = 0; i < BucketHistogram::labels.size(); ++i) {
        if (bucket == BucketHistogram::labels[i]) {
          spec.bucket_uris[i] = *v;
          known = true;
        }
      }
      if (!known) return SpecError{lineno, "unknown bucket: " + key};
    } else if (key.starts_with("pattern.")) {
      auto v = as_u32();
      if (!v) return bad("pattern count");
      spec.pattern_uris.emplace_back(key.substr(8), *v);
    } else if (key == "soft404.uris") {
      auto v = as_u32();
      if (!v) return bad("soft404.uris");
      spec.soft404_uris = *v;
    } else if (key == "soft404.hits_per_uri") {
      auto v = as_u32();
      if (!v || !*v) return bad("soft404.hits_per_uri");
      spec.soft404_hits = *v;
    } else if (key == "lookalikes") {
      auto v = as_u32();
      if (!v) return bad("lookalikes");
      spec.lookalike_uris = *v;
    } else if (key == "collisions") {
      auto v = as_u32();
      if (!v) return bad("collisions");
      spec.collision_pairs = *v;
    } else if (key == "upper_host") {
      auto v = as_u32();
      if (!v) return bad("upper_host");
      spec.upper_host_uris = *v;
    } else if (key == "noise.nonmemento") {
      auto v = as_u32();
      if (!v) return bad("noise.nonmemento");
      spec.nonmemento_lines = *v;
    } else if (key == "noise.redirects") {
      auto v = as_u32();
      if (!v) return bad("noise.redirects");
      spec.redirect_lines = *v;
    } else if (key == "noise.server_errors") {
      auto v = as_u32();
      if (!v) return bad("noise.server_errors");
      spec.server_error_lines = *v;
    } else if (key == "gap_day") {
      auto v = parse_date(value);
      if (!v) return bad("gap_day");
      spec.gap_day = *v;
    } else {
      return SpecError{lineno, "unknown key: " + key};
    }
  }
  return spec;
}

inline Expected<CorpusSpec, SpecError> load_corpus_spec(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return SpecError{0, "cannot open " + path};
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_corpus_spec(buffer.str());
}

}  // namespace voidmap
