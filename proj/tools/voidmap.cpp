// voidmap — profile the holes in a web archive from its access logs.
//
// Pipeline stages are individual subcommands glued by a normalized
// tab-separated record stream, so any stage can be run, inspected, or
// replaced in isolation:
//
//   voidmap parse logs/ | voidmap amend | voidmap profile --records - --out voids.profile
//
// stdout carries data, stderr carries diagnostics; every subcommand exits
// nonzero on failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "voidmap/config.hpp"
#include "voidmap/evaluator.hpp"
#include "voidmap/fixtures.hpp"
#include "voidmap/history.hpp"
#include "voidmap/log.hpp"
#include "voidmap/pipeline.hpp"
#include "voidmap/profile.hpp"
#include "voidmap/record.hpp"
#include "voidmap/router.hpp"
#include "voidmap/soft404.hpp"
#include "voidmap/stream.hpp"
#include "voidmap/surt.hpp"
#include "voidmap/uri.hpp"

namespace {

using namespace voidmap;

PipelineConfig load_config_or_exit(const std::string& path) {
  if (path.empty()) return PipelineConfig{};
  auto config = load_config(path);
  if (!config.ok()) {
    std::fprintf(stderr, "voidmap: config %s line %zu: %s\n", path.c_str(),
                 config.error().line, config.error().reason.c_str());
    std::exit(2);
  }
  return config.value();
}

struct RecordStream {
  std::vector<Record> records;
  uint64_t skipped = 0;
};

bool load_records(const std::string& path, RecordStream& out) {
  auto consume = [&](std::istream& in) {
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      auto record = from_record(line);
      if (record.ok())
        out.records.push_back(std::move(record.value()));
      else
        ++out.skipped;
    }
  };
  if (path == "-") {
    consume(std::cin);
    return true;
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  consume(in);
  return true;
}

std::vector<MementoRequest> classify_records(std::vector<Record>&& records,
                                             const PipelineConfig& config,
                                             bool apply_exclusions,
                                             uint64_t* excluded_upper) {
  std::vector<MementoRequest> requests;
  requests.reserve(records.size());
  for (auto& record : records) {
    MementoRequest request =
        classify_request(std::move(record.entry), config.endpoints);
    request.amended = record.amended;
    if (apply_exclusions && request.kind != RequestKind::NonMemento &&
        config.exclude_upper_host && has_upper_host(request.urir)) {
      if (excluded_upper) ++*excluded_upper;
      continue;
    }
    requests.push_back(std::move(request));
  }
  return requests;
}

std::map<std::string, StatusHistory> histories_of(
    std::vector<MementoRequest>& requests, const PipelineConfig& config) {
  filter_redirects(requests);
  HistoryBuilder builder(config.history_canonical);
  for (const auto& request : requests) builder.add(request);
  return builder.finish();
}

// Scan a log directory into classified (not yet amended) requests.
bool scan_logs(const std::string& dir, const PipelineConfig& config,
               std::vector<MementoRequest>& requests, StreamSummary& summary,
               uint64_t* excluded_upper) {
  ScanOptions options;
  options.jobs = config.jobs;
  options.range.from = config.range_from;
  options.range.to = config.range_to;
  auto scanned = scan_directory(dir, options, [&](LogEntry&& entry) {
    if (config.range_from && entry.timestamp < *config.range_from) return;
    if (config.range_to && entry.timestamp >= *config.range_to + 86400) return;
    MementoRequest request = classify_request(std::move(entry), config.endpoints);
    if (request.kind != RequestKind::NonMemento && config.exclude_upper_host &&
        has_upper_host(request.urir)) {
      if (excluded_upper) ++*excluded_upper;
      return;
    }
    requests.push_back(std::move(request));
  });
  if (!scanned.ok()) {
    std::fprintf(stderr, "voidmap: %s: %s\n", scanned.error().path.c_str(),
                 scanned.error().reason.c_str());
    return false;
  }
  summary = scanned.value();
  return true;
}

int cmd_parse(const std::vector<std::string>& inputs, const std::string& config_path,
              int jobs, const std::string& from, const std::string& to) {
  PipelineConfig config = load_config_or_exit(config_path);
  if (jobs > 0) config.jobs = jobs;
  if (!from.empty()) {
    auto date = parse_date(from);
    if (!date) { std::fprintf(stderr, "voidmap: bad --from date\n"); return 2; }
    config.range_from = *date;
  }
  if (!to.empty()) {
    auto date = parse_date(to);
    if (!date) { std::fprintf(stderr, "voidmap: bad --to date\n"); return 2; }
    config.range_to = *date;
  }

  uint64_t entries = 0, errors = 0;
  std::string out;
  auto emit = [&](const LogEntry& entry) {
    out.assign(to_record(entry));
    out += '\n';
    std::fwrite(out.data(), 1, out.size(), stdout);
    ++entries;
  };

  for (const auto& input : inputs) {
    std::error_code ec;
    if (std::filesystem::is_directory(input, ec)) {
      ScanOptions options;
      options.jobs = config.jobs;
      options.range.from = config.range_from;
      options.range.to = config.range_to;
      auto scanned = scan_directory(input, options, [&](LogEntry&& entry) {
        emit(entry);
      });
      if (!scanned.ok()) {
        std::fprintf(stderr, "voidmap: %s: %s\n", scanned.error().path.c_str(),
                     scanned.error().reason.c_str());
        return 1;
      }
      errors += scanned.value().parse_errors;
      for (const auto& file : scanned.value().files)
        if (file.unreadable)
          std::fprintf(stderr, "voidmap: skipped unreadable %s\n",
                       file.path.c_str());
    } else {
      bool ok = for_each_line(input, [&](std::string_view line) {
        if (line.empty()) return;
        auto parsed = parse_log_line(line);
        if (parsed.ok())
          emit(parsed.value());
        else
          ++errors;
      });
      if (!ok) {
        std::fprintf(stderr, "voidmap: cannot read %s\n", input.c_str());
        return 1;
      }
    }
  }
  std::fflush(stdout);
  std::fprintf(stderr, "voidmap: %llu records, %llu malformed lines\n",
               static_cast<unsigned long long>(entries),
               static_cast<unsigned long long>(errors));
  return 0;
}

int cmd_canon(const std::vector<std::string>& uris) {
  auto one = [](const std::string& uri) {
    auto canonical = canonicalize(uri);
    if (canonical.ok()) {
      std::string c = canonical.value().to_string();
      std::string key = to_surt(canonical.value()).to_string();
      std::printf("%s\t%s\t%s\n", uri.c_str(), c.c_str(), key.c_str());
    } else {
      std::printf("%s\t-\t-\n", uri.c_str());
      std::fprintf(stderr, "voidmap: %s: %s\n", uri.c_str(),
                   canonical.error().reason.c_str());
    }
  };
  if (!uris.empty()) {
    for (const auto& uri : uris) one(uri);
    return 0;
  }
  std::string line;
  while (std::getline(std::cin, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) one(line);
  }
  return 0;
}

int cmd_amend(const std::string& records_path, const std::string& config_path,
              int64_t k, int64_t c, const std::string& samples_path,
              const std::string& valid_until, const std::string& report_path) {
  PipelineConfig config = load_config_or_exit(config_path);
  if (k > 0) config.soft404_k = k;
  if (c >= 0) config.soft404_c = c;
  if (!samples_path.empty()) config.soft404_samples_file = samples_path;
  if (!valid_until.empty()) {
    auto date = parse_date(valid_until);
    if (!date) { std::fprintf(stderr, "voidmap: bad --valid-until date\n"); return 2; }
    config.soft404_valid_until = *date;
  }

  Soft404Model model;
  if (!config.soft404_samples_file.empty()) {
    std::vector<std::pair<int64_t, int64_t>> samples;
    bool ok = for_each_line(config.soft404_samples_file, [&](std::string_view line) {
      if (line.empty() || line[0] == '#') return;
      size_t sep = line.find_first_of("\t ");
      if (sep == std::string_view::npos) return;
      auto len = parse_i64(line.substr(0, sep));
      auto bytes = parse_i64(line.substr(sep + 1));
      if (len && bytes) samples.emplace_back(*len, *bytes);
    });
    if (!ok) {
      std::fprintf(stderr, "voidmap: cannot read %s\n",
                   config.soft404_samples_file.c_str());
      return 1;
    }
    auto fitted = fit_model(samples);
    if (!fitted.ok()) {
      std::fprintf(stderr, "voidmap: fit failed: %s\n",
                   fitted.error().reason.c_str());
      return 1;
    }
    model = fitted.value();
    model.valid_until = config.soft404_valid_until;
  } else {
    model = config.soft404_model();
  }

  RecordStream stream;
  if (!load_records(records_path, stream)) {
    std::fprintf(stderr, "voidmap: cannot read %s\n", records_path.c_str());
    return 1;
  }
  if (stream.skipped)
    std::fprintf(stderr, "voidmap: skipped %llu malformed records\n",
                 static_cast<unsigned long long>(stream.skipped));

  AmendReport report;
  std::string out;
  for (auto& record : stream.records) {
    MementoRequest request =
        classify_request(std::move(record.entry), config.endpoints);
    request.amended = record.amended;
    if (amend_entry(request, model))
      ++report.amended;
    else
      ++report.unchanged;
    out.assign(to_record(Record{std::move(request.entry), request.amended}));
    out += '\n';
    std::fwrite(out.data(), 1, out.size(), stdout);
  }
  std::fflush(stdout);

  nlohmann::json j = {{"amended", report.amended},
                      {"unchanged", report.unchanged},
                      {"fit", {{"k", model.k}, {"c", model.c}}}};
  std::string text = j.dump(2) + "\n";
  if (report_path.empty()) {
    std::fputs(text.c_str(), stderr);
  } else {
    std::ofstream rep(report_path, std::ios::binary);
    if (!rep) {
      std::fprintf(stderr, "voidmap: cannot write %s\n", report_path.c_str());
      return 1;
    }
    rep << text;
  }
  return 0;
}

int cmd_profile(const std::string& logs_dir, const std::string& records_path,
                const std::string& out_path, const std::string& config_path,
                int64_t min_count, int host_depth, int path_depth, bool exact) {
  PipelineConfig config = load_config_or_exit(config_path);
  if (min_count >= 0) config.profile_min_count = static_cast<uint64_t>(min_count);
  if (host_depth >= 0 || path_depth >= 0) {
    if (exact) {
      std::fprintf(stderr, "voidmap: --exact conflicts with depth flags\n");
      return 2;
    }
    config.profile_policy.exact = false;
    config.profile_policy.host_depth = host_depth >= 0 ? host_depth : -1;
    config.profile_policy.path_depth = path_depth >= 0 ? path_depth : -1;
  } else if (exact) {
    config.profile_policy = SummarizationPolicy{};
  }

  std::vector<MementoRequest> requests;
  uint64_t excluded_upper = 0;
  if (!logs_dir.empty()) {
    StreamSummary summary;
    if (!scan_logs(logs_dir, config, requests, summary, &excluded_upper)) return 1;
    Soft404Model model = config.soft404_model();
    AmendReport amended = amend_stream(requests, model);
    std::fprintf(stderr, "voidmap: %llu entries, %llu amended\n",
                 static_cast<unsigned long long>(summary.entries),
                 static_cast<unsigned long long>(amended.amended));
  } else {
    RecordStream stream;
    if (!load_records(records_path, stream)) {
      std::fprintf(stderr, "voidmap: cannot read %s\n", records_path.c_str());
      return 1;
    }
    if (stream.skipped)
      std::fprintf(stderr, "voidmap: skipped %llu malformed records\n",
                   static_cast<unsigned long long>(stream.skipped));
    requests = classify_records(std::move(stream.records), config, true,
                                &excluded_upper);
  }

  int64_t min_ts = 0, max_ts = 0;
  bool any = false;
  for (const auto& request : requests) {
    if (!any) { min_ts = max_ts = request.entry.timestamp; any = true; }
    min_ts = std::min(min_ts, request.entry.timestamp);
    max_ts = std::max(max_ts, request.entry.timestamp);
  }

  auto histories = histories_of(requests, config);
  auto candidates = select_void_candidates(histories, config.profile_min_count);
  auto success_keys = success_key_set(histories);
  VoidsProfile profile =
      summarize_keys(candidates, config.profile_policy, success_keys);
  profile.meta.archive_id = config.archive_id;
  profile.meta.threshold = config.profile_min_count;
  if (any) {
    profile.meta.range_from = format_date(min_ts);
    profile.meta.range_to = format_date(max_ts);
    profile.meta.generated = format_iso8601(max_ts);
  }

  std::string text = write_profile(profile);
  if (out_path.empty() || out_path == "-") {
    std::fwrite(text.data(), 1, text.size(), stdout);
    std::fflush(stdout);
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
      std::fprintf(stderr, "voidmap: cannot write %s\n", out_path.c_str());
      return 1;
    }
    out << text;
  }
  std::fprintf(stderr,
               "voidmap: %zu histories, %zu candidates, %zu keys "
               "(%llu dropped, %llu suppressed, %llu upper-host excluded)\n",
               histories.size(), candidates.size(), profile.entries.size(),
               static_cast<unsigned long long>(profile.meta.dropped),
               static_cast<unsigned long long>(profile.meta.suppressed),
               static_cast<unsigned long long>(excluded_upper));
  return 0;
}

Expected<VoidsProfile, std::string> load_profile_file(const std::string& path,
                                                      const char* expect_type) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::string("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  auto profile = read_profile(buffer.str());
  if (!profile.ok())
    return std::string(path + " line " + std::to_string(profile.error().line) +
                       ": " + profile.error().reason);
  if (profile.value().meta.type != expect_type)
    std::fprintf(stderr, "voidmap: warning: %s declares type '%s', used as %s\n",
                 path.c_str(), profile.value().meta.type.c_str(), expect_type);
  return profile.value();
}

int cmd_route(const std::string& holdings_path, const std::string& voids_path,
              const std::string& config_path, bool prefer_voids,
              bool no_default_route) {
  PipelineConfig config = load_config_or_exit(config_path);
  if (prefer_voids) config.routing.prefer_voids = true;
  if (no_default_route) config.routing.default_route = false;

  VoidsProfile holdings, voids;
  if (!holdings_path.empty()) {
    auto loaded = load_profile_file(holdings_path, "holdings");
    if (!loaded.ok()) {
      std::fprintf(stderr, "voidmap: %s\n", loaded.error().c_str());
      return 1;
    }
    holdings = std::move(loaded.value());
  }
  if (!voids_path.empty()) {
    auto loaded = load_profile_file(voids_path, "voids");
    if (!loaded.ok()) {
      std::fprintf(stderr, "voidmap: %s\n", loaded.error().c_str());
      return 1;
    }
    voids = std::move(loaded.value());
  }
  auto index = ProfileIndex::build(holdings, voids, config.routing);
  if (!index.ok()) {
    std::fprintf(stderr, "voidmap: bad key %s: %s\n", index.error().key.c_str(),
                 index.error().reason.c_str());
    return 1;
  }

  std::string line;
  while (std::getline(std::cin, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    RoutingDecision decision = index.value().match(line);
    std::printf("%s\t%s\t%s\t%s\t%d\n", line.c_str(),
                verdict_name(decision.verdict), source_name(decision.source),
                decision.matched_key.empty() ? "-" : decision.matched_key.c_str(),
                decision.depth);
  }
  std::fflush(stdout);
  return 0;
}

nlohmann::json eval_to_json(const EvalReport& report) {
  return {{"threshold", report.threshold},
          {"profile_size", report.profile_size},
          {"total_requests", report.total_requests},
          {"avoided", report.avoided},
          {"false_negatives", report.false_negatives},
          {"true_negatives", report.true_negatives},
          {"savings_pct", report.savings_pct},
          {"fn_pct", report.fn_pct}};
}

int cmd_eval(const std::string& voids_path, const std::string& replay_path,
             const std::string& config_path, std::vector<uint64_t> sweep) {
  PipelineConfig config = load_config_or_exit(config_path);
  RecordStream stream;
  if (!load_records(replay_path, stream)) {
    std::fprintf(stderr, "voidmap: cannot read %s\n", replay_path.c_str());
    return 1;
  }
  if (stream.skipped)
    std::fprintf(stderr, "voidmap: skipped %llu malformed records\n",
                 static_cast<unsigned long long>(stream.skipped));
  auto requests = classify_records(std::move(stream.records), config, true, nullptr);

  std::vector<ReplayRecord> replay;
  for (const auto& request : requests) {
    if (request.kind == RequestKind::NonMemento || request.urir.empty()) continue;
    replay.push_back({request.urir, request.entry.status});
  }

  if (!sweep.empty()) {
    for (size_t i = 1; i < sweep.size(); ++i) {
      if (sweep[i] <= sweep[i - 1]) {
        std::fprintf(stderr, "voidmap: --sweep must be strictly increasing\n");
        return 2;
      }
    }
    auto histories = histories_of(requests, config);
    auto reports = threshold_sweep(histories, replay, sweep);
    nlohmann::json j = nlohmann::json::array();
    for (const auto& report : reports) j.push_back(eval_to_json(report));
    std::printf("%s\n", j.dump(2).c_str());
    return 0;
  }

  if (voids_path.empty()) {
    std::fprintf(stderr, "voidmap: need --voids or --sweep\n");
    return 2;
  }
  auto loaded = load_profile_file(voids_path, "voids");
  if (!loaded.ok()) {
    std::fprintf(stderr, "voidmap: %s\n", loaded.error().c_str());
    return 1;
  }
  auto index = ProfileIndex::build(VoidsProfile{}, loaded.value(), config.routing);
  if (!index.ok()) {
    std::fprintf(stderr, "voidmap: bad key %s: %s\n", index.error().key.c_str(),
                 index.error().reason.c_str());
    return 1;
  }
  EvalReport report = evaluate(index.value(), replay, loaded.value().meta.threshold,
                               loaded.value().entries.size());
  std::printf("%s\n", eval_to_json(report).dump(2).c_str());
  return 0;
}

int cmd_stats(const std::string& table, const std::string& records_path,
              const std::string& config_path, const std::string& urir,
              int64_t top_min, const std::string& agents) {
  PipelineConfig config = load_config_or_exit(config_path);
  if (top_min >= 0) config.eval_top_min_count = static_cast<uint64_t>(top_min);
  if (!agents.empty()) {
    config.agent_patterns.clear();
    for (auto part : split(agents, ',')) {
      size_t colon = part.find(':');
      if (colon == std::string_view::npos || colon == 0) {
        std::fprintf(stderr, "voidmap: bad --agents entry\n");
        return 2;
      }
      config.agent_patterns.emplace_back(std::string(part.substr(0, colon)),
                                         std::string(part.substr(colon + 1)));
    }
  }

  RecordStream stream;
  if (!load_records(records_path, stream)) {
    std::fprintf(stderr, "voidmap: cannot read %s\n", records_path.c_str());
    return 1;
  }
  bool history_table = table == "fluctuations" || table == "agent";
  auto requests =
      classify_records(std::move(stream.records), config, history_table, nullptr);

  if (table == "fluctuations") {
    auto histories = histories_of(requests, config);
    auto report = fluctuation_report(histories);
    std::vector<std::pair<std::string, uint64_t>> rows(report.begin(), report.end());
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
      if (a.second != b.second) return a.second > b.second;
      return a.first < b.first;
    });
    for (const auto& [pattern, count] : rows)
      std::printf("%s\t%llu\n", pattern.c_str(),
                  static_cast<unsigned long long>(count));
    return 0;
  }
  if (table == "agent") {
    if (urir.empty()) {
      std::fprintf(stderr, "voidmap: stats agent needs --urir\n");
      return 2;
    }
    auto pivot = agent_pivot(requests, urir);
    for (const auto& [agent, statuses] : pivot)
      for (const auto& [status, count] : statuses)
        std::printf("%s\t%d\t%llu\n", agent.c_str(), status,
                    static_cast<unsigned long long>(count));
    return 0;
  }

  AccessReportOptions options;
  options.top_min_count = config.eval_top_min_count;
  options.agent_patterns = config.agent_patterns;
  AccessReports reports = access_reports(requests, options);

  if (table == "daily") {
    for (const auto& [day, count] : reports.daily_counts)
      std::printf("%s\t%llu\n", day.c_str(), static_cast<unsigned long long>(count));
    return 0;
  }
  if (table == "tld") {
    for (const auto& [tld, years] : reports.tld_by_year)
      for (const auto& [year, count] : years)
        std::printf("%s\t%d\t%llu\n", tld.c_str(), year,
                    static_cast<unsigned long long>(count));
    return 0;
  }
  if (table == "top") {
    for (const auto& [uri, count] : reports.top_uris)
      std::printf("%s\t%llu\n", uri.c_str(), static_cast<unsigned long long>(count));
    return 0;
  }
  if (table == "timemap-status") {
    for (const auto& [status, count] : reports.timemap_status)
      std::printf("%d\t%llu\n", status, static_cast<unsigned long long>(count));
    return 0;
  }
  if (table == "sources") {
    for (const auto& [month, sources] : reports.source_monthly)
      for (const auto& [source, count] : sources)
        std::printf("%s\t%s\t%llu\n", month.c_str(), source.c_str(),
                    static_cast<unsigned long long>(count));
    return 0;
  }
  std::fprintf(stderr, "voidmap: unknown table %s\n", table.c_str());
  return 2;
}

int cmd_fixtures(const std::string& spec_path, const std::string& out_dir) {
  CorpusSpec spec;
  if (!spec_path.empty()) {
    auto loaded = load_corpus_spec(spec_path);
    if (!loaded.ok()) {
      std::fprintf(stderr, "voidmap: spec %s line %zu: %s\n", spec_path.c_str(),
                   loaded.error().line, loaded.error().reason.c_str());
      return 2;
    }
    spec = loaded.value();
  }
  auto corpus = build_corpus(spec);
  if (!corpus.ok()) {
    std::fprintf(stderr, "voidmap: %s\n", corpus.error().c_str());
    return 2;
  }
  auto written = write_corpus(corpus.value(), spec, out_dir);
  if (!written.ok()) {
    std::fprintf(stderr, "voidmap: %s: %s\n", written.error().path.c_str(),
                 written.error().reason.c_str());
    return 1;
  }
  std::fprintf(stderr,
               "voidmap: wrote %zu log files, %llu lines, %llu uris, "
               "%llu planted soft-404s, labels at %s\n",
               written.value().log_files.size(),
               static_cast<unsigned long long>(written.value().lines),
               static_cast<unsigned long long>(written.value().uris),
               static_cast<unsigned long long>(written.value().planted_soft404),
               written.value().labels_path.c_str());
  return 0;
}

int cmd_run(const std::string& logs_dir, const std::string& out_dir,
            const std::string& config_path) {
  PipelineConfig config = load_config_or_exit(config_path);
  auto result = run_pipeline(config, logs_dir, out_dir);
  if (!result.ok()) {
    std::fprintf(stderr, "voidmap: stage %s failed: %s\n",
                 result.error().stage.c_str(), result.error().detail.c_str());
    return 1;
  }
  std::printf("%s\n%s\n%s\n", result.value().profile_path.c_str(),
              result.value().fluctuations_path.c_str(),
              result.value().summary_path.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Archive access-log profiling: find the voids, route around them"};
  app.require_subcommand(1);
  int rc = 0;

  std::string config_path;
  app.add_option("--config", config_path, "pipeline config file (flat key = value)");

  auto* parse = app.add_subcommand("parse", "log files/dirs to normalized records");
  parse->fallthrough();
  std::vector<std::string> parse_inputs;
  int parse_jobs = 0;
  std::string parse_from, parse_to;
  parse->add_option("inputs", parse_inputs, "log files or directories")->required();
  parse->add_option("--jobs", parse_jobs, "parallel file parsers");
  parse->add_option("--from", parse_from, "inclusive start day YYYY-MM-DD");
  parse->add_option("--to", parse_to, "inclusive end day YYYY-MM-DD");
  parse->callback([&] {
    rc = cmd_parse(parse_inputs, config_path, parse_jobs, parse_from, parse_to);
  });

  auto* canon = app.add_subcommand("canon", "canonical form and lookup key per URI");
  canon->fallthrough();
  std::vector<std::string> canon_uris;
  canon->add_option("uris", canon_uris, "URIs (stdin when omitted)");
  canon->callback([&] { rc = cmd_canon(canon_uris); });

  auto* amend = app.add_subcommand(
      "amend", "rewrite soft-404 TimeMap records (200 -> 404) in a record stream");
  amend->fallthrough();
  std::string amend_records = "-", amend_samples, amend_valid, amend_report;
  int64_t amend_k = 0, amend_c = -1;
  amend->add_option("--records", amend_records, "record stream file, - for stdin");
  amend->add_option("--k", amend_k, "template slope (bytes per urir byte)");
  amend->add_option("--c", amend_c, "template constant overhead");
  amend->add_option("--samples", amend_samples,
                    "fit template from 'length bytes' sample lines");
  amend->add_option("--valid-until", amend_valid, "amend only before this day");
  amend->add_option("--report", amend_report, "write the JSON report here");
  amend->callback([&] {
    rc = cmd_amend(amend_records, config_path, amend_k, amend_c, amend_samples,
                   amend_valid, amend_report);
  });

  auto* profile = app.add_subcommand("profile", "build a voids profile");
  profile->fallthrough();
  std::string profile_logs, profile_records = "-", profile_out;
  int64_t profile_min = -1;
  int profile_hd = -1, profile_pd = -1;
  bool profile_exact = false;
  profile->add_option("--logs", profile_logs, "raw log directory (scans + amends)");
  profile->add_option("--records", profile_records,
                      "amended record stream, - for stdin");
  profile->add_option("--out", profile_out, "profile file (stdout when omitted)");
  profile->add_option("--min-count", profile_min, "404-count threshold");
  profile->add_option("--host-depth", profile_hd, "collapse hosts deeper than this");
  profile->add_option("--path-depth", profile_pd, "collapse paths deeper than this");
  profile->add_flag("--exact", profile_exact, "full keys, no wildcards (default)");
  profile->callback([&] {
    rc = cmd_profile(profile_logs, profile_records, profile_out, config_path,
                     profile_min, profile_hd, profile_pd, profile_exact);
  });

  auto* route = app.add_subcommand("route",
                                   "route lookup URIs (stdin) against profiles");
  route->fallthrough();
  std::string route_holdings, route_voids;
  bool route_prefer_voids = false, route_no_default = false;
  route->add_option("--holdings", route_holdings, "holdings profile file");
  route->add_option("--voids", route_voids, "voids profile file");
  route->add_flag("--prefer-voids", route_prefer_voids,
                  "ties go to voids instead of holdings");
  route->add_flag("--no-default-route", route_no_default,
                  "unmatched lookups become no-route");
  route->callback([&] {
    rc = cmd_route(route_holdings, route_voids, config_path, route_prefer_voids,
                   route_no_default);
  });

  auto* eval = app.add_subcommand("eval", "replay records against a voids profile");
  eval->fallthrough();
  std::string eval_voids, eval_replay = "-";
  std::vector<uint64_t> eval_sweep;
  eval->add_option("--voids", eval_voids, "voids profile file");
  eval->add_option("--replay", eval_replay, "amended record stream, - for stdin");
  eval->add_option("--sweep", eval_sweep, "rebuild profiles at these thresholds")
      ->delimiter(',');
  eval->callback([&] {
    rc = cmd_eval(eval_voids, eval_replay, config_path, eval_sweep);
  });

  auto* stats = app.add_subcommand("stats", "pivot tables from a record stream");
  stats->fallthrough();
  std::string stats_table, stats_records = "-", stats_urir, stats_agents;
  int64_t stats_top_min = -1;
  stats->add_option("table", stats_table,
                    "fluctuations|daily|tld|top|timemap-status|sources|agent")
      ->required();
  stats->add_option("--records", stats_records, "record stream file, - for stdin");
  stats->add_option("--urir", stats_urir, "resource for the agent pivot");
  stats->add_option("--top-min", stats_top_min, "min count for the top table");
  stats->add_option("--agents", stats_agents,
                    "Name:substring[,Name:substring...] attribution patterns");
  stats->callback([&] {
    rc = cmd_stats(stats_table, stats_records, config_path, stats_urir,
                   stats_top_min, stats_agents);
  });

  auto* fixtures = app.add_subcommand("fixtures", "synthetic corpus tools");
  auto* generate = fixtures->add_subcommand(
      "generate", "deterministic labeled corpus from a spec");
  generate->fallthrough();
  std::string fixtures_spec, fixtures_out;
  generate->add_option("--spec", fixtures_spec, "corpus spec (flat key = value)");
  generate->add_option("--out", fixtures_out, "output directory")->required();
  generate->callback([&] { rc = cmd_fixtures(fixtures_spec, fixtures_out); });
  fixtures->require_subcommand(1);

  auto* run = app.add_subcommand("run", "full pipeline: logs to profile + reports");
  run->fallthrough();
  std::string run_logs, run_out;
  run->add_option("--logs", run_logs, "log directory")->required();
  run->add_option("--out", run_out, "output directory")->required();
  run->callback([&] { rc = cmd_run(run_logs, run_out, config_path); });

  CLI11_PARSE(app, argc, argv);
  return rc;
}
