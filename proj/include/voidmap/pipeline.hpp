#pragma once

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "voidmap/config.hpp"
#include "voidmap/evaluator.hpp"
#include "voidmap/fixtures.hpp"
#include "voidmap/history.hpp"
#include "voidmap/profile.hpp"
#include "voidmap/router.hpp"
#include "voidmap/soft404.hpp"
#include "voidmap/stream.hpp"

namespace voidmap {

struct PipelineError {
  std::string stage;
  std::string detail;
};

struct PipelineResult {
  std::string profile_path;
  std::string fluctuations_path;
  std::string summary_path;
  nlohmann::json summary;
};

namespace detail {

class StageClock {
 public:
  explicit StageClock(bool verbose) : verbose_(verbose) {}

  void done(const char* stage) {
    auto now = std::chrono::steady_clock::now();
    if (verbose_) {
      auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now - last_);
      std::fprintf(stderr, "[pipeline] %s: %lld ms\n", stage,
                   static_cast<long long>(ms.count()));
    }
    last_ = now;
  }

 private:
  bool verbose_;
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

inline bool write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return false;
  out << content;
  return static_cast<bool>(out);
}

}  // namespace detail

// Full run: scan logs, classify, amend soft-404s, build histories, emit the
// voids profile plus fluctuation table and a JSON run summary. Outputs are
// a pure function of (logs, config): no wall clock reaches any file, and
// parallel scanning delivers in deterministic order. On failure, files
// already written are removed.
inline Expected<PipelineResult, PipelineError> run_pipeline(
    const PipelineConfig& config, const std::string& log_dir,
    const std::string& out_dir, bool verbose = true) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec)
    return PipelineError{"setup", out_dir + ": " + ec.message()};

  std::vector<std::string> written;
  auto fail = [&](const char* stage, std::string detail) {
    for (const auto& path : written) fs::remove(path, ec);
    return PipelineError{stage, std::move(detail)};
  };

  detail::StageClock clock(verbose);

  Soft404Model model;
  if (!config.soft404_samples_file.empty()) {
    std::vector<std::pair<int64_t, int64_t>> samples;
    bool read_ok = for_each_line(config.soft404_samples_file,
                                 [&](std::string_view line) {
      if (line.empty() || line[0] == '#') return;
      size_t tab = line.find_first_of("\t ");
      if (tab == std::string_view::npos) return;
      auto len = parse_i64(line.substr(0, tab));
      auto bytes = parse_i64(line.substr(tab + 1));
      if (len && bytes) samples.emplace_back(*len, *bytes);
    });
    if (!read_ok)
      return fail("soft404-fit", "cannot read " + config.soft404_samples_file);
    auto fitted = fit_model(samples);
    if (!fitted.ok()) return fail("soft404-fit", fitted.error().reason);
    model = fitted.value();
    model.valid_until = config.soft404_valid_until;
  } else {
    model = config.soft404_model();
  }

  // Scan + classify.
  std::vector<MementoRequest> requests;
  uint64_t excluded_upper = 0, excluded_range = 0;
  uint64_t kind_counts[4] = {0, 0, 0, 0};
  int64_t min_ts = 0, max_ts = 0;
  bool any_entry = false;
  ScanOptions scan_options;
  scan_options.jobs = config.jobs;
  scan_options.range.from = config.range_from;
  scan_options.range.to = config.range_to;
  auto scanned = scan_directory(log_dir, scan_options, [&](LogEntry&& entry) {
    if (config.range_from && entry.timestamp < *config.range_from) {
      ++excluded_range;
      return;
    }
    if (config.range_to && entry.timestamp >= *config.range_to + 86400) {
      ++excluded_range;
      return;
    }
    if (!any_entry) {
      min_ts = max_ts = entry.timestamp;
      any_entry = true;
    } else {
      min_ts = std::min(min_ts, entry.timestamp);
      max_ts = std::max(max_ts, entry.timestamp);
    }
    MementoRequest request = classify_request(std::move(entry), config.endpoints);
    ++kind_counts[static_cast<int>(request.kind)];
    if (request.kind != RequestKind::NonMemento && config.exclude_upper_host &&
        has_upper_host(request.urir)) {
      ++excluded_upper;
      return;
    }
    requests.push_back(std::move(request));
  });
  if (!scanned.ok())
    return fail("scan", scanned.error().path + ": " + scanned.error().reason);
  clock.done("scan");

  // Amend, drop redirects, build histories.
  AmendReport amend_report = amend_stream(requests, model);
  clock.done("amend");

  filter_redirects(requests);
  HistoryBuilder builder(config.history_canonical);
  for (const auto& request : requests) builder.add(request);
  auto histories = builder.finish();
  auto fluctuations = fluctuation_report(histories);
  clock.done("histories");

  // Profile.
  auto candidates = select_void_candidates(histories, config.profile_min_count);
  auto success_keys = success_key_set(histories);
  VoidsProfile profile =
      summarize_keys(candidates, config.profile_policy, success_keys);
  profile.meta.archive_id = config.archive_id;
  profile.meta.threshold = config.profile_min_count;
  if (any_entry) {
    profile.meta.range_from = format_date(min_ts);
    profile.meta.range_to = format_date(max_ts);
    // Data-derived "as of" instant; never the wall clock, so reruns match.
    profile.meta.generated = format_iso8601(max_ts);
  }
  clock.done("profile");

  // Replay the same (amended) traffic against the profile.
  std::vector<ReplayRecord> replay;
  for (const auto& request : requests) {
    if (request.kind == RequestKind::NonMemento || request.urir.empty()) continue;
    replay.push_back({request.urir, request.entry.status});
  }
  auto index = ProfileIndex::build(VoidsProfile{}, profile, config.routing);
  if (!index.ok())
    return fail("index", index.error().key + ": " + index.error().reason);
  EvalReport eval = evaluate(index.value(), replay, config.profile_min_count,
                             profile.entries.size());
  clock.done("evaluate");

  // Outputs.
  PipelineResult result;
  result.profile_path = out_dir + "/voids.profile";
  if (!detail::write_file(result.profile_path, write_profile(profile)))
    return fail("write", "cannot write " + result.profile_path);
  written.push_back(result.profile_path);

  std::string fluct_text;
  {
    std::vector<std::pair<std::string, uint64_t>> rows(fluctuations.begin(),
                                                       fluctuations.end());
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
      if (a.second != b.second) return a.second > b.second;
      return a.first < b.first;
    });
    for (const auto& [pattern, count] : rows)
      fluct_text += pattern + "\t" + std::to_string(count) + "\n";
  }
  result.fluctuations_path = out_dir + "/fluctuations.tsv";
  if (!detail::write_file(result.fluctuations_path, fluct_text))
    return fail("write", "cannot write " + result.fluctuations_path);
  written.push_back(result.fluctuations_path);

  nlohmann::json summary;
  summary["scan"] = {{"files", scanned.value().files.size()},
                     {"entries", scanned.value().entries},
                     {"parse_errors", scanned.value().parse_errors},
                     {"unreadable_files", scanned.value().unreadable_files},
                     {"excluded_by_range", excluded_range}};
  summary["classified"] = {
      {"non_memento", kind_counts[static_cast<int>(RequestKind::NonMemento)]},
      {"uri_m", kind_counts[static_cast<int>(RequestKind::UriM)]},
      {"uri_g", kind_counts[static_cast<int>(RequestKind::UriG)]},
      {"uri_t", kind_counts[static_cast<int>(RequestKind::UriT)]},
      {"excluded_upper_host", excluded_upper}};
  summary["amend"] = {{"amended", amend_report.amended},
                      {"unchanged", amend_report.unchanged},
                      {"fit", {{"k", model.k}, {"c", model.c}}}};
  summary["histories"] = {{"uris", histories.size()},
                          {"patterns", fluctuations.size()}};
  summary["profile"] = {{"threshold", profile.meta.threshold},
                        {"policy", profile.meta.policy_id},
                        {"keys", profile.entries.size()},
                        {"total_count", profile.total_count()},
                        {"dropped", profile.meta.dropped},
                        {"suppressed", profile.meta.suppressed}};
  summary["eval"] = {{"total_requests", eval.total_requests},
                     {"avoided", eval.avoided},
                     {"false_negatives", eval.false_negatives},
                     {"true_negatives", eval.true_negatives},
                     {"savings_pct", eval.savings_pct},
                     {"fn_pct", eval.fn_pct}};
  result.summary = summary;
  result.summary_path = out_dir + "/summary.json";
  if (!detail::write_file(result.summary_path, summary.dump(2) + "\n"))
    return fail("write", "cannot write " + result.summary_path);
  written.push_back(result.summary_path);
  clock.done("write");

  return result;
}

}  // namespace voidmap
