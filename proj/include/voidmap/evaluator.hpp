#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "voidmap/history.hpp"
#include "voidmap/log.hpp"
#include "voidmap/profile.hpp"
#include "voidmap/router.hpp"
#include "voidmap/util.hpp"

namespace voidmap {

// One replayed aggregator request: the resource asked for and the status
// the archive actually gave (after soft-404 amendment).
struct ReplayRecord {
  std::string urir;
  int status = 0;
};

struct EvalReport {
  uint64_t threshold = 0;
  uint64_t profile_size = 0;
  uint64_t total_requests = 0;
  uint64_t avoided = 0;           // no-route decisions
  uint64_t false_negatives = 0;   // avoided but the archive had it
  uint64_t true_negatives = 0;
  double savings_pct = 0.0;
  double fn_pct = 0.0;
};

inline EvalReport evaluate(const ProfileIndex& index,
                           const std::vector<ReplayRecord>& replay,
                           uint64_t threshold = 0, uint64_t profile_size = 0) {
  EvalReport report;
  report.threshold = threshold;
  report.profile_size = profile_size;
  report.total_requests = replay.size();
  for (const auto& record : replay) {
    RoutingDecision decision = index.match(record.urir);
    if (decision.verdict != Verdict::NoRoute) continue;
    ++report.avoided;
    if (record.status >= 200 && record.status < 300)
      ++report.false_negatives;
    else
      ++report.true_negatives;
  }
  if (report.total_requests) {
    report.savings_pct =
        100.0 * static_cast<double>(report.avoided) / report.total_requests;
    report.fn_pct = 100.0 * static_cast<double>(report.false_negatives) /
                    report.total_requests;
  }
  return report;
}

// Rebuilds a conservative exact-key voids profile at each threshold and
// replays the same traffic against it. Thresholds must be strictly
// increasing; savings can only shrink as the profile does.
inline std::vector<EvalReport> threshold_sweep(
    const std::map<std::string, StatusHistory>& histories,
    const std::vector<ReplayRecord>& replay,
    const std::vector<uint64_t>& thresholds) {
  std::vector<EvalReport> reports;
  auto success_keys = success_key_set(histories);
  for (uint64_t threshold : thresholds) {
    auto candidates = select_void_candidates(histories, threshold);
    VoidsProfile voids =
        summarize_keys(candidates, SummarizationPolicy{}, success_keys);
    voids.meta.threshold = threshold;
    auto index = ProfileIndex::build(VoidsProfile{}, voids);
    reports.push_back(
        evaluate(index.value(), replay, threshold, voids.entries.size()));
  }
  return reports;
}

struct AccessReportOptions {
  uint64_t top_min_count = 10000;
  // Attribution patterns tried in order; first substring hit wins, the rest
  // fall into "OTHERS".
  std::vector<std::pair<std::string, std::string>> agent_patterns;
};

struct AccessReports {
  std::map<std::string, uint64_t> daily_counts;                    // day → hits
  std::map<std::string, std::map<int, uint64_t>> tld_by_year;      // tld → year → hits
  std::vector<std::pair<std::string, uint64_t>> top_uris;          // by count desc
  std::map<int, uint64_t> timemap_status;                          // status → hits
  std::map<std::string, std::map<std::string, uint64_t>> source_monthly;  // month → source → hits
};

namespace detail {

inline std::string urir_tld(const std::string& urir) {
  auto canonical = canonicalize(urir);
  if (!canonical.ok()) return "";
  const std::string& host = canonical.value().host;
  size_t dot = host.rfind('.');
  std::string tld = dot == std::string::npos ? host : host.substr(dot + 1);
  // IP addresses and bracketed literals have no TLD to speak of.
  if (tld.empty() || is_ascii_digit(tld[0]) || tld.back() == ']') return "";
  return tld;
}

}  // namespace detail

inline AccessReports access_reports(const std::vector<MementoRequest>& requests,
                                    const AccessReportOptions& options = {}) {
  AccessReports reports;
  std::map<std::string, uint64_t> uri_counts;
  std::map<std::string, std::map<int, uint64_t>> tld_all;
  std::map<int, uint64_t> year_totals;

  for (const auto& request : requests) {
    const LogEntry& entry = request.entry;
    ++reports.daily_counts[format_date(entry.timestamp)];
    if (request.kind == RequestKind::UriT) {
      ++reports.timemap_status[entry.status];
      std::string source = "OTHERS";
      for (const auto& [name, pattern] : options.agent_patterns) {
        if (entry.user_agent.find(pattern) != std::string::npos) {
          source = name;
          break;
        }
      }
      ++reports.source_monthly[format_month(entry.timestamp)][source];
    }
    if (request.urir.empty()) continue;
    ++uri_counts[request.urir];
    int year = utc_year(entry.timestamp);
    ++year_totals[year];
    std::string tld = detail::urir_tld(request.urir);
    if (!tld.empty()) ++tld_all[tld][year];
  }

  // A TLD missing in any observed year is dropped: partial rows make the
  // yearly trend incomparable.
  for (const auto& [tld, per_year] : tld_all) {
    bool complete = true;
    for (const auto& [year, total] : year_totals)
      if (!per_year.count(year)) complete = false;
    if (complete) reports.tld_by_year.emplace(tld, per_year);
  }

  for (const auto& [urir, count] : uri_counts)
    if (count >= options.top_min_count) reports.top_uris.emplace_back(urir, count);
  std::sort(reports.top_uris.begin(), reports.top_uris.end(),
            [](const auto& a, const auto& b) {
              if (a.second != b.second) return a.second > b.second;
              return a.first < b.first;
            });
  return reports;
}

}  // namespace voidmap
