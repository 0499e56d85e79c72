#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "voidmap/log.hpp"
#include "voidmap/uri.hpp"

namespace voidmap {

// Chronological record of how one resource answered over time. `collapsed`
// is the run-length-collapsed sequence of its 200/404 responses: adjacent
// repeats merged, other statuses counted in the totals but not part of the
// sequence.
struct StatusHistory {
  std::string urir;
  int64_t first_seen = 0;
  int64_t last_seen = 0;
  uint64_t total_requests = 0;
  std::map<int, uint64_t> counts_by_status;
  std::vector<int> collapsed;

  // "404,200"-style pattern; sequences of five or more codes are grouped
  // under their 5-code prefix plus "++".
  std::string pattern() const {
    std::string out;
    size_t shown = std::min<size_t>(collapsed.size(), 5);
    for (size_t i = 0; i < shown; ++i) {
      if (i) out += ',';
      out += std::to_string(collapsed[i]);
    }
    if (collapsed.size() >= 5) out += "++";
    return out;
  }

  bool always_404() const {
    return collapsed.size() == 1 && collapsed[0] == 404;
  }
};

inline void filter_redirects(std::vector<MementoRequest>& requests) {
  std::erase_if(requests, [](const MementoRequest& r) {
    return r.entry.status >= 300 && r.entry.status < 400;
  });
}

// Accumulates histories keyed by raw urir (each spelling its own resource)
// or, optionally, by canonical form. Insertion order does not matter: each
// key's observations are sorted by (time, status) before collapsing, so any
// permutation of the input yields identical histories.
class HistoryBuilder {
 public:
  explicit HistoryBuilder(bool canonical_key = false)
      : canonical_key_(canonical_key) {}

  void add(const MementoRequest& request) {
    if (request.kind == RequestKind::NonMemento || request.urir.empty()) return;
    observations_[key_for(request.urir)].push_back(
        {request.entry.timestamp, request.entry.status});
  }

  std::map<std::string, StatusHistory> finish() const {
    std::map<std::string, StatusHistory> histories;
    for (const auto& [urir, raw] : observations_) {
      auto sorted = raw;
      std::sort(sorted.begin(), sorted.end());
      StatusHistory h;
      h.urir = urir;
      h.first_seen = sorted.front().first;
      h.last_seen = sorted.back().first;
      h.total_requests = sorted.size();
      for (const auto& [ts, status] : sorted) {
        ++h.counts_by_status[status];
        if (status != 200 && status != 404) continue;
        if (h.collapsed.empty() || h.collapsed.back() != status)
          h.collapsed.push_back(status);
      }
      histories.emplace(urir, std::move(h));
    }
    return histories;
  }

 private:
  std::string key_for(const std::string& urir) const {
    if (!canonical_key_) return urir;
    auto canonical = canonicalize(urir);
    return canonical.ok() ? canonical.value().to_string() : urir;
  }

  bool canonical_key_;
  std::map<std::string, std::vector<std::pair<int64_t, int>>> observations_;
};

// Pattern table: how many URIs followed each collapsed sequence. URIs that
// never answered 200 or 404 have no pattern and are left out.
inline std::map<std::string, uint64_t> fluctuation_report(
    const std::map<std::string, StatusHistory>& histories) {
  std::map<std::string, uint64_t> report;
  for (const auto& [urir, history] : histories) {
    if (history.collapsed.empty()) continue;
    ++report[history.pattern()];
  }
  return report;
}

// Per-client breakdown for one resource: status counts grouped by
// user-agent. Useful for spotting a single client (e.g. an uptime monitor)
// behind an anomalous fluctuation count.
inline std::map<std::string, std::map<int, uint64_t>> agent_pivot(
    const std::vector<MementoRequest>& requests, const std::string& urir) {
  std::map<std::string, std::map<int, uint64_t>> pivot;
  for (const auto& request : requests) {
    if (request.urir != urir) continue;
    ++pivot[request.entry.user_agent][request.entry.status];
  }
  return pivot;
}

}  // namespace voidmap
