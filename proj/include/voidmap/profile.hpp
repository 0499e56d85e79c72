#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "voidmap/expected.hpp"
#include "voidmap/history.hpp"
#include "voidmap/surt.hpp"
#include "voidmap/uri.hpp"
#include "voidmap/util.hpp"

namespace voidmap {

// URI-Rs that only ever answered 404, with how often each was asked.
// counts_by_status[404] is the count that thresholds and buckets use;
// other failure statuses don't inflate it.
inline std::map<std::string, uint64_t> select_void_candidates(
    const std::map<std::string, StatusHistory>& histories, uint64_t min_count) {
  std::map<std::string, uint64_t> candidates;
  for (const auto& [urir, history] : histories) {
    if (!history.always_404()) continue;
    auto it = history.counts_by_status.find(404);
    uint64_t count = it == history.counts_by_status.end() ? 0 : it->second;
    if (count >= min_count) candidates.emplace(urir, count);
  }
  return candidates;
}

// Decimal orders of magnitude: 1s = [1,10), 10s = [10,100), ... 10000s is
// open-ended.
struct BucketHistogram {
  static constexpr std::array<const char*, 5> labels{"1s", "10s", "100s",
                                                     "1000s", "10000s"};
  std::array<uint64_t, 5> counts{};

  static size_t bucket_of(uint64_t count) {
    size_t bucket = 0;
    while (bucket < 4 && count >= 10) {
      count /= 10;
      ++bucket;
    }
    return bucket;
  }
};

inline BucketHistogram bucket_histogram(
    const std::map<std::string, uint64_t>& candidates) {
  BucketHistogram histogram;
  for (const auto& [urir, count] : candidates)
    ++histogram.counts[BucketHistogram::bucket_of(count)];
  return histogram;
}

// exact keeps full keys; otherwise hosts deeper than host_depth collapse to
// a host wildcard and paths deeper than path_depth to a path wildcard.
// Negative depths mean unlimited.
struct SummarizationPolicy {
  bool exact = true;
  int host_depth = -1;
  int path_depth = -1;

  std::string id() const {
    if (exact) return "exact";
    auto part = [](int depth) {
      return depth < 0 ? std::string("inf") : std::to_string(depth);
    };
    return "h" + part(host_depth) + "p" + part(path_depth);
  }
};

struct ProfileMeta {
  std::string type = "voids";
  std::string archive_id = "archive";
  uint64_t threshold = 0;
  std::string policy_id = "exact";
  std::string range_from;     // YYYY-MM-DD, empty if unknown
  std::string range_to;
  std::string generated;      // data-derived instant, empty if unset
  uint64_t dropped = 0;       // candidates whose URI would not canonicalize
  uint64_t suppressed = 0;    // keys shared with a resource that saw success
  std::vector<std::string> extra;  // unrecognized !lines, preserved verbatim

  bool operator==(const ProfileMeta&) const = default;
};

struct VoidsProfile {
  ProfileMeta meta;
  std::map<std::string, uint64_t> entries;

  uint64_t total_count() const {
    uint64_t total = 0;
    for (const auto& [key, count] : entries) total += count;
    return total;
  }
};

// Canonical keys of every resource that ever answered 2xx. Candidates whose
// key lands in this set are suppressed: distinct raw spellings can share a
// canonical key, and a void entry there would deny a resource the archive
// did serve.
inline std::set<std::string> success_key_set(
    const std::map<std::string, StatusHistory>& histories) {
  std::set<std::string> keys;
  for (const auto& [urir, history] : histories) {
    bool success = false;
    for (const auto& [status, count] : history.counts_by_status)
      if (status >= 200 && status < 300) success = true;
    if (!success) continue;
    auto canonical = canonicalize(urir);
    if (!canonical.ok()) continue;
    keys.insert(to_surt(canonical.value()).to_string());
  }
  return keys;
}

inline VoidsProfile summarize_keys(
    const std::map<std::string, uint64_t>& candidates,
    const SummarizationPolicy& policy,
    const std::set<std::string>& success_keys = {}) {
  VoidsProfile profile;
  profile.meta.policy_id = policy.id();
  for (const auto& [urir, count] : candidates) {
    auto canonical = canonicalize(urir);
    if (!canonical.ok()) {
      ++profile.meta.dropped;
      continue;
    }
    SurtKey key = to_surt(canonical.value());
    if (success_keys.count(key.to_string())) {
      ++profile.meta.suppressed;
      continue;
    }
    if (!policy.exact) {
      if (policy.host_depth >= 0 &&
          key.host.size() > static_cast<size_t>(policy.host_depth)) {
        size_t keep = std::max<size_t>(1, static_cast<size_t>(policy.host_depth));
        key.host.resize(keep);
        key.port = 0;
        key.path = "/";
        key.wildcard = false;
        key.host_wildcard = true;
      } else if (policy.path_depth >= 0) {
        auto segments = key.path_segments();
        if (segments.size() > static_cast<size_t>(policy.path_depth)) {
          std::string truncated = "/";
          for (size_t i = 0; i < static_cast<size_t>(policy.path_depth); ++i) {
            if (i) truncated += '/';
            truncated += segments[i];
          }
          key.path = truncated;
          key.wildcard = true;
        }
      }
    }
    profile.entries[key.to_string()] += count;
  }
  return profile;
}

// Text form: !-prefixed metadata header, then "key count" lines sorted by
// key. Writing is canonical — equal profiles serialize to identical bytes.
inline std::string write_profile(const VoidsProfile& profile) {
  std::string out;
  auto header = [&](std::string_view name, std::string_view value) {
    out += '!';
    out += name;
    out += ' ';
    out += value;
    out += '\n';
  };
  header("type", profile.meta.type);
  header("archive", profile.meta.archive_id);
  header("threshold", std::to_string(profile.meta.threshold));
  header("policy", profile.meta.policy_id);
  if (!profile.meta.range_from.empty() || !profile.meta.range_to.empty())
    header("range", profile.meta.range_from + " " + profile.meta.range_to);
  if (!profile.meta.generated.empty())
    header("generated", profile.meta.generated);
  if (profile.meta.dropped) header("dropped", std::to_string(profile.meta.dropped));
  if (profile.meta.suppressed)
    header("suppressed", std::to_string(profile.meta.suppressed));
  for (const auto& line : profile.meta.extra) {
    out += line;
    out += '\n';
  }
  for (const auto& [key, count] : profile.entries) {
    out += key;
    out += ' ';
    out += std::to_string(count);
    out += '\n';
  }
  return out;
}

struct ProfileReadError {
  size_t line = 0;  // 1-based; 0 when not tied to a line
  std::string reason;
};

inline Expected<VoidsProfile, ProfileReadError> read_profile(
    std::string_view text) {
  VoidsProfile profile;
  profile.meta.type.clear();
  profile.meta.archive_id.clear();
  profile.meta.policy_id.clear();
  size_t lineno = 0;
  size_t start = 0;
  while (start <= text.size()) {
    size_t end = text.find('\n', start);
    std::string_view line = end == std::string_view::npos
                                ? text.substr(start)
                                : text.substr(start, end - start);
    start = end == std::string_view::npos ? text.size() + 1 : end + 1;
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '!') {
      size_t space = line.find(' ');
      std::string_view name = line.substr(1, space == std::string_view::npos
                                                 ? std::string_view::npos
                                                 : space - 1);
      std::string_view value =
          space == std::string_view::npos ? "" : line.substr(space + 1);
      if (name == "type") {
        profile.meta.type = value;
      } else if (name == "archive") {
        profile.meta.archive_id = value;
      } else if (name == "threshold") {
        auto parsed = parse_u64(value);
        if (!parsed) return ProfileReadError{lineno, "bad threshold"};
        profile.meta.threshold = *parsed;
      } else if (name == "policy") {
        profile.meta.policy_id = value;
      } else if (name == "range") {
        size_t gap = value.find(' ');
        if (gap == std::string_view::npos)
          return ProfileReadError{lineno, "range needs two dates"};
        profile.meta.range_from = value.substr(0, gap);
        profile.meta.range_to = value.substr(gap + 1);
      } else if (name == "generated") {
        profile.meta.generated = value;
      } else if (name == "dropped") {
        auto parsed = parse_u64(value);
        if (!parsed) return ProfileReadError{lineno, "bad dropped count"};
        profile.meta.dropped = *parsed;
      } else if (name == "suppressed") {
        auto parsed = parse_u64(value);
        if (!parsed) return ProfileReadError{lineno, "bad suppressed count"};
        profile.meta.suppressed = *parsed;
      } else {
        profile.meta.extra.emplace_back(line);
      }
      continue;
    }
    size_t space = line.rfind(' ');
    if (space == std::string_view::npos || space == 0 ||
        space + 1 == line.size())
      return ProfileReadError{lineno, "expected 'key count'"};
    std::string_view key_text = line.substr(0, space);
    auto count = parse_u64(line.substr(space + 1));
    if (!count) return ProfileReadError{lineno, "bad count"};
    auto key = SurtKey::parse(key_text);
    if (!key.ok())
      return ProfileReadError{lineno, "bad key: " + key.error().reason};
    auto [it, inserted] =
        profile.entries.emplace(key.value().to_string(), *count);
    if (!inserted) return ProfileReadError{lineno, "duplicate key"};
  }
  if (profile.meta.type.empty()) profile.meta.type = "voids";
  if (profile.meta.archive_id.empty()) profile.meta.archive_id = "archive";
  if (profile.meta.policy_id.empty()) profile.meta.policy_id = "exact";
  return profile;
}

}  // namespace voidmap
