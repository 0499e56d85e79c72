#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "voidmap/expected.hpp"
#include "voidmap/log.hpp"
#include "voidmap/profile.hpp"
#include "voidmap/router.hpp"
#include "voidmap/soft404.hpp"
#include "voidmap/util.hpp"

namespace voidmap {

// Everything a pipeline run needs, loadable from a flat "key = value" file
// (# comments, blank lines ignored). Defaults below are the documented
// behavior; a config file only overrides what it names.
struct PipelineConfig {
  std::string archive_id = "archive";

  EndpointConfig endpoints;  // /wayback/ layout by default

  // Soft-404 template line; fit from samples_file when given, else (k, c).
  int64_t soft404_k = 3;
  int64_t soft404_c = 150;
  std::string soft404_samples_file;
  int64_t soft404_valid_until = parse_date("2019-11-18").value();

  bool exclude_upper_host = true;
  std::optional<int64_t> range_from;  // inclusive day bounds on entries
  std::optional<int64_t> range_to;

  bool history_canonical = false;

  uint64_t profile_min_count = 100;
  SummarizationPolicy profile_policy;  // exact by default

  RouterOptions routing;

  uint64_t eval_top_min_count = 10000;
  std::vector<std::pair<std::string, std::string>> agent_patterns;

  int jobs = 1;

  Soft404Model soft404_model() const {
    Soft404Model model;
    model.k = soft404_k;
    model.c = soft404_c;
    model.valid_until = soft404_valid_until;
    return model;
  }
};

struct ConfigError {
  size_t line = 0;
  std::string reason;
};

namespace detail {

inline std::string trim(std::string_view s) {
  size_t begin = 0, end = s.size();
  while (begin < end && (s[begin] == ' ' || s[begin] == '\t')) ++begin;
  while (end > begin && (s[end - 1] == ' ' || s[end - 1] == '\t' ||
                         s[end - 1] == '\r'))
    --end;
  return std::string(s.substr(begin, end - begin));
}

inline std::optional<bool> parse_bool(const std::string& value) {
  if (value == "true" || value == "yes" || value == "1") return true;
  if (value == "false" || value == "no" || value == "0") return false;
  return std::nullopt;
}

}  // namespace detail

inline Expected<PipelineConfig, ConfigError> parse_config(
    std::string_view text) {
  PipelineConfig config;
  bool endpoints_timemap_set = false;
  size_t lineno = 0;
  size_t start = 0;
  while (start <= text.size()) {
    size_t end = text.find('\n', start);
    std::string_view raw = end == std::string_view::npos
                               ? text.substr(start)
                               : text.substr(start, end - start);
    start = end == std::string_view::npos ? text.size() + 1 : end + 1;
    ++lineno;
    std::string line = detail::trim(raw);
    if (line.empty() || line[0] == '#') continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      return ConfigError{lineno, "expected key = value"};
    std::string key = detail::trim(std::string_view(line).substr(0, eq));
    std::string value = detail::trim(std::string_view(line).substr(eq + 1));
    if (key.empty()) return ConfigError{lineno, "empty key"};

    auto bad = [&](const std::string& what) {
      return ConfigError{lineno, "bad " + what + ": " + value};
    };
    auto as_bool = [&]() { return detail::parse_bool(value); };
    auto as_int = [&]() { return parse_i64(value); };

    if (key == "archive.id") {
      config.archive_id = value;
    } else if (key == "endpoints.timemap") {
      if (!endpoints_timemap_set) config.endpoints.timemap_prefixes.clear();
      endpoints_timemap_set = true;
      for (auto part : split(value, ','))
        if (!part.empty())
          config.endpoints.timemap_prefixes.emplace_back(part);
      if (config.endpoints.timemap_prefixes.empty())
        return bad("endpoints.timemap");
    } else if (key == "endpoints.replay") {
      config.endpoints.replay_prefix = value;
    } else if (key == "endpoints.timegate") {
      config.endpoints.timegate_prefix = value;
    } else if (key == "soft404.k") {
      auto v = as_int();
      if (!v || *v < 1) return bad("soft404.k");
      config.soft404_k = *v;
    } else if (key == "soft404.c") {
      auto v = as_int();
      if (!v || *v < 0) return bad("soft404.c");
      config.soft404_c = *v;
    } else if (key == "soft404.samples") {
      config.soft404_samples_file = value;
    } else if (key == "soft404.valid_until") {
      auto date = parse_date(value);
      if (!date) return bad("soft404.valid_until");
      config.soft404_valid_until = *date;
    } else if (key == "exclude.upper_host") {
      auto v = as_bool();
      if (!v) return bad("exclude.upper_host");
      config.exclude_upper_host = *v;
    } else if (key == "range.from") {
      auto date = parse_date(value);
      if (!date) return bad("range.from");
      config.range_from = *date;
    } else if (key == "range.to") {
      auto date = parse_date(value);
      if (!date) return bad("range.to");
      config.range_to = *date;
    } else if (key == "history.canonical") {
      auto v = as_bool();
      if (!v) return bad("history.canonical");
      config.history_canonical = *v;
    } else if (key == "profile.min_count") {
      auto v = parse_u64(value);
      if (!v) return bad("profile.min_count");
      config.profile_min_count = *v;
    } else if (key == "profile.exact") {
      auto v = as_bool();
      if (!v) return bad("profile.exact");
      config.profile_policy.exact = *v;
    } else if (key == "profile.host_depth") {
      auto v = as_int();
      if (!v) return bad("profile.host_depth");
      config.profile_policy.host_depth = static_cast<int>(*v);
      config.profile_policy.exact = false;
    } else if (key == "profile.path_depth") {
      auto v = as_int();
      if (!v) return bad("profile.path_depth");
      config.profile_policy.path_depth = static_cast<int>(*v);
      config.profile_policy.exact = false;
    } else if (key == "routing.prefer_voids") {
      auto v = as_bool();
      if (!v) return bad("routing.prefer_voids");
      config.routing.prefer_voids = *v;
    } else if (key == "routing.default_route") {
      auto v = as_bool();
      if (!v) return bad("routing.default_route");
      config.routing.default_route = *v;
    } else if (key == "eval.top_min_count") {
      auto v = parse_u64(value);
      if (!v) return bad("eval.top_min_count");
      config.eval_top_min_count = *v;
    } else if (key == "eval.agents") {
      // Name:substring pairs, comma separated.
      for (auto part : split(value, ',')) {
        if (part.empty()) continue;
        size_t colon = part.find(':');
        if (colon == std::string_view::npos || colon == 0)
          return bad("eval.agents");
        config.agent_patterns.emplace_back(std::string(part.substr(0, colon)),
                                           std::string(part.substr(colon + 1)));
      }
    } else if (key == "jobs") {
      auto v = as_int();
      if (!v || *v < 1) return bad("jobs");
      config.jobs = static_cast<int>(*v);
    } else {
      return ConfigError{lineno, "unknown key: " + key};
    }
  }
  return config;
}

inline Expected<PipelineConfig, ConfigError> load_config(
    const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return ConfigError{0, "cannot open " + path};
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

}  // namespace voidmap
