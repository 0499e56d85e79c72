#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "voidmap/expected.hpp"
#include "voidmap/profile.hpp"
#include "voidmap/surt.hpp"
#include "voidmap/uri.hpp"

namespace voidmap {

enum class Verdict { Route, NoRoute };
enum class MatchSource { Holdings, Voids, Default };

inline const char* verdict_name(Verdict v) {
  return v == Verdict::Route ? "route" : "no-route";
}

inline const char* source_name(MatchSource s) {
  switch (s) {
    case MatchSource::Holdings: return "holdings";
    case MatchSource::Voids: return "voids";
    default: return "default";
  }
}

struct RoutingDecision {
  Verdict verdict = Verdict::Route;
  MatchSource source = MatchSource::Default;
  std::string matched_key;  // empty when source is default
  int depth = 0;
};

struct IndexError {
  std::string key;
  std::string reason;
};

struct RouterOptions {
  bool prefer_voids = false;   // tie at equal specificity goes to voids
  bool default_route = true;   // verdict when neither profile matches
};

namespace detail {

// Wildcard keys live in a token trie: host labels, a ")" (+port) boundary,
// then path segments. Exact keys sit in a flat map — full-string equality
// is the whole test. Exact keys outrank wildcards at equal depth, so hits
// compare by specificity = 2*depth + exactness.
struct TrieNode {
  std::map<std::string, std::unique_ptr<TrieNode>, std::less<>> children;
  std::optional<std::pair<std::string, int>> host_wild;  // key, depth
  std::optional<std::pair<std::string, int>> path_wild;
};

struct Hit {
  bool found = false;
  int specificity = -1;
  int depth = 0;
  std::string_view key;

  void consider(std::string_view candidate, int depth_, bool exact) {
    int s = 2 * depth_ + (exact ? 1 : 0);
    if (!found || s > specificity) {
      found = true;
      specificity = s;
      depth = depth_;
      key = candidate;
    }
  }
};

inline std::string boundary_token(const SurtKey& key) {
  std::string token = ")";
  if (key.port) token += ":" + std::to_string(key.port);
  return token;
}

class SourceIndex {
 public:
  void insert(const SurtKey& key) {
    std::string serialized = key.to_string();
    int depth = key.depth();
    if (key.is_exact()) {
      exact_.emplace(std::move(serialized), depth);
      return;
    }
    TrieNode* node = &root_;
    for (const auto& label : key.host)
      node = child(node, label);
    if (key.host_wildcard) {
      node->host_wild = {std::move(serialized), depth};
      return;
    }
    node = child(node, boundary_token(key));
    for (const auto& segment : key.path_segments())
      node = child(node, std::string(segment));
    node->path_wild = {std::move(serialized), depth};
  }

  Hit lookup(const SurtKey& query, const std::string& serialized_query) const {
    Hit hit;
    if (auto it = exact_.find(serialized_query); it != exact_.end())
      hit.consider(it->first, it->second, true);
    const TrieNode* node = &root_;
    for (const auto& label : query.host) {
      auto it = node->children.find(label);
      if (it == node->children.end()) return hit;
      node = it->second.get();
      if (node->host_wild)
        hit.consider(node->host_wild->first, node->host_wild->second, false);
    }
    auto boundary = node->children.find(boundary_token(query));
    if (boundary == node->children.end()) return hit;
    node = boundary->second.get();
    if (node->path_wild)
      hit.consider(node->path_wild->first, node->path_wild->second, false);
    for (const auto& segment : query.path_segments()) {
      auto it = node->children.find(segment);
      if (it == node->children.end()) return hit;
      node = it->second.get();
      if (node->path_wild)
        hit.consider(node->path_wild->first, node->path_wild->second, false);
    }
    return hit;
  }

 private:
  static TrieNode* child(TrieNode* node, std::string_view token) {
    auto it = node->children.find(token);
    if (it == node->children.end())
      it = node->children.emplace(std::string(token),
                                  std::make_unique<TrieNode>()).first;
    return it->second.get();
  }

  std::unordered_map<std::string, int> exact_;
  TrieNode root_;
};

}  // namespace detail

// Immutable two-profile index. Lookups walk each source for its deepest
// matching key; the deeper of the two wins, holdings on a tie (voids with
// prefer_voids). No match falls through to the configured default verdict.
class ProfileIndex {
 public:
  static Expected<ProfileIndex, IndexError> build(
      const VoidsProfile& holdings, const VoidsProfile& voids,
      const RouterOptions& options = {}) {
    ProfileIndex index;
    index.options_ = options;
    for (const auto& [key_text, count] : holdings.entries) {
      auto key = SurtKey::parse(key_text);
      if (!key.ok()) return IndexError{key_text, key.error().reason};
      index.holdings_.insert(key.value());
    }
    for (const auto& [key_text, count] : voids.entries) {
      auto key = SurtKey::parse(key_text);
      if (!key.ok()) return IndexError{key_text, key.error().reason};
      index.voids_.insert(key.value());
    }
    return index;
  }

  RoutingDecision match_key(const SurtKey& query) const {
    std::string serialized = query.to_string();
    detail::Hit holding = holdings_.lookup(query, serialized);
    detail::Hit voiding = voids_.lookup(query, serialized);
    bool use_voids;
    if (holding.found && voiding.found) {
      use_voids = options_.prefer_voids
                      ? voiding.specificity >= holding.specificity
                      : voiding.specificity > holding.specificity;
    } else {
      use_voids = voiding.found;
    }
    if (use_voids)
      return {Verdict::NoRoute, MatchSource::Voids, std::string(voiding.key),
              voiding.depth};
    if (holding.found)
      return {Verdict::Route, MatchSource::Holdings, std::string(holding.key),
              holding.depth};
    return {options_.default_route ? Verdict::Route : Verdict::NoRoute,
            MatchSource::Default, "", 0};
  }

  // An unparseable lookup is never blocked.
  RoutingDecision match(std::string_view uri) const {
    auto canonical = canonicalize(uri);
    if (!canonical.ok()) return {Verdict::Route, MatchSource::Default, "", 0};
    return match_key(to_surt(canonical.value()));
  }

  const RouterOptions& options() const { return options_; }

 private:
  detail::SourceIndex holdings_;
  detail::SourceIndex voids_;
  RouterOptions options_;
};

template <typename UriRange>
inline std::vector<std::pair<std::string, RoutingDecision>> match_batch(
    const ProfileIndex& index, const UriRange& uris) {
  std::vector<std::pair<std::string, RoutingDecision>> decisions;
  for (const auto& uri : uris)
    decisions.emplace_back(uri, index.match(uri));
  return decisions;
}

}  // namespace voidmap
