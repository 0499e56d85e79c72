#pragma once

#include <cassert>
#include <string>
#include <string_view>
#include <vector>

#include "voidmap/expected.hpp"
#include "voidmap/uri.hpp"
#include "voidmap/util.hpp"

namespace voidmap {

// Sort-friendly URI key: reversed comma-joined host labels, ')' separator,
// then the lowercased path+query. Three shapes exist:
//
//   com,example)/a/1?b=2   exact key
//   com,example)/a/*       subtree wildcard (matches /a and everything below)
//   com,*                  host wildcard (matches example.com, sub.example.com, ...)
//
// '*' is only legal as the final segment. Keys are entirely lowercase and
// parse(to_string(k)) == k.
struct SurtKey {
  std::vector<std::string> host;  // reversed labels: {"com", "example"}
  int port = 0;                   // 0 = elided
  std::string path;               // "/..." incl. query for exact keys; prefix for wildcards
  bool wildcard = false;          // subtree wildcard
  bool host_wildcard = false;     // "labels,*" form; path unused

  bool is_exact() const { return !wildcard && !host_wildcard; }

  std::vector<std::string_view> path_segments() const {
    std::string_view p = path;
    size_t q = p.find('?');
    if (q != std::string_view::npos) p = p.substr(0, q);
    return split_nonempty(p, '/');
  }

  int depth() const {
    if (host_wildcard) return static_cast<int>(host.size());
    return static_cast<int>(host.size() + path_segments().size());
  }

  // Ranks keys for most-specific-match: deeper wins, and an exact key
  // outranks a wildcard ending at the same depth.
  int specificity() const { return 2 * depth() + (is_exact() ? 1 : 0); }

  std::string to_string() const {
    std::string out;
    for (size_t i = 0; i < host.size(); ++i) {
      if (i) out += ',';
      out += host[i];
    }
    if (host_wildcard) {
      out += ",*";
      return out;
    }
    if (port != 0) {
      out += ':';
      out += std::to_string(port);
    }
    out += ')';
    out += path;
    if (wildcard) out += path == "/" ? "*" : "/*";
    return out;
  }

  // True iff this key covers `lookup`, which must be an exact full key.
  bool matches(const SurtKey& lookup) const {
    if (host_wildcard) {
      if (lookup.host.size() < host.size()) return false;
      for (size_t i = 0; i < host.size(); ++i)
        if (lookup.host[i] != host[i]) return false;
      return true;
    }
    if (host != lookup.host || port != lookup.port) return false;
    if (!wildcard) return path == lookup.path;
    auto mine = path_segments();
    auto theirs = lookup.path_segments();
    if (theirs.size() < mine.size()) return false;
    for (size_t i = 0; i < mine.size(); ++i)
      if (theirs[i] != mine[i]) return false;
    return true;
  }

  static Expected<SurtKey, UriError> parse(std::string_view text);

  friend bool operator==(const SurtKey&, const SurtKey&) = default;
};

namespace detail {

// Percent-encodes bytes that would break the one-record-per-line profile
// format. Applied when keys are built, so stored and serialized forms agree.
inline std::string encode_key_bytes(std::string_view s) {
  static const char* hex = "0123456789ABCDEF";
  std::string out;
  out.reserve(s.size());
  for (unsigned char c : s) {
    if (c <= 0x20 || c == 0x7f) {
      out += '%';
      out += hex[c >> 4];
      out += hex[c & 0xf];
    } else {
      out += static_cast<char>(c);
    }
  }
  return out;
}

inline bool numeric_label(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!is_ascii_digit(c)) return false;
  return true;
}

}  // namespace detail

inline SurtKey to_surt(const CanonicalUri& uri) {
  SurtKey key;
  auto labels = split_nonempty(uri.host, '.');
  bool ip_like = uri.host.front() == '[';
  if (!ip_like && labels.size() == 4) {
    ip_like = true;
    for (auto l : labels)
      if (!detail::numeric_label(l)) ip_like = false;
  }
  if (ip_like || labels.empty()) {
    key.host.push_back(uri.host);
  } else {
    for (auto it = labels.rbegin(); it != labels.rend(); ++it)
      key.host.emplace_back(*it);
  }
  key.port = uri.port;
  key.path = detail::encode_key_bytes(to_lower(uri.path));
  if (!uri.query.empty()) {
    key.path += '?';
    key.path += detail::encode_key_bytes(to_lower(uri.query));
  }
  return key;
}

inline Expected<SurtKey, UriError> SurtKey::parse(std::string_view text) {
  std::string lowered = to_lower(text);
  std::string_view s = lowered;
  for (unsigned char c : s)
    if (c <= 0x20 || c == 0x7f) return UriError{"whitespace in key"};

  SurtKey key;
  if (s.ends_with(",*")) {
    key.host_wildcard = true;
    s = s.substr(0, s.size() - 2);
    if (s.find(')') != std::string_view::npos || s.find('/') != std::string_view::npos)
      return UriError{"malformed host wildcard"};
  } else {
    size_t paren = s.find(')');
    if (paren == std::string_view::npos) return UriError{"missing ')'"};
    std::string_view path_part = s.substr(paren + 1);
    s = s.substr(0, paren);
    if (path_part.empty() || path_part.front() != '/')
      return UriError{"path must start with '/'"};
    if (path_part == "/*") {
      key.wildcard = true;
      key.path = "/";
    } else if (path_part.ends_with("/*")) {
      key.wildcard = true;
      key.path = std::string(path_part.substr(0, path_part.size() - 2));
    } else {
      key.path = std::string(path_part);
    }
    if (key.path.find('*') != std::string::npos)
      return UriError{"'*' only allowed as the final segment"};
    if (key.wildcard && key.path.find('?') != std::string::npos)
      return UriError{"wildcard key cannot carry a query"};
    // Optional port on the last host label.
    size_t close = s.rfind(']');
    size_t colon = s.rfind(':');
    if (colon != std::string_view::npos &&
        (close == std::string_view::npos || colon > close)) {
      auto port = parse_i64(s.substr(colon + 1));
      if (!port || *port < 1 || *port > 65535) return UriError{"invalid port"};
      key.port = static_cast<int>(*port);
      s = s.substr(0, colon);
    }
  }
  for (auto label : split(s, ',')) {
    if (label.empty()) return UriError{"empty host label"};
    if (label.find('*') != std::string_view::npos)
      return UriError{"'*' only allowed as the final segment"};
    key.host.emplace_back(label);
  }
  if (key.host.empty()) return UriError{"empty host"};
  return key;
}

// All ancestor keys of a non-wildcard key, most specific first: the key
// itself, then subtree wildcards with path segments stripped right-to-left,
// then host wildcards with labels stripped right-to-left.
inline std::vector<SurtKey> key_prefixes(const SurtKey& key) {
  assert(key.is_exact());
  std::vector<SurtKey> out;
  out.push_back(key);

  auto segs = key.path_segments();
  int top = segs.empty() ? 0 : static_cast<int>(segs.size()) - 1;
  for (int level = top; level >= 0; --level) {
    SurtKey w;
    w.host = key.host;
    w.port = key.port;
    w.wildcard = true;
    w.path = "/";
    for (int i = 0; i < level; ++i) {
      if (i) w.path += '/';
      w.path += segs[i];
    }
    out.push_back(std::move(w));
  }

  for (size_t labels = key.host.size() - 1; labels >= 1; --labels) {
    SurtKey w;
    w.host.assign(key.host.begin(), key.host.begin() + labels);
    w.host_wildcard = true;
    out.push_back(std::move(w));
  }
  return out;
}

}  // namespace voidmap
