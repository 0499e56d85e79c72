#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "voidmap/expected.hpp"
#include "voidmap/util.hpp"

namespace voidmap {

struct UriError {
  std::string reason;
};

// A normalized absolute URI. Host case, default ports, dot-segments,
// fragments, and percent-encoded unreserved characters are all resolved,
// so any two spellings of the same resource compare equal.
struct CanonicalUri {
  std::string scheme;  // lowercase, "http" when the input had none
  std::string host;    // lowercase, trailing dot stripped
  int port = 0;        // 0 when elided (default for the scheme)
  std::string path;    // starts with '/', case preserved
  std::string query;   // without '?', empty means none

  std::string to_string() const {
    std::string out = scheme;
    out += "://";
    out += host;
    if (port != 0) {
      out += ':';
      out += std::to_string(port);
    }
    out += path;
    if (!query.empty()) {
      out += '?';
      out += query;
    }
    return out;
  }

  friend bool operator==(const CanonicalUri&, const CanonicalUri&) = default;
};

namespace detail {

inline bool is_unreserved(char c) {
  return is_ascii_alpha(c) || is_ascii_digit(c) || c == '-' || c == '.' ||
         c == '_' || c == '~';
}

inline int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

// Decodes %XX sequences whose decoded byte is unreserved; everything else is
// kept verbatim, including malformed sequences.
inline std::string decode_unreserved(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '%' && i + 2 < s.size()) {
      int hi = hex_value(s[i + 1]);
      int lo = hex_value(s[i + 2]);
      if (hi >= 0 && lo >= 0) {
        char decoded = static_cast<char>(hi * 16 + lo);
        if (is_unreserved(decoded)) {
          out.push_back(decoded);
          i += 2;
          continue;
        }
      }
    }
    out.push_back(s[i]);
  }
  return out;
}

// RFC 3986 remove_dot_segments over a path that starts with '/'.
inline std::string resolve_dot_segments(std::string_view path) {
  std::vector<std::string_view> kept;
  bool trailing_slash = false;
  size_t start = 0;
  while (start <= path.size()) {
    size_t end = path.find('/', start);
    if (end == std::string_view::npos) end = path.size();
    std::string_view seg = path.substr(start, end - start);
    if (seg == ".") {
      trailing_slash = true;
    } else if (seg == "..") {
      if (!kept.empty()) kept.pop_back();
      trailing_slash = true;
    } else if (!seg.empty()) {
      kept.push_back(seg);
      trailing_slash = false;
    } else {
      trailing_slash = true;
    }
    if (end == path.size()) break;
    start = end + 1;
  }
  std::string out;
  for (auto seg : kept) {
    out += '/';
    out.append(seg);
  }
  if (out.empty() || (trailing_slash && out.back() != '/')) out += '/';
  return out;
}

inline bool valid_host_char(char c) {
  return is_ascii_alpha(c) || is_ascii_digit(c) || c == '-' || c == '.' || c == '_';
}

// Splits "host[:port]" out of an authority, handling bracketed IP literals.
// Returns false when no syntactically acceptable host is present.
inline bool split_host_port(std::string_view authority, std::string_view& host,
                            std::string_view& port) {
  if (authority.empty()) return false;
  if (authority.front() == '[') {
    size_t close = authority.find(']');
    if (close == std::string_view::npos) return false;
    host = authority.substr(0, close + 1);
    std::string_view rest = authority.substr(close + 1);
    if (rest.empty()) {
      port = {};
      return true;
    }
    if (rest.front() != ':') return false;
    port = rest.substr(1);
    return true;
  }
  size_t colon = authority.rfind(':');
  if (colon == std::string_view::npos) {
    host = authority;
    port = {};
  } else {
    host = authority.substr(0, colon);
    port = authority.substr(colon + 1);
  }
  if (host.empty()) return false;
  for (char c : host)
    if (!valid_host_char(c)) return false;
  return true;
}

// Carves scheme / authority / rest out of a raw URI reference. The scheme is
// optional ("//host/x" and "host/x" both resolve against http).
struct RawParts {
  std::string_view scheme;     // may be empty
  std::string_view authority;  // userinfo stripped
  std::string_view rest;       // path + query, fragment stripped
};

inline std::optional<RawParts> carve(std::string_view uri) {
  size_t frag = uri.find('#');
  if (frag != std::string_view::npos) uri = uri.substr(0, frag);

  RawParts parts;
  size_t pos = 0;
  if (!uri.empty() && is_ascii_alpha(uri[0])) {
    size_t i = 1;
    while (i < uri.size() && (is_ascii_alpha(uri[i]) || is_ascii_digit(uri[i]) ||
                              uri[i] == '+' || uri[i] == '-' || uri[i] == '.'))
      ++i;
    if (i < uri.size() && uri[i] == ':') {
      parts.scheme = uri.substr(0, i);
      pos = i + 1;
    }
  }
  if (uri.substr(pos).starts_with("//")) pos += 2;

  size_t auth_end = uri.find_first_of("/?", pos);
  if (auth_end == std::string_view::npos) auth_end = uri.size();
  std::string_view authority = uri.substr(pos, auth_end - pos);
  size_t at = authority.rfind('@');
  if (at != std::string_view::npos) authority = authority.substr(at + 1);
  if (authority.empty()) return std::nullopt;

  parts.authority = authority;
  parts.rest = uri.substr(auth_end);
  return parts;
}

}  // namespace detail

// Canonicalizes an absolute or scheme-relative URI. UriError when no
// parseable host is present.
inline Expected<CanonicalUri, UriError> canonicalize(std::string_view uri) {
  auto parts = detail::carve(uri);
  if (!parts) return UriError{"no host"};

  std::string_view host_raw, port_raw;
  if (!detail::split_host_port(parts->authority, host_raw, port_raw))
    return UriError{"invalid host"};

  CanonicalUri out;
  out.scheme = parts->scheme.empty() ? "http" : to_lower(parts->scheme);
  out.host = to_lower(host_raw);
  while (out.host.size() > 1 && out.host.back() == '.') out.host.pop_back();
  if (out.host == ".") return UriError{"invalid host"};

  if (!port_raw.empty()) {
    auto port = parse_i64(port_raw);
    if (!port || *port < 0 || *port > 65535) return UriError{"invalid port"};
    out.port = static_cast<int>(*port);
    if ((out.scheme == "http" && out.port == 80) ||
        (out.scheme == "https" && out.port == 443))
      out.port = 0;
  }

  std::string_view rest = parts->rest;
  std::string_view path_raw = rest;
  std::string_view query_raw;
  size_t qpos = rest.find('?');
  if (qpos != std::string_view::npos) {
    path_raw = rest.substr(0, qpos);
    query_raw = rest.substr(qpos + 1);
  }

  std::string path = detail::decode_unreserved(path_raw);
  out.path = detail::resolve_dot_segments(path);
  out.query = detail::decode_unreserved(query_raw);
  return out;
}

// True iff the hostname portion of the raw URI contains A-Z. Inputs without a
// recognizable hostname yield false.
inline bool has_upper_host(std::string_view uri) {
  auto parts = detail::carve(uri);
  if (!parts) return false;
  std::string_view host_raw, port_raw;
  if (!detail::split_host_port(parts->authority, host_raw, port_raw)) return false;
  for (char c : host_raw)
    if (is_ascii_upper(c)) return true;
  return false;
}

}  // namespace voidmap
