#pragma once

#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "voidmap/expected.hpp"
#include "voidmap/util.hpp"

namespace voidmap {

struct ParseError {
  size_t offset = 0;  // byte offset into the line
  std::string reason;
};

// One Combined Log Format record:
//   ip ident user [dd/Mon/yyyy:HH:MM:SS +zzzz] "METHOD path HTTP/x" status bytes "referrer" "user-agent"
//
// '-' fields are stored empty. The timestamp is normalized to UTC epoch
// seconds; the original zone offset is kept so serialization is byte-exact.
struct LogEntry {
  std::string client_ip;
  std::string ident;
  std::string auth_user;
  int64_t timestamp = 0;   // UTC epoch seconds
  int tz_offset_min = 0;   // original offset, minutes east of UTC
  std::string method;
  std::string path;        // raw path+query, byte-for-byte
  std::string http_version;
  int status = 0;          // 100..599
  int64_t bytes = -1;      // -1 = unknown ('-')
  std::string referrer;
  std::string user_agent;

  bool bytes_known() const { return bytes >= 0; }
};

enum class RequestKind { NonMemento, UriM, UriG, UriT };

inline const char* kind_name(RequestKind k) {
  switch (k) {
    case RequestKind::UriM: return "URI-M";
    case RequestKind::UriG: return "URI-G";
    case RequestKind::UriT: return "URI-T";
    default: return "non-memento";
  }
}

inline std::optional<RequestKind> kind_from_name(std::string_view s) {
  if (s == "URI-M") return RequestKind::UriM;
  if (s == "URI-G") return RequestKind::UriG;
  if (s == "URI-T") return RequestKind::UriT;
  if (s == "non-memento") return RequestKind::NonMemento;
  return std::nullopt;
}

// A log entry classified against the archive's replay endpoints.
struct MementoRequest {
  RequestKind kind = RequestKind::NonMemento;
  std::string urir;              // raw URI-R as it appeared in the path
  std::string request_datetime;  // 14-digit timestamp for URI-Ms
  LogEntry entry;
  bool amended = false;          // Soft-404 repair flag
};

namespace detail {

inline constexpr const char* kMonthNames[12] = {"Jan", "Feb", "Mar", "Apr",
                                                "May", "Jun", "Jul", "Aug",
                                                "Sep", "Oct", "Nov", "Dec"};

inline int month_from_name(std::string_view name) {
  for (int i = 0; i < 12; ++i)
    if (name == kMonthNames[i]) return i + 1;
  return 0;
}

struct LineScanner {
  std::string_view line;
  size_t pos = 0;

  bool at_end() const { return pos >= line.size(); }

  bool skip_space() {
    if (at_end() || line[pos] != ' ') return false;
    ++pos;
    return true;
  }

  // Bare token up to the next space.
  std::optional<std::string_view> token() {
    if (at_end()) return std::nullopt;
    size_t start = pos;
    while (pos < line.size() && line[pos] != ' ') ++pos;
    if (pos == start) return std::nullopt;
    return line.substr(start, pos - start);
  }

  // "..." with \" and \\ escapes; returns the unescaped content.
  std::optional<std::string> quoted() {
    if (at_end() || line[pos] != '"') return std::nullopt;
    ++pos;
    std::string out;
    while (pos < line.size()) {
      char c = line[pos];
      if (c == '\\' && pos + 1 < line.size() &&
          (line[pos + 1] == '"' || line[pos + 1] == '\\')) {
        out.push_back(line[pos + 1]);
        pos += 2;
        continue;
      }
      if (c == '"') {
        ++pos;
        return out;
      }
      out.push_back(c);
      ++pos;
    }
    return std::nullopt;  // unterminated
  }

  // [dd/Mon/yyyy:HH:MM:SS +zzzz]
  bool timestamp(int64_t& epoch, int& tz_min) {
    if (at_end() || line[pos] != '[') return false;
    size_t close = line.find(']', pos);
    if (close == std::string_view::npos) return false;
    std::string_view t = line.substr(pos + 1, close - pos - 1);
    if (t.size() != 26 || t[2] != '/' || t[6] != '/' || t[11] != ':' ||
        t[14] != ':' || t[17] != ':' || t[20] != ' ')
      return false;
    auto day = parse_i64(t.substr(0, 2));
    int month = month_from_name(t.substr(3, 3));
    auto year = parse_i64(t.substr(7, 4));
    auto hh = parse_i64(t.substr(12, 2));
    auto mm = parse_i64(t.substr(15, 2));
    auto ss = parse_i64(t.substr(18, 2));
    char sign = t[21];
    auto zh = parse_i64(t.substr(22, 2));
    auto zm = parse_i64(t.substr(24, 2));
    if (!day || !month || !year || !hh || !mm || !ss || !zh || !zm ||
        (sign != '+' && sign != '-') || *day < 1 || *day > 31 || *hh > 23 ||
        *mm > 59 || *ss > 60)
      return false;
    Utc utc{static_cast<int>(*year), month, static_cast<int>(*day),
            static_cast<int>(*hh), static_cast<int>(*mm), static_cast<int>(*ss)};
    tz_min = static_cast<int>(*zh * 60 + *zm);
    if (sign == '-') tz_min = -tz_min;
    epoch = utc_to_epoch(utc) - int64_t(tz_min) * 60;
    pos = close + 1;
    return true;
  }
};

inline std::string escape_clf(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

}  // namespace detail

// Parses one Combined Log Format line. Total: any byte sequence yields a
// LogEntry or a ParseError, never a partial record and never an exception.
// Trailing fields beyond the user-agent are accepted and ignored.
inline Expected<LogEntry, ParseError> parse_log_line(std::string_view line) {
  detail::LineScanner scan{line};
  LogEntry entry;
  auto fail = [&](const char* reason) {
    return Expected<LogEntry, ParseError>(ParseError{scan.pos, reason});
  };

  auto dash_empty = [](std::string_view t) {
    return t == "-" ? std::string() : std::string(t);
  };

  auto ip = scan.token();
  if (!ip) return fail("missing client ip");
  entry.client_ip = std::string(*ip);
  if (!scan.skip_space()) return fail("expected space after client ip");

  auto ident = scan.token();
  if (!ident) return fail("missing ident");
  entry.ident = dash_empty(*ident);
  if (!scan.skip_space()) return fail("expected space after ident");

  auto user = scan.token();
  if (!user) return fail("missing auth user");
  entry.auth_user = dash_empty(*user);
  if (!scan.skip_space()) return fail("expected space after auth user");

  if (!scan.timestamp(entry.timestamp, entry.tz_offset_min))
    return fail("malformed timestamp");
  if (!scan.skip_space()) return fail("expected space after timestamp");

  auto request = scan.quoted();
  if (!request) return fail("malformed request");
  // METHOD SP path SP version; the path may itself contain spaces.
  size_t first_sp = request->find(' ');
  size_t last_sp = request->rfind(' ');
  if (first_sp == std::string::npos || first_sp == last_sp)
    return fail("request line needs method, path, version");
  entry.method = request->substr(0, first_sp);
  entry.path = request->substr(first_sp + 1, last_sp - first_sp - 1);
  entry.http_version = request->substr(last_sp + 1);
  if (entry.method.empty() || entry.path.empty() || entry.http_version.empty())
    return fail("request line needs method, path, version");
  if (!scan.skip_space()) return fail("expected space after request");

  auto status = scan.token();
  if (!status) return fail("missing status");
  auto status_num = parse_i64(*status);
  if (!status_num || *status_num < 100 || *status_num > 599)
    return fail("status out of range");
  entry.status = static_cast<int>(*status_num);
  if (!scan.skip_space()) return fail("expected space after status");

  auto bytes = scan.token();
  if (!bytes) return fail("missing bytes");
  if (*bytes == "-") {
    entry.bytes = -1;
  } else {
    auto n = parse_u64(*bytes);
    if (!n) return fail("malformed bytes");
    entry.bytes = static_cast<int64_t>(*n);
  }
  if (!scan.skip_space()) return fail("expected space after bytes");

  auto referrer = scan.quoted();
  if (!referrer) return fail("malformed referrer");
  entry.referrer = *referrer == "-" ? std::string() : *referrer;
  if (!scan.skip_space()) return fail("expected space after referrer");

  auto agent = scan.quoted();
  if (!agent) return fail("malformed user agent");
  entry.user_agent = *agent == "-" ? std::string() : *agent;

  // Anything after the user-agent (a later log-configuration change added a
  // field) is ignored, but it must look like separate fields, not glued text.
  if (!scan.at_end() && line[scan.pos] != ' ') return fail("trailing garbage");
  return entry;
}

// Re-serializes an entry in Combined Log Format. For well-formed inputs that
// use the '-' sentinel and have no trailing extra fields,
// serialize_log_line(parse_log_line(x)) == x.
inline std::string serialize_log_line(const LogEntry& entry) {
  auto dash = [](const std::string& s) { return s.empty() ? "-" : s.c_str(); };
  Utc local = epoch_to_utc(entry.timestamp + int64_t(entry.tz_offset_min) * 60);
  int tz = entry.tz_offset_min;
  char tz_sign = tz < 0 ? '-' : '+';
  if (tz < 0) tz = -tz;

  char buf[64];
  std::snprintf(buf, sizeof(buf), "[%02d/%s/%04d:%02d:%02d:%02d %c%02d%02d]",
                local.day, detail::kMonthNames[local.month - 1], local.year,
                local.hour, local.minute, local.second, tz_sign, tz / 60, tz % 60);

  std::string out;
  out += dash(entry.client_ip);
  out += ' ';
  out += dash(entry.ident);
  out += ' ';
  out += dash(entry.auth_user);
  out += ' ';
  out += buf;
  out += " \"";
  out += detail::escape_clf(entry.method);
  out += ' ';
  out += detail::escape_clf(entry.path);
  out += ' ';
  out += detail::escape_clf(entry.http_version);
  out += "\" ";
  out += std::to_string(entry.status);
  out += ' ';
  out += entry.bytes_known() ? std::to_string(entry.bytes) : "-";
  out += " \"";
  out += entry.referrer.empty() ? "-" : detail::escape_clf(entry.referrer);
  out += "\" \"";
  out += entry.user_agent.empty() ? "-" : detail::escape_clf(entry.user_agent);
  out += '"';
  return out;
}

// ---------------------------------------------------------------------------
// Endpoint grammar for extracting URI-Rs from request paths.

struct EndpointConfig {
  // Checked first, most specific wins. Archives have exposed both forms
  // over the years, so both are defaults.
  std::vector<std::string> timemap_prefixes = {"/wayback/timemap/*/",
                                               "/wayback/timemap/link/"};
  std::string replay_prefix = "/wayback/";   // /wayback/<14digits>[mod]/<urir>
  std::string timegate_prefix = "/wayback/"; // /wayback/<urir>
};

namespace detail {

// A timegate target must look like an absolute URI; this keeps static assets
// under the replay prefix ("/wayback/css/app.css") out of the URI-R space.
inline bool plausible_urir(std::string_view s) {
  if (s.empty() || !is_ascii_alpha(s[0])) return false;
  size_t i = 1;
  while (i < s.size() && (is_ascii_alpha(s[i]) || is_ascii_digit(s[i]) ||
                          s[i] == '+' || s[i] == '-' || s[i] == '.'))
    ++i;
  return s.substr(i).starts_with("://");
}

}  // namespace detail

// Classification is total and depends only on the path and the endpoints.
inline MementoRequest classify_request(const LogEntry& entry,
                                       const EndpointConfig& endpoints) {
  MementoRequest req;
  req.entry = entry;
  std::string_view path = entry.path;

  for (const auto& prefix : endpoints.timemap_prefixes) {
    if (path.starts_with(prefix) && path.size() > prefix.size()) {
      req.kind = RequestKind::UriT;
      req.urir = std::string(path.substr(prefix.size()));
      return req;
    }
  }

  if (path.starts_with(endpoints.replay_prefix)) {
    std::string_view rest = path.substr(endpoints.replay_prefix.size());
    size_t digits = 0;
    while (digits < rest.size() && is_ascii_digit(rest[digits])) ++digits;
    if (digits == 14) {
      size_t slash = rest.find('/', digits);
      if (slash != std::string_view::npos && slash + 1 < rest.size()) {
        req.kind = RequestKind::UriM;
        req.request_datetime = std::string(rest.substr(0, 14));
        req.urir = std::string(rest.substr(slash + 1));
        return req;
      }
    }
  }

  if (path.starts_with(endpoints.timegate_prefix)) {
    std::string_view rest = path.substr(endpoints.timegate_prefix.size());
    if (detail::plausible_urir(rest)) {
      req.kind = RequestKind::UriG;
      req.urir = std::string(rest);
      return req;
    }
  }

  return req;
}

}  // namespace voidmap
