#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "voidmap/expected.hpp"
#include "voidmap/log.hpp"
#include "voidmap/util.hpp"

namespace voidmap {

// Normalized tab-separated record: one log entry per \n-terminated line,
// 11 columns (ip, ident, auth_user, timestamp, method, path, http_version,
// status, bytes, referrer, user_agent), optionally a 12th "amended" marker
// (0/1). The timestamp column preserves the original zone as local time
// plus offset (2020-11-13T19:01:18+0000) so records convert back to
// byte-identical log lines.

struct Record {
  LogEntry entry;
  bool amended = false;
};

namespace detail {

inline void escape_field(std::string_view field, std::string& out) {
  for (char c : field) {
    switch (c) {
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\\': out += "\\\\"; break;
      default: out += c;
    }
  }
}

inline Expected<std::string, ParseError> unescape_field(std::string_view field,
                                                        size_t column) {
  std::string out;
  out.reserve(field.size());
  for (size_t i = 0; i < field.size(); ++i) {
    if (field[i] != '\\') {
      out += field[i];
      continue;
    }
    if (i + 1 == field.size())
      return ParseError{column, "dangling escape"};
    ++i;
    switch (field[i]) {
      case 't': out += '\t'; break;
      case 'n': out += '\n'; break;
      case 'r': out += '\r'; break;
      case '\\': out += '\\'; break;
      default: return ParseError{column, "unknown escape"};
    }
  }
  return out;
}

inline std::string format_offset_timestamp(int64_t ts, int32_t tz_offset_min) {
  Utc local = epoch_to_utc(ts + int64_t{tz_offset_min} * 60);
  std::string out = format_iso8601(utc_to_epoch(local));
  out.pop_back();  // trailing Z
  int32_t off = tz_offset_min;
  out += off < 0 ? '-' : '+';
  if (off < 0) off = -off;
  char buf[16];
  std::snprintf(buf, sizeof buf, "%02d%02d", off / 60, off % 60);
  out += buf;
  return out;
}

inline bool parse_offset_timestamp(std::string_view text, int64_t& ts,
                                   int32_t& tz_offset_min) {
  if (text.size() != 24) return false;
  if (text[19] != '+' && text[19] != '-') return false;
  auto local = parse_iso8601(std::string(text.substr(0, 19)) + "Z");
  if (!local) return false;
  for (size_t i = 20; i < 24; ++i)
    if (!is_ascii_digit(text[i])) return false;
  int32_t hours = (text[20] - '0') * 10 + (text[21] - '0');
  int32_t mins = (text[22] - '0') * 10 + (text[23] - '0');
  if (mins >= 60) return false;
  int32_t off = hours * 60 + mins;
  if (text[19] == '-') off = -off;
  tz_offset_min = off;
  ts = *local - int64_t{off} * 60;
  return true;
}

}  // namespace detail

inline std::string to_record(const LogEntry& entry) {
  std::string out;
  auto field = [&](std::string_view value) {
    if (!out.empty()) out += '\t';
    detail::escape_field(value, out);
  };
  field(entry.client_ip);
  field(entry.ident);
  field(entry.auth_user);
  field(detail::format_offset_timestamp(entry.timestamp, entry.tz_offset_min));
  field(entry.method);
  field(entry.path);
  field(entry.http_version);
  field(std::to_string(entry.status));
  field(entry.bytes_known() ? std::to_string(entry.bytes) : "-");
  field(entry.referrer);
  field(entry.user_agent);
  return out;
}

inline std::string to_record(const Record& record) {
  std::string out = to_record(record.entry);
  out += record.amended ? "\t1" : "\t0";
  return out;
}

// Accepts both the 11-column form and the 12-column amended form.
inline Expected<Record, ParseError> from_record(std::string_view line) {
  std::vector<std::string_view> raw;
  size_t start = 0;
  for (;;) {
    size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      raw.push_back(line.substr(start));
      break;
    }
    raw.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  if (raw.size() != 11 && raw.size() != 12)
    return ParseError{0, "expected 11 or 12 columns, got " + std::to_string(raw.size())};

  std::vector<std::string> fields;
  fields.reserve(raw.size());
  for (size_t i = 0; i < raw.size(); ++i) {
    auto unescaped = detail::unescape_field(raw[i], i + 1);
    if (!unescaped.ok()) return unescaped.error();
    fields.push_back(std::move(unescaped.value()));
  }

  Record record;
  LogEntry& e = record.entry;
  e.client_ip = std::move(fields[0]);
  e.ident = std::move(fields[1]);
  e.auth_user = std::move(fields[2]);
  if (!detail::parse_offset_timestamp(fields[3], e.timestamp, e.tz_offset_min))
    return ParseError{4, "bad timestamp"};
  e.method = std::move(fields[4]);
  e.path = std::move(fields[5]);
  e.http_version = std::move(fields[6]);
  auto status = parse_i64(fields[7]);
  if (!status || *status < 100 || *status > 599)
    return ParseError{8, "bad status"};
  e.status = static_cast<int>(*status);
  if (fields[8] == "-") {
    e.bytes = -1;
  } else {
    auto bytes = parse_i64(fields[8]);
    if (!bytes || *bytes < 0) return ParseError{9, "bad bytes"};
    e.bytes = *bytes;
  }
  e.referrer = std::move(fields[9]);
  e.user_agent = std::move(fields[10]);
  if (raw.size() == 12) {
    if (fields[11] == "1")
      record.amended = true;
    else if (fields[11] == "0")
      record.amended = false;
    else
      return ParseError{12, "bad amended marker"};
  }
  return record;
}

}  // namespace voidmap
