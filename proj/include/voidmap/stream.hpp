#pragma once

#include <algorithm>
#include <filesystem>
#include <future>
#include <optional>
#include <string>
#include <vector>

#include <zlib.h>

#include "voidmap/expected.hpp"
#include "voidmap/log.hpp"
#include "voidmap/util.hpp"

namespace voidmap {

struct IoError {
  std::string path;
  std::string reason;
};

struct DateRange {
  std::optional<int64_t> from;  // inclusive, midnight UTC
  std::optional<int64_t> to;    // inclusive
};

struct FileReport {
  std::string path;
  uint64_t entries = 0;
  uint64_t parse_errors = 0;
  bool unreadable = false;
};

struct StreamSummary {
  std::vector<FileReport> files;
  uint64_t entries = 0;
  uint64_t parse_errors = 0;
  uint64_t unreadable_files = 0;
};

// Calls fn(line) for every line of a plain or gzip file; zlib reads both
// transparently. A trailing \r is stripped, a final unterminated line is
// still delivered.
template <typename Fn>
inline bool for_each_line(const std::string& path, Fn&& fn) {
  gzFile f = gzopen(path.c_str(), "rb");
  if (!f) return false;
  gzbuffer(f, 1 << 20);
  std::string carry;
  std::vector<char> buf(1 << 20);
  auto deliver = [&](std::string_view line) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    fn(line);
  };
  for (;;) {
    int n = gzread(f, buf.data(), static_cast<unsigned>(buf.size()));
    if (n < 0) {
      gzclose(f);
      return false;
    }
    if (n == 0) break;
    std::string_view chunk(buf.data(), static_cast<size_t>(n));
    size_t start = 0;
    for (;;) {
      size_t nl = chunk.find('\n', start);
      if (nl == std::string_view::npos) break;
      if (carry.empty()) {
        deliver(chunk.substr(start, nl - start));
      } else {
        carry.append(chunk.substr(start, nl - start));
        deliver(carry);
        carry.clear();
      }
      start = nl + 1;
    }
    carry.append(chunk.substr(start));
  }
  gzclose(f);
  if (!carry.empty()) deliver(carry);
  return true;
}

namespace detail {

// First YYYY-MM-DD or YYYYMMDD run in a filename, as midnight UTC.
inline std::optional<int64_t> filename_date(std::string_view name) {
  for (size_t i = 0; i + 10 <= name.size(); ++i) {
    if (auto d = parse_date(name.substr(i, 10))) return d;
  }
  for (size_t i = 0; i + 8 <= name.size(); ++i) {
    bool digits = true;
    for (size_t j = 0; j < 8; ++j)
      if (!is_ascii_digit(name[i + j])) digits = false;
    if (!digits) continue;
    if (i + 8 < name.size() && is_ascii_digit(name[i + 8])) continue;
    if (i > 0 && is_ascii_digit(name[i - 1])) continue;
    std::string dashed;
    dashed.append(name.substr(i, 4));
    dashed += '-';
    dashed.append(name.substr(i + 4, 2));
    dashed += '-';
    dashed.append(name.substr(i + 6, 2));
    if (auto d = parse_date(dashed)) return d;
  }
  return std::nullopt;
}

}  // namespace detail

// Daily log files of a directory in date (filename) order, optionally
// restricted to a range. Files without a recognizable date are kept.
inline Expected<std::vector<std::string>, IoError> list_log_files(
    const std::string& dir, const DateRange& range = {}) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(dir, ec))
    return IoError{dir, "not a directory"};
  std::vector<std::string> files;
  for (const auto& ent : fs::directory_iterator(dir, ec)) {
    if (!ent.is_regular_file()) continue;
    std::string name = ent.path().filename().string();
    auto date = detail::filename_date(name);
    if (date) {
      if (range.from && *date < *range.from) continue;
      if (range.to && *date > *range.to) continue;
    }
    files.push_back(ent.path().string());
  }
  if (ec) return IoError{dir, ec.message()};
  std::sort(files.begin(), files.end());
  return files;
}

struct ScanOptions {
  DateRange range;
  int jobs = 1;
};

namespace detail {

struct ParsedFile {
  std::vector<LogEntry> entries;
  uint64_t parse_errors = 0;
  bool ok = true;
};

inline ParsedFile parse_file(const std::string& path) {
  ParsedFile out;
  bool read_ok = for_each_line(path, [&](std::string_view line) {
    if (line.empty()) return;
    auto parsed = parse_log_line(line);
    if (parsed.ok())
      out.entries.push_back(std::move(parsed.value()));
    else
      ++out.parse_errors;
  });
  out.ok = read_ok;
  return out;
}

}  // namespace detail

// Streams every entry of a log directory in file order then line order.
// Files may be parsed in parallel (`jobs`), but delivery order and the
// summary are identical at any jobs setting. Unreadable files are skipped
// and counted.
template <typename EntryFn>
inline Expected<StreamSummary, IoError> scan_directory(const std::string& dir,
                                                       const ScanOptions& options,
                                                       EntryFn&& fn) {
  auto files = list_log_files(dir, options.range);
  if (!files.ok()) return files.error();

  StreamSummary summary;
  const int jobs = std::max(1, options.jobs);

  auto consume = [&](const std::string& path, detail::ParsedFile&& parsed) {
    FileReport report;
    report.path = path;
    report.parse_errors = parsed.parse_errors;
    report.entries = parsed.entries.size();
    report.unreadable = !parsed.ok;
    if (!parsed.ok) ++summary.unreadable_files;
    summary.entries += report.entries;
    summary.parse_errors += report.parse_errors;
    summary.files.push_back(std::move(report));
    for (auto& entry : parsed.entries) fn(std::move(entry));
  };

  if (jobs == 1) {
    for (const auto& path : files.value())
      consume(path, detail::parse_file(path));
    return summary;
  }

  std::vector<std::future<detail::ParsedFile>> window;
  size_t next = 0, done = 0;
  const auto& names = files.value();
  while (done < names.size()) {
    while (next < names.size() && window.size() < static_cast<size_t>(jobs)) {
      window.push_back(std::async(std::launch::async, detail::parse_file, names[next]));
      ++next;
    }
    consume(names[done], window.front().get());
    window.erase(window.begin());
    ++done;
  }
  return summary;
}

}  // namespace voidmap
