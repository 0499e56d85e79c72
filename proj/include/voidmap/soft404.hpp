#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "voidmap/expected.hpp"
#include "voidmap/log.hpp"
#include "voidmap/util.hpp"

namespace voidmap {

// Empty-TimeMap responses are rendered from a fixed template that echoes the
// requested URI a constant number of times, so their size is an exact linear
// function of the raw URI length: bytes = k * length + c. Entries matching
// the line can be re-labeled 404 even though the server logged 200.

struct Soft404Model {
  int64_t k = 0;
  int64_t c = 0;
  // Entries at or after this instant are left alone (replay stack fixed).
  int64_t valid_until = parse_date("2019-11-18").value();
};

struct FitError {
  std::string reason;
};

struct AmendReport {
  uint64_t amended = 0;
  uint64_t unchanged = 0;
};

inline int64_t predict_bytes(const Soft404Model& model, int64_t urir_length) {
  return model.k * urir_length + model.c;
}

// Exact integer fit over known-404 samples of (urir_length, response_bytes).
// The template hypothesis is exact, so any sample off the line is a failure,
// not noise to average away.
inline Expected<Soft404Model, FitError> fit_model(
    const std::vector<std::pair<int64_t, int64_t>>& samples) {
  if (samples.size() < 2)
    return FitError{"need at least two samples"};
  size_t other = 0;
  while (other < samples.size() && samples[other].first == samples[0].first)
    ++other;
  if (other == samples.size())
    return FitError{"need two distinct urir lengths"};

  const auto [l0, b0] = samples[0];
  const auto [l1, b1] = samples[other];
  int64_t dl = l1 - l0, db = b1 - b0;
  if (db % dl != 0)
    return FitError{"no integer slope fits the samples"};
  Soft404Model model;
  model.k = db / dl;
  model.c = b0 - model.k * l0;
  if (model.k < 1)
    return FitError{"slope below 1: response size not driven by urir length"};
  if (model.c < 0)
    return FitError{"negative template overhead"};
  for (const auto& [len, bytes] : samples) {
    if (predict_bytes(model, len) != bytes)
      return FitError{"sample (" + std::to_string(len) + ", " +
                      std::to_string(bytes) + ") is off the fitted line"};
  }
  return model;
}

// Rewrites a logged 200 to 404 when the entry is a TimeMap lookup from
// before valid_until whose size matches the empty-template prediction for
// its raw urir. Only the status changes; everything else passes through.
// Returns whether the entry was amended. Idempotent: a rewritten entry is
// no longer a 200.
inline bool amend_entry(MementoRequest& request, const Soft404Model& model) {
  if (request.kind != RequestKind::UriT) return false;
  if (request.entry.status != 200) return false;
  if (!request.entry.bytes_known()) return false;
  if (request.entry.timestamp >= model.valid_until) return false;
  if (request.entry.bytes !=
      predict_bytes(model, static_cast<int64_t>(request.urir.size())))
    return false;
  request.entry.status = 404;
  request.amended = true;
  return true;
}

inline AmendReport amend_stream(std::vector<MementoRequest>& requests,
                                const Soft404Model& model) {
  AmendReport report;
  for (auto& request : requests) {
    if (amend_entry(request, model))
      ++report.amended;
    else
      ++report.unchanged;
  }
  return report;
}

}  // namespace voidmap
