#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "voidmap/history.hpp"

using namespace voidmap;

namespace {

MementoRequest hit(std::string urir, int64_t ts, int status,
                   std::string agent = "") {
  MementoRequest req;
  req.kind = RequestKind::UriT;
  req.urir = std::move(urir);
  req.entry.timestamp = ts;
  req.entry.status = status;
  req.entry.user_agent = std::move(agent);
  return req;
}

StatusHistory build_one(const std::vector<int>& statuses) {
  HistoryBuilder builder;
  int64_t ts = 0;
  for (int s : statuses) builder.add(hit("http://x.example/", ++ts, s));
  auto histories = builder.finish();
  REQUIRE(histories.size() == 1);
  return histories.begin()->second;
}

// Straight-line reimplementation used as an oracle: group, sort, collapse.
std::map<std::string, StatusHistory> naive_histories(
    const std::vector<MementoRequest>& requests) {
  std::map<std::string, std::vector<std::pair<int64_t, int>>> grouped;
  for (const auto& r : requests) {
    if (r.kind == RequestKind::NonMemento || r.urir.empty()) continue;
    grouped[r.urir].push_back({r.entry.timestamp, r.entry.status});
  }
  std::map<std::string, StatusHistory> out;
  for (auto& [urir, obs] : grouped) {
    std::sort(obs.begin(), obs.end());
    StatusHistory h;
    h.urir = urir;
    h.first_seen = obs.front().first;
    h.last_seen = obs.back().first;
    h.total_requests = obs.size();
    for (auto [ts, status] : obs) {
      ++h.counts_by_status[status];
      if (status == 200 || status == 404) {
        if (h.collapsed.empty() || h.collapsed.back() != status)
          h.collapsed.push_back(status);
      }
    }
    out.emplace(urir, std::move(h));
  }
  return out;
}

bool same_history(const StatusHistory& a, const StatusHistory& b) {
  return a.urir == b.urir && a.first_seen == b.first_seen &&
         a.last_seen == b.last_seen && a.total_requests == b.total_requests &&
         a.counts_by_status == b.counts_by_status && a.collapsed == b.collapsed;
}

}  // namespace

TEST_CASE("adjacent equal codes collapse into one") {
  CHECK(build_one({404, 404, 404}).collapsed == std::vector<int>{404});
  CHECK(build_one({404, 404, 200, 200}).collapsed ==
        std::vector<int>{404, 200});
  CHECK(build_one({200, 404, 200, 404, 200, 404}).collapsed ==
        std::vector<int>{200, 404, 200, 404, 200, 404});
}

TEST_CASE("patterns of five or more codes group under a ++ prefix") {
  CHECK(build_one({404}).pattern() == "404");
  CHECK(build_one({404, 200, 404, 200}).pattern() == "404,200,404,200");
  CHECK(build_one({200, 404, 200, 404, 200}).pattern() ==
        "200,404,200,404,200++");
  CHECK(build_one({200, 404, 200, 404, 200, 404, 200}).pattern() ==
        "200,404,200,404,200++");
  CHECK(build_one({404, 200, 404, 200, 404, 200}).pattern() ==
        "404,200,404,200,404++");
}

TEST_CASE("non-200/404 statuses count in totals but not in the sequence") {
  StatusHistory h = build_one({500, 404, 503, 404, 429});
  CHECK(h.total_requests == 5);
  CHECK(h.counts_by_status[500] == 1);
  CHECK(h.counts_by_status[404] == 2);
  CHECK(h.collapsed == std::vector<int>{404});
  CHECK(h.always_404());

  uint64_t total = 0;
  for (const auto& [status, count] : h.counts_by_status) total += count;
  CHECK(total == h.total_requests);

  StatusHistory none = build_one({500, 503});
  CHECK(none.collapsed.empty());
  CHECK_FALSE(none.always_404());
}

TEST_CASE("only 404-only histories count as voids candidates") {
  CHECK(build_one({404, 404}).always_404());
  CHECK_FALSE(build_one({200}).always_404());
  CHECK_FALSE(build_one({404, 200}).always_404());
  CHECK(build_one({404, 500, 404}).always_404());  // 5xx is not a recovery
}

TEST_CASE("redirects are dropped before history building") {
  std::vector<MementoRequest> requests;
  for (int s : {301, 302, 200}) requests.push_back(hit("http://x.example/", 1, s));
  filter_redirects(requests);
  REQUIRE(requests.size() == 1);
  CHECK(requests[0].entry.status == 200);

  std::mt19937_64 rng(5);
  const int statuses[] = {200, 301, 302, 307, 404, 500};
  std::vector<MementoRequest> mixed;
  size_t redirects = 0;
  for (int i = 0; i < 1000; ++i) {
    int s = statuses[rng() % 6];
    redirects += s >= 300 && s < 400;
    mixed.push_back(hit("http://x.example/", i, s));
  }
  filter_redirects(mixed);
  CHECK(mixed.size() == 1000 - redirects);
}

TEST_CASE("input order never changes the result") {
  std::mt19937_64 rng(17);
  std::vector<MementoRequest> requests;
  for (int i = 0; i < 400; ++i) {
    std::string urir = "http://h" + std::to_string(rng() % 20) + ".example/p";
    int status = std::vector<int>{200, 404, 404, 500}[rng() % 4];
    requests.push_back(hit(urir, static_cast<int64_t>(rng() % 100), status));
  }

  HistoryBuilder base;
  for (const auto& r : requests) base.add(r);
  auto expected = base.finish();

  for (int round = 0; round < 5; ++round) {
    std::shuffle(requests.begin(), requests.end(), rng);
    HistoryBuilder builder;
    for (const auto& r : requests) builder.add(r);
    auto got = builder.finish();
    REQUIRE(got.size() == expected.size());
    for (const auto& [urir, history] : expected)
      CHECK(same_history(got.at(urir), history));
    CHECK(fluctuation_report(got) == fluctuation_report(expected));
  }
}

TEST_CASE("histories match a naive sort-group-collapse oracle") {
  std::mt19937_64 rng(23);
  const int statuses[] = {200, 404, 404, 404, 500, 503};
  std::vector<MementoRequest> requests;
  for (int i = 0; i < 2000; ++i) {
    std::string urir = "http://site" + std::to_string(rng() % 40) + ".example/a";
    requests.push_back(hit(urir, static_cast<int64_t>(rng() % 500),
                           statuses[rng() % 6]));
  }

  HistoryBuilder builder;
  for (const auto& r : requests) builder.add(r);
  auto got = builder.finish();
  auto expected = naive_histories(requests);

  REQUIRE(got.size() == expected.size());
  for (const auto& [urir, history] : expected)
    CHECK(same_history(got.at(urir), history));

  // Report values sum to the number of URIs with nonempty sequences.
  uint64_t with_pattern = 0;
  for (const auto& [urir, history] : expected)
    with_pattern += !history.collapsed.empty();
  uint64_t reported = 0;
  for (const auto& [pattern, count] : fluctuation_report(got)) reported += count;
  CHECK(reported == with_pattern);
}

TEST_CASE("each raw spelling is its own resource unless grouping canonically") {
  std::vector<MementoRequest> requests = {
      hit("http://example.com/%7Euser", 1, 404),
      hit("http://EXAMPLE.com/~user", 2, 404),
  };

  HistoryBuilder raw;
  for (const auto& r : requests) raw.add(r);
  CHECK(raw.finish().size() == 2);

  HistoryBuilder canonical(true);
  for (const auto& r : requests) canonical.add(r);
  auto grouped = canonical.finish();
  REQUIRE(grouped.size() == 1);
  CHECK(grouped.begin()->second.total_requests == 2);
}

TEST_CASE("non-memento traffic never reaches histories") {
  HistoryBuilder builder;
  MementoRequest plain;
  plain.kind = RequestKind::NonMemento;
  plain.entry.status = 404;
  builder.add(plain);
  builder.add(hit("http://x.example/", 1, 404));
  CHECK(builder.finish().size() == 1);
}

TEST_CASE("the per-agent pivot splits one resource's statuses by client") {
  std::vector<MementoRequest> requests = {
      hit("http://x.example/", 1, 404, "monitor/1.0"),
      hit("http://x.example/", 2, 200, "monitor/1.0"),
      hit("http://x.example/", 3, 404, "monitor/1.0"),
      hit("http://x.example/", 4, 404, "browser/7"),
      hit("http://other.example/", 5, 200, "browser/7"),
  };
  auto pivot = agent_pivot(requests, "http://x.example/");
  REQUIRE(pivot.size() == 2);
  CHECK(pivot["monitor/1.0"][404] == 2);
  CHECK(pivot["monitor/1.0"][200] == 1);
  CHECK(pivot["browser/7"][404] == 1);
  CHECK(pivot["browser/7"].count(200) == 0);
}
