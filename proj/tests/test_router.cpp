#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <string>
#include <vector>

#include "voidmap/router.hpp"

using namespace voidmap;

namespace {

VoidsProfile profile_of(std::vector<std::pair<std::string, uint64_t>> entries) {
  VoidsProfile p;
  for (auto& [key, count] : entries) p.entries[key] = count;
  return p;
}

ProfileIndex build_ok(const VoidsProfile& holdings, const VoidsProfile& voids,
                      RouterOptions options = {}) {
  auto index = ProfileIndex::build(holdings, voids, options);
  REQUIRE(index.ok());
  return std::move(index.value());
}

// Oracle: scan every key of one source with SurtKey::matches and keep the
// most specific hit. The production index must never disagree.
struct OracleHit {
  bool found = false;
  int specificity = -1;
  int depth = 0;
};

OracleHit scan_all(const std::vector<SurtKey>& keys, const SurtKey& query) {
  OracleHit best;
  for (const auto& key : keys) {
    if (!key.matches(query)) continue;
    int s = key.specificity();
    if (!best.found || s > best.specificity)
      best = {true, s, key.depth()};
  }
  return best;
}

RoutingDecision oracle_decide(const std::vector<SurtKey>& holdings,
                              const std::vector<SurtKey>& voids,
                              const SurtKey& query,
                              const RouterOptions& options) {
  OracleHit h = scan_all(holdings, query);
  OracleHit v = scan_all(voids, query);
  bool use_voids;
  if (h.found && v.found)
    use_voids = options.prefer_voids ? v.specificity >= h.specificity
                                     : v.specificity > h.specificity;
  else
    use_voids = v.found;
  if (use_voids) return {Verdict::NoRoute, MatchSource::Voids, "", v.depth};
  if (h.found) return {Verdict::Route, MatchSource::Holdings, "", h.depth};
  return {options.default_route ? Verdict::Route : Verdict::NoRoute,
          MatchSource::Default, "", 0};
}

SurtKey must_parse(const std::string& text) {
  auto key = SurtKey::parse(text);
  REQUIRE(key.ok());
  return key.value();
}

}  // namespace

TEST_CASE("void entries carve exceptions out of held subtrees") {
  auto holdings = profile_of({{"com,example)/a/*", 50}, {"com,example)/b/*", 50}});
  auto voids = profile_of(
      {{"com,example)/a/4", 100}, {"com,example)/b/3", 100}, {"com,example)/c/1", 100}});
  auto index = build_ok(holdings, voids);

  auto a1 = index.match("http://example.com/a/1");
  CHECK(a1.verdict == Verdict::Route);
  CHECK(a1.source == MatchSource::Holdings);
  CHECK(a1.matched_key == "com,example)/a/*");

  auto a1z = index.match("http://example.com/a/1/z");
  CHECK(a1z.verdict == Verdict::Route);
  CHECK(a1z.matched_key == "com,example)/a/*");

  // The wildcard covers /a/4 too, but the exact void entry is more specific.
  auto a4 = index.match("http://example.com/a/4");
  CHECK(a4.verdict == Verdict::NoRoute);
  CHECK(a4.source == MatchSource::Voids);
  CHECK(a4.matched_key == "com,example)/a/4");
  CHECK(a4.depth == 4);

  auto b3 = index.match("http://example.com/b/3");
  CHECK(b3.verdict == Verdict::NoRoute);
  CHECK(b3.matched_key == "com,example)/b/3");

  auto c1 = index.match("http://example.com/c/1");
  CHECK(c1.verdict == Verdict::NoRoute);
  CHECK(c1.matched_key == "com,example)/c/1");

  // A held subtree's own root is covered by its wildcard.
  CHECK(index.match("http://example.com/a").verdict == Verdict::Route);
}

TEST_CASE("an empty index falls through to the configured default") {
  auto index = build_ok({}, {});
  auto open = index.match("http://anything.example/x");
  CHECK(open.verdict == Verdict::Route);
  CHECK(open.source == MatchSource::Default);
  CHECK(open.matched_key.empty());

  RouterOptions closed;
  closed.default_route = false;
  auto strict = build_ok({}, {}, closed);
  CHECK(strict.match("http://anything.example/x").verdict == Verdict::NoRoute);
  CHECK(strict.match("http://anything.example/x").source == MatchSource::Default);
}

TEST_CASE("ties at equal specificity go to holdings unless flipped") {
  auto holdings = profile_of({{"com,example)/a/4", 1}});
  auto voids = profile_of({{"com,example)/a/4", 1}});

  auto index = build_ok(holdings, voids);
  auto tied = index.match("http://example.com/a/4");
  CHECK(tied.verdict == Verdict::Route);
  CHECK(tied.source == MatchSource::Holdings);

  RouterOptions prefer;
  prefer.prefer_voids = true;
  auto flipped = build_ok(holdings, voids, prefer);
  auto denied = flipped.match("http://example.com/a/4");
  CHECK(denied.verdict == Verdict::NoRoute);
  CHECK(denied.source == MatchSource::Voids);
}

TEST_CASE("the deeper source wins regardless of direction") {
  // Voids deeper than holdings.
  auto index = build_ok(profile_of({{"com,*", 1}}),
                        profile_of({{"com,example)/*", 1}}));
  CHECK(index.match("http://example.com/x").verdict == Verdict::NoRoute);
  CHECK(index.match("http://other.com/x").verdict == Verdict::Route);

  // Holdings deeper than voids.
  auto back = build_ok(profile_of({{"com,example)/a/*", 1}}),
                       profile_of({{"com,example,*", 1}}));
  CHECK(back.match("http://example.com/a/1").verdict == Verdict::Route);
  CHECK(back.match("http://example.com/zzz").verdict == Verdict::NoRoute);
}

TEST_CASE("ports and queries key distinct resources") {
  auto index = build_ok({}, profile_of({{"com,example:8080)/*", 1}}));
  CHECK(index.match("http://example.com/x").verdict == Verdict::Route);
  CHECK(index.match("http://example.com:8080/x").verdict == Verdict::NoRoute);

  auto wild = build_ok({}, profile_of({{"com,example)/a/*", 1}}));
  CHECK(wild.match("http://example.com/a?x=1").verdict == Verdict::NoRoute);

  auto exact = build_ok({}, profile_of({{"com,example)/a?x=1", 1}}));
  CHECK(exact.match("http://example.com/a?x=1").verdict == Verdict::NoRoute);
  CHECK(exact.match("http://example.com/a").verdict == Verdict::Route);
  CHECK(exact.match("http://example.com/a?x=2").verdict == Verdict::Route);
}

TEST_CASE("unparseable lookups and malformed keys are handled explicitly") {
  auto index = build_ok({}, profile_of({{"com,example)/*", 1}}));
  auto decision = index.match("not a uri");
  CHECK(decision.verdict == Verdict::Route);
  CHECK(decision.source == MatchSource::Default);

  auto bad = ProfileIndex::build(profile_of({{"com,example", 1}}), {});
  REQUIRE_FALSE(bad.ok());
  CHECK(bad.error().key == "com,example");
}

TEST_CASE("every inserted exact key finds itself") {
  std::mt19937_64 rng(53);
  VoidsProfile voids;
  std::vector<std::string> keys;
  for (int i = 0; i < 2000; ++i) {
    std::string key = "com,h" + std::to_string(rng() % 500) + ")/p" +
                      std::to_string(rng() % 40) + "/q" + std::to_string(i);
    voids.entries[key] = 1;
    keys.push_back(key);
  }
  auto index = build_ok({}, voids);
  for (const auto& key : keys) {
    auto decision = index.match_key(must_parse(key));
    CHECK(decision.verdict == Verdict::NoRoute);
    CHECK(decision.matched_key == key);
  }
}

TEST_CASE("the index agrees with a brute-force scan over all keys") {
  std::mt19937_64 rng(61);
  const std::vector<std::string> hosts = {
      "com,alpha", "com,alpha,www", "com,beta", "org,gamma,a,b", "net,delta"};
  auto random_key = [&](bool allow_wild) -> std::string {
    const std::string& host = hosts[rng() % hosts.size()];
    if (allow_wild && rng() % 5 == 0) {
      // host wildcard on a label prefix
      size_t comma = host.find(',');
      std::string prefix = rng() % 2 ? host : host.substr(0, comma);
      return prefix + ",*";
    }
    std::string path;
    size_t segments = rng() % 3;
    for (size_t i = 0; i < segments; ++i)
      path += "/s" + std::to_string(rng() % 4);
    if (allow_wild && rng() % 3 == 0)
      return host + ")" + path + "/*";
    if (path.empty()) path = "/";
    return host + ")" + path;
  };

  for (int round = 0; round < 30; ++round) {
    RouterOptions options;
    options.prefer_voids = round % 2;
    options.default_route = round % 3 != 0;

    VoidsProfile holdings, voids;
    std::vector<SurtKey> holding_keys, void_keys;
    for (int i = 0; i < 40; ++i) {
      std::string h = random_key(true);
      if (holdings.entries.emplace(h, 1).second)
        holding_keys.push_back(must_parse(h));
      std::string v = random_key(true);
      if (voids.entries.emplace(v, 1).second)
        void_keys.push_back(must_parse(v));
    }
    auto index = build_ok(holdings, voids, options);

    for (int q = 0; q < 100; ++q) {
      SurtKey query = must_parse(random_key(false));
      auto got = index.match_key(query);
      auto want = oracle_decide(holding_keys, void_keys, query, options);
      CAPTURE(query.to_string(), round, q);
      CHECK(got.verdict == want.verdict);
      CHECK(got.source == want.source);
      if (want.source != MatchSource::Default) CHECK(got.depth == want.depth);
    }
  }
}

TEST_CASE("removing a voids key never turns a route into a no-route") {
  std::mt19937_64 rng(71);
  VoidsProfile voids;
  for (int i = 0; i < 20; ++i)
    voids.entries["com,site)/p" + std::to_string(i % 10) + "/q" +
                  std::to_string(i)] = 1;
  auto holdings = profile_of({{"com,site)/p1/*", 1}, {"com,site)/p2/*", 1}});
  auto full = build_ok(holdings, voids);

  std::vector<std::string> lookups;
  for (int i = 0; i < 50; ++i)
    lookups.push_back("http://site.com/p" + std::to_string(rng() % 12) + "/q" +
                      std::to_string(rng() % 25));

  for (int removal = 0; removal < 5; ++removal) {
    auto reduced_profile = voids;
    auto victim = std::next(reduced_profile.entries.begin(),
                            rng() % reduced_profile.entries.size());
    reduced_profile.entries.erase(victim);
    auto reduced = build_ok(holdings, reduced_profile);
    for (const auto& uri : lookups) {
      if (full.match(uri).verdict == Verdict::Route)
        CHECK(reduced.match(uri).verdict == Verdict::Route);
    }
  }
}

TEST_CASE("batch matching preserves order and equals single matches") {
  auto index = build_ok(profile_of({{"com,example)/a/*", 1}}),
                        profile_of({{"com,example)/a/4", 1}}));
  std::vector<std::string> uris = {"http://example.com/a/1",
                                   "http://example.com/a/4",
                                   "http://elsewhere.net/"};
  auto decisions = match_batch(index, uris);
  REQUIRE(decisions.size() == 3);
  for (size_t i = 0; i < uris.size(); ++i) {
    CHECK(decisions[i].first == uris[i]);
    auto single = index.match(uris[i]);
    CHECK(decisions[i].second.verdict == single.verdict);
    CHECK(decisions[i].second.matched_key == single.matched_key);
  }
}
