#include <catch2/catch_amalgamated.hpp>

#include <string>

#include "voidmap/log.hpp"

using namespace voidmap;

namespace {

const std::string kSampleLine =
    R"x(172.17.0.1 - - [13/Nov/2020:19:01:18 +0000] "GET /favicon.ico HTTP/1.1" 200 238 "http://localhost/" "Mozilla/5.0 (X11; Linux x86_64) AppleWebKit/537.36 (KHTML, like Gecko) Chrome/87.0.4280.66 Safari/537.36")x";

LogEntry parse_ok(const std::string& line) {
  auto r = parse_log_line(line);
  REQUIRE(r.ok());
  return r.value();
}

}  // namespace

TEST_CASE("the sample line parses into all fields and round-trips") {
  LogEntry e = parse_ok(kSampleLine);
  CHECK(e.client_ip == "172.17.0.1");
  CHECK(e.ident.empty());
  CHECK(e.auth_user.empty());
  CHECK(e.method == "GET");
  CHECK(e.path == "/favicon.ico");
  CHECK(e.http_version == "HTTP/1.1");
  CHECK(e.status == 200);
  CHECK(e.bytes == 238);
  CHECK(e.bytes_known());
  CHECK(e.referrer == "http://localhost/");
  CHECK(e.user_agent.starts_with("Mozilla/5.0"));
  // 2020-11-13T19:01:18Z, computed by hand from the 2020 month lengths.
  CHECK(e.timestamp == 1605294078);
  CHECK(e.tz_offset_min == 0);

  CHECK(serialize_log_line(e) == kSampleLine);
}

TEST_CASE("every proper prefix of the sample line is a clean parse error") {
  for (size_t len = 0; len < kSampleLine.size(); ++len) {
    auto r = parse_log_line(kSampleLine.substr(0, len));
    CAPTURE(len);
    REQUIRE_FALSE(r.ok());
    CHECK_FALSE(r.error().reason.empty());
    CHECK(r.error().offset <= len);
  }
}

TEST_CASE("dash sentinels mean unknown or empty") {
  LogEntry e = parse_ok(
      R"(- - - [01/Jan/2019:00:00:00 +0000] "GET / HTTP/1.1" 200 - "-" "-")");
  CHECK_FALSE(e.bytes_known());
  CHECK(e.bytes == -1);
  CHECK(e.referrer.empty());
  CHECK(e.user_agent.empty());
  CHECK(serialize_log_line(e) ==
        R"(- - - [01/Jan/2019:00:00:00 +0000] "GET / HTTP/1.1" 200 - "-" "-")");
}

TEST_CASE("timezone offsets shift the epoch and survive re-serialization") {
  std::string east =
      R"(1.2.3.4 - - [01/Jan/2019:00:00:00 +0100] "GET / HTTP/1.1" 200 0 "-" "-")";
  LogEntry e = parse_ok(east);
  CHECK(e.timestamp == 1546300800 - 3600);  // 2018-12-31T23:00:00Z
  CHECK(e.tz_offset_min == 60);
  CHECK(serialize_log_line(e) == east);

  std::string west =
      R"(1.2.3.4 - - [01/Jan/2019:00:00:00 -0330] "GET / HTTP/1.1" 200 0 "-" "-")";
  LogEntry w = parse_ok(west);
  CHECK(w.timestamp == 1546300800 + 210 * 60);
  CHECK(w.tz_offset_min == -210);
  CHECK(serialize_log_line(w) == west);
}

TEST_CASE("escaped quotes inside quoted fields round-trip") {
  std::string line =
      R"x(1.2.3.4 - - [13/Nov/2020:19:01:18 +0000] "GET / HTTP/1.1" 200 0 "-" "agent \"X\" v\\1")x";
  LogEntry e = parse_ok(line);
  CHECK(e.user_agent == R"(agent "X" v\1)");
  CHECK(serialize_log_line(e) == line);
}

TEST_CASE("request paths may contain raw spaces") {
  LogEntry e = parse_ok(
      R"(1.2.3.4 - - [13/Nov/2020:19:01:18 +0000] "GET /a b c HTTP/1.0" 404 10 "-" "-")");
  CHECK(e.method == "GET");
  CHECK(e.path == "/a b c");
  CHECK(e.http_version == "HTTP/1.0");
}

TEST_CASE("trailing extra fields are ignored, glued text is not") {
  auto extra = parse_log_line(kSampleLine + " 1234");
  REQUIRE(extra.ok());
  CHECK(extra.value().user_agent == parse_ok(kSampleLine).user_agent);
  CHECK_FALSE(parse_log_line(kSampleLine + "x").ok());
}

TEST_CASE("out-of-range pieces are rejected") {
  auto mutate = [](const std::string& from, const std::string& to) {
    std::string line = kSampleLine;
    size_t at = line.find(from);
    REQUIRE(at != std::string::npos);
    line.replace(at, from.size(), to);
    return parse_log_line(line);
  };
  CHECK_FALSE(mutate(" 200 ", " 600 ").ok());
  CHECK_FALSE(mutate(" 200 ", " 99 ").ok());
  CHECK_FALSE(mutate(" 200 ", " OK ").ok());
  CHECK_FALSE(mutate(" 238 ", " -5 ").ok());
  CHECK_FALSE(mutate(" 238 ", " many ").ok());
  CHECK_FALSE(mutate("13/Nov/2020", "13/Nop/2020").ok());
  CHECK_FALSE(mutate("+0000", "@0000").ok());
}

TEST_CASE("memento kinds are classified from the request path") {
  EndpointConfig endpoints;
  auto classify = [&](std::string path) {
    LogEntry e;
    e.path = std::move(path);
    return classify_request(e, endpoints);
  };

  auto timemap = classify("/wayback/timemap/*/http://matkelly.com/wail");
  CHECK(timemap.kind == RequestKind::UriT);
  CHECK(timemap.urir == "http://matkelly.com/wail");

  auto link = classify("/wayback/timemap/link/http://example.com/");
  CHECK(link.kind == RequestKind::UriT);
  CHECK(link.urir == "http://example.com/");

  auto memento = classify("/wayback/19961013180344/http://example.com/");
  CHECK(memento.kind == RequestKind::UriM);
  CHECK(memento.request_datetime == "19961013180344");
  CHECK(memento.urir == "http://example.com/");

  // Replay modifiers between the digits and the slash.
  auto modified = classify("/wayback/19961013180344js_/http://example.com/");
  CHECK(modified.kind == RequestKind::UriM);
  CHECK(modified.request_datetime == "19961013180344");
  CHECK(modified.urir == "http://example.com/");

  auto timegate = classify("/wayback/http://example.com/x");
  CHECK(timegate.kind == RequestKind::UriG);
  CHECK(timegate.urir == "http://example.com/x");

  CHECK(classify("/favicon.ico").kind == RequestKind::NonMemento);
  CHECK(classify("/wayback/css/app.css").kind == RequestKind::NonMemento);
  CHECK(classify("/wayback/timemap/*/").kind == RequestKind::NonMemento);
  // 13 digits is not a memento datetime.
  CHECK(classify("/wayback/1996101318034/http://e.com/").kind ==
        RequestKind::NonMemento);
}

TEST_CASE("custom endpoint prefixes replace the defaults") {
  EndpointConfig endpoints;
  endpoints.timemap_prefixes = {"/tm/"};
  endpoints.replay_prefix = "/web/";
  endpoints.timegate_prefix = "/web/";

  LogEntry e;
  e.path = "/tm/http://a.example/";
  CHECK(classify_request(e, endpoints).kind == RequestKind::UriT);
  e.path = "/wayback/timemap/link/http://a.example/";
  CHECK(classify_request(e, endpoints).kind == RequestKind::NonMemento);
  e.path = "/web/20190101000000/http://a.example/";
  CHECK(classify_request(e, endpoints).kind == RequestKind::UriM);
}

TEST_CASE("kind names round-trip") {
  for (RequestKind k : {RequestKind::NonMemento, RequestKind::UriM,
                        RequestKind::UriG, RequestKind::UriT}) {
    auto back = kind_from_name(kind_name(k));
    REQUIRE(back.has_value());
    CHECK(*back == k);
  }
  CHECK_FALSE(kind_from_name("URI-X").has_value());
}
