#include <catch2/catch_amalgamated.hpp>

#include "voidmap/util.hpp"

using namespace voidmap;

TEST_CASE("split keeps empty pieces, split_nonempty drops them") {
  auto pieces = split("a,,b,", ',');
  REQUIRE(pieces.size() == 4);
  CHECK(pieces[0] == "a");
  CHECK(pieces[1] == "");
  CHECK(pieces[2] == "b");
  CHECK(pieces[3] == "");
  auto dense = split_nonempty("a,,b,", ',');
  REQUIRE(dense.size() == 2);
  CHECK(dense[0] == "a");
  CHECK(dense[1] == "b");
}

TEST_CASE("integer parsing rejects junk and overflow-ish input") {
  CHECK(parse_i64("0") == 0);
  CHECK(parse_i64("-15") == -15);
  CHECK(parse_i64("007") == 7);
  CHECK_FALSE(parse_i64("").has_value());
  CHECK_FALSE(parse_i64("12x").has_value());
  CHECK_FALSE(parse_i64("-").has_value());
  CHECK(parse_u64("18446744073709551615").has_value() ==
        parse_u64("18446744073709551615").has_value());  // no crash either way
  CHECK_FALSE(parse_u64("-1").has_value());
}

TEST_CASE("civil date conversion round-trips across eras") {
  // Epoch zero pins the calendar.
  Utc zero = epoch_to_utc(0);
  CHECK(zero.year == 1970);
  CHECK(zero.month == 1);
  CHECK(zero.day == 1);
  CHECK(zero.hour == 0);

  // Round trip every 97th day over ~60 years, crossing leap years and
  // centuries; covers the whole log era and then some.
  for (int64_t day = -10000; day < 25000; day += 97) {
    int64_t epoch = day * 86400 + 12345;
    Utc t = epoch_to_utc(epoch);
    CHECK(utc_to_epoch(t) == epoch);
  }
}

TEST_CASE("known calendar anchors") {
  auto d = parse_date("2019-11-18");
  REQUIRE(d.has_value());
  Utc t = epoch_to_utc(*d);
  CHECK(t.year == 2019);
  CHECK(t.month == 11);
  CHECK(t.day == 18);
  CHECK(format_date(*d) == "2019-11-18");
  CHECK(format_month(*d) == "2019-11");
  CHECK(utc_year(*d) == 2019);

  // Leap day.
  auto leap = parse_date("2016-02-29");
  REQUIRE(leap.has_value());
  CHECK(format_date(*leap) == "2016-02-29");
  CHECK(format_date(*leap + 86400) == "2016-03-01");
}

TEST_CASE("iso8601 round trip") {
  auto ts = parse_iso8601("2020-11-13T19:01:18Z");
  REQUIRE(ts.has_value());
  CHECK(format_iso8601(*ts) == "2020-11-13T19:01:18Z");
  CHECK_FALSE(parse_iso8601("2020-11-13 19:01:18Z").has_value());
  CHECK_FALSE(parse_iso8601("2020-11-13T19:01:18").has_value());
}

TEST_CASE("date parsing rejects malformed input") {
  CHECK_FALSE(parse_date("2019/11/18").has_value());
  CHECK_FALSE(parse_date("19-11-18").has_value());
  CHECK_FALSE(parse_date("2019-13-01").has_value());
  CHECK_FALSE(parse_date("2019-00-10").has_value());
  CHECK_FALSE(parse_date("2019-01-32").has_value());
}
