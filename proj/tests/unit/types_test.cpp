#include <doctest.h>

#include "huffkit/types.hpp"

using namespace huffkit;

TEST_SUITE("types") {

TEST_CASE("money parses fixed-decimal strings exactly") {
    CHECK(parse_money("0").value() == 0);
    CHECK(parse_money("123").value() == 12300);
    CHECK(parse_money("123.4").value() == 12340);
    CHECK(parse_money("123.45").value() == 12345);
    CHECK(parse_money("0.01").value() == 1);
    CHECK(parse_money("-5.30").value() == -530);
    CHECK(parse_money("+7.00").value() == 700);
}

TEST_CASE("money rejects malformed and over-precise strings") {
    CHECK_FALSE(parse_money("").has_value());
    CHECK_FALSE(parse_money("-").has_value());
    CHECK_FALSE(parse_money(".5").has_value());
    CHECK_FALSE(parse_money("1.").has_value());
    CHECK_FALSE(parse_money("1.234").has_value());  // sub-cent precision
    CHECK_FALSE(parse_money("12a.50").has_value());
    CHECK_FALSE(parse_money("1,200").has_value());
    CHECK_FALSE(parse_money("1e3").has_value());
    CHECK_FALSE(parse_money("1234567890123456").has_value());  // too wide
}

TEST_CASE("money formats with two decimals") {
    CHECK(format_money(0) == "0.00");
    CHECK(format_money(12345) == "123.45");
    CHECK(format_money(-530) == "-5.30");
    CHECK(format_money(7) == "0.07");
}

TEST_CASE("timestamps parse and round-trip") {
    CHECK(parse_timestamp("1970-01-01T00:00:00").value() == 0);
    CHECK(parse_timestamp("1970-01-02").value() == 86400);
    CHECK(parse_timestamp("2019-01-01T00:00:00").value() == 1546300800);
    CHECK(parse_timestamp("2019-12-31T23:59:59").value() == 1577836799);
    CHECK(parse_timestamp("2020-02-29T12:00:00").has_value());   // leap day
    CHECK_FALSE(parse_timestamp("2019-02-29T12:00:00").has_value());
    CHECK_FALSE(parse_timestamp("2019-13-01T00:00:00").has_value());
    CHECK_FALSE(parse_timestamp("2019-01-01T24:00:00").has_value());
    CHECK_FALSE(parse_timestamp("not a date").has_value());
    CHECK_FALSE(parse_timestamp("").has_value());

    const std::int64_t t = parse_timestamp("2019-06-15T08:30:45Z").value();
    CHECK(format_timestamp(t) == "2019-06-15T08:30:45");
}

TEST_CASE("natural ordering sorts numeric runs by value") {
    CHECK(natural_less("d2", "d10"));
    CHECK_FALSE(natural_less("d10", "d2"));
    CHECK(natural_less("d1", "d2"));
    CHECK(natural_less("c9", "d1"));
    CHECK(natural_less("m1x2", "m1x10"));
    CHECK_FALSE(natural_less("a", "a"));
    CHECK(natural_less("a", "ab"));
    // zero-padded ties stay deterministic
    CHECK(natural_less("d01", "d1") != natural_less("d1", "d01"));
}

TEST_CASE("geo point validity") {
    CHECK(geo_point_valid({40.0, 29.0}));
    CHECK(geo_point_valid({-90.0, 180.0}));
    CHECK_FALSE(geo_point_valid({90.5, 0.0}));
    CHECK_FALSE(geo_point_valid({0.0, -180.5}));
}

TEST_CASE("dataset index rebuild maps ids to rows") {
    Dataset ds;
    ds.customers.push_back({.customer_id = "c2"});
    ds.customers.push_back({.customer_id = "c1"});
    ds.merchants.push_back({.merchant_id = "m7"});
    ds.rebuild_indexes();
    CHECK(ds.customer_index.at("c1") == 1);
    CHECK(ds.customer_index.at("c2") == 0);
    CHECK(ds.merchant_index.at("m7") == 0);
}

}  // TEST_SUITE
