#include <doctest.h>

#include <sstream>

#include "huffkit/csv.hpp"
#include "huffkit/errors.hpp"

using namespace huffkit;

TEST_SUITE("csv") {

TEST_CASE("reads header and rows, tracks row numbers") {
    std::istringstream in("a,b,c\n1,2,3\nx,,z\r\n");
    CsvReader r(in);
    CHECK(r.header() == std::vector<std::string>{"a", "b", "c"});
    CHECK(r.column("b") == 1);
    CHECK(r.column("missing") == static_cast<std::size_t>(-1));

    std::vector<std::string> f;
    REQUIRE(r.next(f));
    CHECK(f == std::vector<std::string>{"1", "2", "3"});
    CHECK(r.row_number() == 1);
    REQUIRE(r.next(f));
    CHECK(f == std::vector<std::string>{"x", "", "z"});
    CHECK(r.row_number() == 2);
    CHECK_FALSE(r.next(f));
}

TEST_CASE("quoted fields with commas and doubled quotes") {
    std::istringstream in("id,name\n1,\"a,b\"\n2,\"say \"\"hi\"\"\"\n");
    CsvReader r(in);
    std::vector<std::string> f;
    REQUIRE(r.next(f));
    CHECK(f[1] == "a,b");
    REQUIRE(r.next(f));
    CHECK(f[1] == "say \"hi\"");
}

TEST_CASE("blank lines are skipped") {
    std::istringstream in("a\n\n1\n\n2\n");
    CsvReader r(in);
    std::vector<std::string> f;
    REQUIRE(r.next(f));
    CHECK(f[0] == "1");
    REQUIRE(r.next(f));
    CHECK(f[0] == "2");
    CHECK_FALSE(r.next(f));
}

TEST_CASE("empty input throws schema error") {
    std::istringstream in("");
    CHECK_THROWS_AS(CsvReader{in}, SchemaError);
}

TEST_CASE("unterminated quote throws") {
    std::vector<std::string> out;
    CHECK_THROWS_AS(split_csv_line("\"abc", out), ValidationError);
}

TEST_CASE("writer escapes exactly the fields that need it") {
    std::ostringstream out;
    CsvWriter w(out);
    w.write_row({"plain", "with,comma", "with\"quote"});
    CHECK(out.str() == "plain,\"with,comma\",\"with\"\"quote\"\n");
}

TEST_CASE("writer and reader round-trip") {
    std::ostringstream out;
    CsvWriter w(out);
    w.write_row({"a", "b"});
    w.write_row({"1,2", "\"x\""});
    std::istringstream in(out.str());
    CsvReader r(in);
    std::vector<std::string> f;
    REQUIRE(r.next(f));
    CHECK(f == std::vector<std::string>{"1,2", "\"x\""});
}

}  // TEST_SUITE
