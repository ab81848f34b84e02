#include <catch_amalgamated.hpp>
#include <cmath>
#include <cstdlib>
#include <random>
#include <sstream>

#include "bqst/io.hpp"

using namespace bqst;

TEST_CASE("format_double is short, exact where possible, capped at 12 digits", "[io]") {
    REQUIRE(format_double(0.0) == "0");
    REQUIRE(format_double(1.0) == "1");
    REQUIRE(format_double(-1.0) == "-1");
    REQUIRE(format_double(0.5) == "0.5");
    REQUIRE(format_double(0.25) == "0.25");
    REQUIRE(format_double(100000.0) == "1e+05");
    REQUIRE(format_double(1.0 / 3.0) == "0.333333333333");
    REQUIRE(format_double(0.1) == "0.1");

    std::mt19937_64 gen(5);
    for (int i = 0; i < 1000; ++i) {
        const double v =
            (static_cast<double>(gen() >> 11) * 0x1.0p-53 - 0.5) * std::pow(10.0, int(gen() % 8) - 4);
        const std::string s = format_double(v);
        REQUIRE(s.size() <= 19);
        const double back = std::strtod(s.c_str(), nullptr);
        REQUIRE(std::abs(back - v) <= 1e-11 * std::max(1.0, std::abs(v)));
    }
}

TEST_CASE("csv writer emits LF rows and hash comments", "[io]") {
    std::ostringstream os;
    CsvWriter csv(os);
    csv.comment("meta alpha=1");
    csv.row({"a", "b"});
    csv.row({"1", "2.5"});
    REQUIRE(os.str() == "# meta alpha=1\na,b\n1,2.5\n");
    REQUIRE(os.str().find('\r') == std::string::npos);
}

TEST_CASE("json writer produces deterministic, escaped documents", "[io]") {
    std::ostringstream os;
    JsonWriter j(os);
    j.begin_object();
    j.key("schema_version").value(1);
    j.key("name").value("line\nbreak \"quoted\"");
    j.key("values").begin_array().value(1.5).value(true).begin_array().value(2).end_array().end_array();
    j.key("nested").begin_object().key("pi").value(3.14159).end_object();
    j.end_object();
    REQUIRE(os.str() ==
            "{\"schema_version\":1,\"name\":\"line\\nbreak \\\"quoted\\\"\","
            "\"values\":[1.5,true,[2]],\"nested\":{\"pi\":3.14159}}");
}
