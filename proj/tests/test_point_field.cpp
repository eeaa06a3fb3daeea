#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <string>

#include "support.hpp"
#include "vlmtie/errors.hpp"
#include "vlmtie/point_field.hpp"

using namespace vlmtie;

namespace {
VelocityField parse_str(const std::string& body, bool has_incidence = false) {
    std::istringstream in(body);
    return parse_point_field(in, has_incidence);
}
}  // namespace

TEST_CASE("single row parses with value intact") {
    const auto f = parse_str("lon,lat,value\n-118.2,34.0,3.5\n");
    REQUIRE(f.samples.size() == 1);
    CHECK(f.samples[0].lon == -118.2);
    CHECK(f.samples[0].lat == 34.0);
    CHECK(f.samples[0].value == 3.5);
    CHECK(f.samples[0].id == 0);
    CHECK_FALSE(f.samples[0].incidence.has_value());
    CHECK(f.frame == FrameTag::local);
}

TEST_CASE("latitude of 95 is rejected naming the data row") {
    try {
        parse_str("lon,lat,value\n-118.2,95.0,3.5\n");
        FAIL("expected ValueError");
    } catch (const ValueError& e) {
        CHECK(std::string(e.what()).find("row 1") != std::string::npos);
    }
}

TEST_CASE("longitude domain is half-open at 180") {
    CHECK_NOTHROW(parse_str("lon,lat,value\n-180.0,0.0,1.0\n"));
    CHECK_THROWS_AS(parse_str("lon,lat,value\n180.0,0.0,1.0\n"), ValueError);
    CHECK_THROWS_AS(parse_str("lon,lat,value\n0.0,-90.5,1.0\n"), ValueError);
}

TEST_CASE("header is mandatory and validated") {
    CHECK_THROWS_AS(parse_str("-118.2,34.0,3.5\n"), ParseError);
    CHECK_THROWS_AS(parse_str("a,b,c\n1,2,3\n"), ParseError);
    // Case-insensitive header match.
    CHECK_NOTHROW(parse_str("LON,Lat,VALUE\n1.0,2.0,3.0\n"));
}

TEST_CASE("requesting an incidence column fails on a three-column file") {
    CHECK_THROWS_AS(parse_str("lon,lat,value\n1.0,2.0,3.0\n", true), ParseError);
    const auto f = parse_str("lon,lat,value,incidence\n1.0,2.0,3.0,35.0\n", true);
    REQUIRE(f.samples.size() == 1);
    CHECK(f.samples[0].incidence == 35.0);
}

TEST_CASE("empty table and malformed rows are rejected") {
    CHECK_THROWS_AS(parse_str("lon,lat,value\n"), ParseError);
    CHECK_THROWS_AS(parse_str("lon,lat,value\n1.0,2.0\n"), ParseError);
    CHECK_THROWS_AS(parse_str("lon,lat,value\n1.0,2.0,x\n"), ParseError);
    CHECK_THROWS_AS(parse_str("lon,lat,value\n1.0,2.0,nan\n"), ValueError);
    CHECK_THROWS_AS(parse_str("lon,lat,value,incidence\n1.0,2.0,3.0,90.0\n"), ValueError);
}

TEST_CASE("10000 generated rows parse with sequential ids") {
    std::string body = "lon,lat,value\n";
    for (int i = 0; i < 10000; ++i) {
        char line[96];
        std::snprintf(line, sizeof line, "%.10g,%.10g,%.10g\n", -74.0 + i * 1e-5,
                      40.0 + i * 1e-5, std::sin(i * 0.1));
        body += line;
    }
    const auto f = parse_str(body);
    REQUIRE(f.samples.size() == 10000);
    for (std::size_t i = 0; i < f.samples.size(); ++i)
        CHECK(f.samples[i].id == static_cast<long long>(i));
}

TEST_CASE("write/parse round trip is value-identical") {
    testsupport::ScratchDir tmp("pf");
    auto field = testsupport::make_field(200, -74.3, -73.7, 40.5, 41.0, 7u,
                                         [](double lon, double lat) { return lon * lat / 3.0; });
    field.samples[0].value = 0.1;
    field.samples[1].value = 1.0 / 3.0;
    field.samples[2].value = -2.5e-308;

    SUBCASE("three columns") {
        save_point_field(tmp.file("f.csv"), field);
        const auto back = load_point_field(tmp.file("f.csv"));
        REQUIRE(back.samples.size() == field.samples.size());
        for (std::size_t i = 0; i < back.samples.size(); ++i) {
            CHECK(back.samples[i].lon == field.samples[i].lon);
            CHECK(back.samples[i].lat == field.samples[i].lat);
            CHECK(back.samples[i].value == field.samples[i].value);
            CHECK_FALSE(back.samples[i].incidence.has_value());
        }
    }

    SUBCASE("with incidence column") {
        for (auto& s : field.samples) s.incidence = 35.0 + 0.001 * static_cast<double>(s.id);
        save_point_field(tmp.file("fi.csv"), field);
        const auto back = load_point_field(tmp.file("fi.csv"), true);
        REQUIRE(back.samples.size() == field.samples.size());
        for (std::size_t i = 0; i < back.samples.size(); ++i) {
            REQUIRE(back.samples[i].incidence.has_value());
            CHECK(*back.samples[i].incidence == *field.samples[i].incidence);
        }
    }
}

TEST_CASE("serialising a partially populated incidence column fails") {
    VelocityField f;
    f.samples.push_back({0, -74.0, 40.6, 1.0, 30.0});
    f.samples.push_back({1, -74.1, 40.7, 2.0, std::nullopt});
    std::ostringstream out;
    CHECK_THROWS_AS(write_point_field(out, f), ValueError);
}

TEST_CASE("validate rejects duplicate ids") {
    VelocityField f;
    f.samples.push_back({5, -74.0, 40.6, 1.0, std::nullopt});
    f.samples.push_back({5, -74.1, 40.7, 2.0, std::nullopt});
    CHECK_THROWS_AS(f.validate(), ValueError);
    VelocityField empty;
    CHECK_THROWS_AS(empty.validate(), ValueError);
}

TEST_CASE("los_to_vertical divides by cos(incidence)") {
    VelocityField f;
    f.samples.push_back({0, -74.0, 40.6, 1.0, 0.0});
    SUBCASE("zero incidence is the identity") {
        const auto v = los_to_vertical(f);
        CHECK(v.samples[0].value == 1.0);
        CHECK(v.samples[0].incidence == 0.0);  // column is retained
        CHECK(v.frame == f.frame);
    }
    SUBCASE("60 degrees is rejected at the default guard, accepted when raised") {
        f.samples[0].incidence = 60.0;
        CHECK_THROWS_AS(los_to_vertical(f), ValueError);
        const auto v = los_to_vertical(f, 61.0);
        CHECK(v.samples[0].value == doctest::Approx(2.0).epsilon(1e-12));
    }
    SUBCASE("0.8 at 36.8699 degrees maps to 1.0") {
        f.samples[0].value = 0.8;
        f.samples[0].incidence = 36.8699;
        const auto v = los_to_vertical(f);
        CHECK(v.samples[0].value == doctest::Approx(1.0).epsilon(1e-6));
    }
    SUBCASE("missing incidence on any sample fails") {
        f.samples.push_back({1, -74.1, 40.7, 2.0, std::nullopt});
        CHECK_THROWS_AS(los_to_vertical(f), ValueError);
    }
}

TEST_CASE("los conversion is invertible by multiplying back") {
    auto field = testsupport::make_field(300, -74.3, -73.7, 40.5, 41.0, 11u,
                                         [](double lon, double lat) { return lon + 2.0 * lat; });
    testsupport::TestRng rng(13);
    for (auto& s : field.samples) s.incidence = rng.uniform(0.0, 59.9);
    const auto vertical = los_to_vertical(field);
    for (std::size_t i = 0; i < field.samples.size(); ++i) {
        const double inc = *field.samples[i].incidence;
        const double back = vertical.samples[i].value * std::cos(inc * std::numbers::pi / 180.0);
        CHECK(back == doctest::Approx(field.samples[i].value).epsilon(1e-12));
    }
}
