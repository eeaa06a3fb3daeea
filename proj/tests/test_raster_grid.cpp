#include <doctest.h>

#include <limits>
#include <sstream>
#include <string>

#include "support.hpp"
#include "vlmtie/errors.hpp"
#include "vlmtie/raster_grid.hpp"

using namespace vlmtie;

namespace {
RasterGrid parse_str(const std::string& body) {
    std::istringstream in(body);
    return parse_grid(in);
}
}  // namespace

TEST_CASE("2x2 constant grid parses with four fives") {
    const auto g = parse_str(
        "ncols 2\nnrows 2\nxllcorner -74.0\nyllcorner 40.0\ncellsize 0.5\n"
        "NODATA_value -9999\n5 5\n5 5\n");
    REQUIRE(g.values.size() == 4);
    for (double v : g.values) CHECK(v == 5.0);
    CHECK(g.ncols == 2);
    CHECK(g.nrows == 2);
    CHECK(g.cellsize == 0.5);
    CHECK(g.nodata == -9999.0);
}

TEST_CASE("row width mismatch is an error") {
    CHECK_THROWS_AS(parse_str("ncols 3\nnrows 2\nxllcorner 0\nyllcorner 0\ncellsize 1\n"
                              "1 2\n1 2 3\n"),
                    ParseError);
    CHECK_THROWS_AS(parse_str("ncols 2\nnrows 2\nxllcorner 0\nyllcorner 0\ncellsize 1\n"
                              "1 2 3\n1 2\n"),
                    ParseError);
}

TEST_CASE("row count is enforced both ways") {
    CHECK_THROWS_AS(
        parse_str("ncols 2\nnrows 3\nxllcorner 0\nyllcorner 0\ncellsize 1\n1 2\n3 4\n"),
        ParseError);
    CHECK_THROWS_AS(
        parse_str("ncols 2\nnrows 1\nxllcorner 0\nyllcorner 0\ncellsize 1\n1 2\n3 4\n"),
        ParseError);
}

TEST_CASE("header keys are case-insensitive, nodata defaults to -9999") {
    const auto g = parse_str(
        "NCOLS 2\nNROWS 2\nXLLCORNER -74.0\nYLLCORNER 40.0\nCELLSIZE 0.5\n1 2\n3 4\n");
    CHECK(g.nodata == -9999.0);
    CHECK(g.at(0, 0) == 1.0);
    CHECK_THROWS_AS(parse_str("ncols 2\nnrows 2\nxllcorner 0\nyllcorner 0\n1 2\n3 4\n"),
                    ParseError);  // cellsize missing
}

TEST_CASE("dimension and cellsize sanity checks") {
    CHECK_THROWS_AS(
        parse_str("ncols 2\nnrows 2\nxllcorner 0\nyllcorner 0\ncellsize 0\n1 2\n3 4\n"),
        ParseError);
    CHECK_THROWS_AS(
        parse_str("ncols 1\nnrows 5\nxllcorner 0\nyllcorner 0\ncellsize 1\n1\n1\n1\n1\n1\n"),
        ValueError);
    CHECK_THROWS_AS(
        parse_str("ncols 2.5\nnrows 2\nxllcorner 0\nyllcorner 0\ncellsize 1\n1 2\n3 4\n"),
        ParseError);
}

TEST_CASE("first data row is the northernmost") {
    const auto g = parse_str(
        "ncols 2\nnrows 2\nxllcorner -74.0\nyllcorner 40.0\ncellsize 0.5\n1 2\n3 4\n");
    CHECK(g.at(0, 0) == 1.0);
    CHECK(g.center_lat(0) == doctest::Approx(40.75));  // storage row 0 sits north
    CHECK(g.center_lat(1) == doctest::Approx(40.25));
    CHECK(g.center_lon(0) == doctest::Approx(-73.75));
    CHECK(g.mean_lat() == doctest::Approx(40.5));
}

TEST_CASE("nodata cells round-trip through write and parse") {
    testsupport::ScratchDir tmp("grid");
    auto g = testsupport::make_grid(5, 7, -74.0, 40.0, 0.05,
                                    [](double lon, double lat) { return lon * 2.0 + lat; });
    g.nodata = -12345.0;
    g.at(1, 2) = g.nodata;
    g.at(0, 0) = 1.0 / 3.0;
    save_grid(tmp.file("g.asc"), g);
    const auto back = load_grid(tmp.file("g.asc"));
    REQUIRE(back.values.size() == g.values.size());
    for (std::size_t i = 0; i < g.values.size(); ++i) CHECK(back.values[i] == g.values[i]);
    CHECK(back.is_nodata(back.at(1, 2)));
    CHECK(back.nodata == -12345.0);
    CHECK(back.xll == g.xll);
    CHECK(back.yll == g.yll);
    CHECK(back.cellsize == g.cellsize);
}

TEST_CASE("validate rejects non-finite payloads but allows nodata") {
    auto g = testsupport::constant_grid(2, 2, 0.0, 0.0, 1.0, 5.0);
    g.values[3] = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(g.validate(), ValueError);
    g.values[3] = g.nodata;
    CHECK_NOTHROW(g.validate());
}
