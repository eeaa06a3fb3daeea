#include <doctest.h>

#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "oracles.hpp"
#include "support.hpp"
#include "vlmtie/errors.hpp"
#include "vlmtie/validation.hpp"

using namespace vlmtie;

namespace {

GnssStation station(const std::string& id, double lon, double lat, double vu) {
    return {id, lon, lat, vu, 0.1, 10.0};
}

/// Brute-force collocation with the spec's equirectangular distance.
std::vector<CollocationPair> brute_collocate(const VelocityField& field,
                                             const GnssStationSet& gnss, double radius_m) {
    std::vector<CollocationPair> out;
    for (const auto& st : gnss.stations) {
        const double coslat = std::cos(st.lat * std::numbers::pi / 180.0);
        double sum = 0.0;
        std::size_t count = 0;
        for (const auto& s : field.samples) {
            const double dx = (s.lon - st.lon) * kMetersPerDegLon * coslat;
            const double dy = (s.lat - st.lat) * kMetersPerDegLat;
            if (dx * dx + dy * dy <= radius_m * radius_m) {
                sum += s.value;
                ++count;
            }
        }
        if (count > 0) out.push_back({st.id, st.vu, sum / double(count), count});
    }
    return out;
}

}  // namespace

TEST_CASE("a three-pixel cluster collocates to its mean") {
    VelocityField f;
    f.samples.push_back({0, -74.0, 40.6002, 1.0, std::nullopt});   // ~22 m north
    f.samples.push_back({1, -74.0002, 40.6, 2.0, std::nullopt});   // ~17 m west
    f.samples.push_back({2, -74.0, 40.5998, 3.0, std::nullopt});   // ~22 m south
    GnssStationSet g;
    g.stations.push_back(station("A", -74.0, 40.6, 0.5));
    const auto r = collocate(f, g, 100.0);
    REQUIRE(r.pairs.size() == 1);
    CHECK(r.pairs[0].station_id == "A");
    CHECK(r.pairs[0].pixel_count == 3);
    CHECK(r.pairs[0].insar_mean == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(r.pairs[0].gnss_vu == 0.5);
    CHECK(r.excluded_stations == 0);
}

TEST_CASE("a station 500 m from every pixel is excluded") {
    VelocityField f;
    f.samples.push_back({0, -74.0, 40.6, 1.0, std::nullopt});
    GnssStationSet g;
    g.stations.push_back(station("NEAR", -74.0, 40.6001, 2.0));
    g.stations.push_back(station("FAR", -74.0, 40.6 + 500.0 / kMetersPerDegLat, 2.0));
    const auto r = collocate(f, g, 100.0);
    REQUIRE(r.pairs.size() == 1);
    CHECK(r.pairs[0].station_id == "NEAR");
    CHECK(r.excluded_stations == 1);
}

TEST_CASE("no collocation at all raises EmptyCollocationError") {
    VelocityField f;
    f.samples.push_back({0, -74.0, 40.6, 1.0, std::nullopt});
    GnssStationSet g;
    g.stations.push_back(station("FAR", -70.0, 42.0, 2.0));
    CHECK_THROWS_AS(collocate(f, g, 100.0), EmptyCollocationError);
    GnssStationSet empty;
    CHECK_THROWS_AS(collocate(f, empty, 100.0), EmptyCollocationError);
}

TEST_CASE("collocation matches the brute-force scan on scattered data") {
    const auto f = testsupport::make_field(3000, -74.05, -73.95, 40.55, 40.65, 61u,
                                           [](double lon, double lat) {
                                               return std::sin(100.0 * lon) + lat;
                                           });
    GnssStationSet g;
    testsupport::TestRng rng(67);
    for (int i = 0; i < 20; ++i)
        g.stations.push_back(station("S" + std::to_string(i), rng.uniform(-74.05, -73.95),
                                     rng.uniform(40.55, 40.65), rng.uniform(-2.0, 2.0)));
    const auto got = collocate(f, g, 100.0);
    const auto want = brute_collocate(f, g, 100.0);
    REQUIRE(got.pairs.size() == want.size());
    for (std::size_t i = 0; i < want.size(); ++i) {
        CHECK(got.pairs[i].station_id == want[i].station_id);
        CHECK(got.pairs[i].pixel_count == want[i].pixel_count);
        CHECK(got.pairs[i].insar_mean == want[i].insar_mean);  // same summation order
    }
    CHECK(got.excluded_stations == g.size() - want.size());
}

TEST_CASE("radius boundary splits a hair inside from a hair outside") {
    VelocityField f;
    f.samples.push_back({0, -74.0, 40.6, 1.0, std::nullopt});
    GnssStationSet g;
    const double just_in = 100.0 * (1.0 - 1e-7) / kMetersPerDegLat;
    const double just_out = 100.0 * (1.0 + 1e-7) / kMetersPerDegLat;
    g.stations.push_back(station("IN", -74.0, 40.6 - just_in, 0.0));
    g.stations.push_back(station("OUT", -74.0, 40.6 - just_out, 0.0));
    const auto r = collocate(f, g, 100.0);
    REQUIRE(r.pairs.size() == 1);
    CHECK(r.pairs[0].station_id == "IN");
    CHECK(r.excluded_stations == 1);
    CHECK_THROWS_AS(collocate(f, g, 0.0), ValueError);
}

TEST_CASE("residual metrics on a hand-checked pair") {
    std::vector<CollocationPair> pairs;
    pairs.push_back({"A", 0.0, 1.0, 1});
    pairs.push_back({"B", 0.0, -1.0, 1});
    const auto m = residual_metrics(pairs);
    CHECK(m.rmse == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(m.mae == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(m.std_dev == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("identical residuals have zero spread") {
    std::vector<CollocationPair> pairs;
    for (int i = 0; i < 5; ++i) pairs.push_back({"S" + std::to_string(i), 0.0, 0.5, 1});
    const auto m = residual_metrics(pairs);
    CHECK(m.rmse == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(m.mae == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(m.std_dev == 0.0);
}

TEST_CASE("metrics require two pairs") {
    std::vector<CollocationPair> one{{"A", 0.0, 1.0, 1}};
    CHECK_THROWS_AS(residual_metrics(one), ValueError);
}

TEST_CASE("metrics match brute recomputation on 1000 random sets") {
    testsupport::TestRng rng(71);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 2 + rng.integer(60);
        std::vector<CollocationPair> pairs;
        std::vector<double> residuals;
        for (std::size_t i = 0; i < n; ++i) {
            const double vu = rng.uniform(-5.0, 5.0);
            const double mean = rng.uniform(-5.0, 5.0);
            pairs.push_back({"S" + std::to_string(i), vu, mean, 1});
            residuals.push_back(mean - vu);
        }
        const auto m = residual_metrics(pairs);
        CHECK(m.rmse == doctest::Approx(oracle::brute_rmse(residuals)).epsilon(1e-12));
        CHECK(m.mae == doctest::Approx(oracle::brute_mae(residuals)).epsilon(1e-12));
        CHECK(m.std_dev == doctest::Approx(oracle::brute_std(residuals)).epsilon(1e-12));
    }
}

TEST_CASE("information criteria on a hand-checked case") {
    // n = 10, RSS = 10, m = 3: aic = 10 ln(1) + 6 = 6, bic = 3 ln(10).
    std::vector<CollocationPair> pairs;
    for (int i = 0; i < 10; ++i) pairs.push_back({"S" + std::to_string(i), 0.0, 1.0, 1});
    const auto ic = information_criteria(pairs, 3);
    CHECK(ic.aic == doctest::Approx(6.0).epsilon(1e-12));
    CHECK(ic.bic == doctest::Approx(3.0 * std::log(10.0)).epsilon(1e-12));

    const auto ic6 = information_criteria(pairs, 6);
    CHECK(ic6.aic - ic.aic == doctest::Approx(6.0).epsilon(1e-12));
    CHECK(ic6.bic - ic.bic == doctest::Approx(3.0 * std::log(10.0)).epsilon(1e-12));
}

TEST_CASE("zero RSS degenerates to -inf, not an error") {
    std::vector<CollocationPair> pairs;
    for (int i = 0; i < 10; ++i) pairs.push_back({"S" + std::to_string(i), 1.0, 1.0, 1});
    const auto ic = information_criteria(pairs, 3);
    CHECK(std::isinf(ic.aic));
    CHECK(ic.aic < 0.0);
    CHECK(std::isinf(ic.bic));
    CHECK(ic.bic < 0.0);
}

TEST_CASE("criteria match brute recomputation on random residuals") {
    testsupport::TestRng rng(73);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + rng.integer(50);
        const int m = 1 + static_cast<int>(rng.integer(10));
        std::vector<CollocationPair> pairs;
        std::vector<double> residuals;
        for (std::size_t i = 0; i < n; ++i) {
            const double vu = rng.uniform(-3.0, 3.0);
            const double mean = vu + rng.uniform(-1.0, 1.0);
            pairs.push_back({"S" + std::to_string(i), vu, mean, 1});
            residuals.push_back(mean - vu);
        }
        const auto ic = information_criteria(pairs, m);
        CHECK(ic.aic == doctest::Approx(oracle::brute_aic(residuals, m)).epsilon(1e-12));
        CHECK(ic.bic == doctest::Approx(oracle::brute_bic(residuals, m)).epsilon(1e-12));
    }
}

TEST_CASE("ecdf steps through distinct values") {
    const std::vector<double> v{3.0, 1.0, 2.0};
    const auto curve = ecdf(v);
    REQUIRE(curve.size() == 3);
    CHECK(curve[0].x == 1.0);
    CHECK(curve[0].f == doctest::Approx(1.0 / 3.0));
    CHECK(curve[1].x == 2.0);
    CHECK(curve[1].f == doctest::Approx(2.0 / 3.0));
    CHECK(curve[2].x == 3.0);
    CHECK(curve[2].f == 1.0);
    CHECK(ecdf_median(curve) == 2.0);
}

TEST_CASE("constant values give a single full step") {
    const std::vector<double> v{4.0, 4.0, 4.0};
    const auto curve = ecdf(v);
    REQUIRE(curve.size() == 1);
    CHECK(curve[0].x == 4.0);
    CHECK(curve[0].f == 1.0);
    CHECK(ecdf_median(curve) == 4.0);
}

TEST_CASE("ecdf agrees with direct counting and shifts exactly") {
    testsupport::TestRng rng(79);
    std::vector<double> v;
    for (int i = 0; i < 500; ++i) v.push_back(std::round(rng.uniform(-10.0, 10.0) * 4.0) / 4.0);
    const auto curve = ecdf(v);
    double prev = 0.0;
    for (const auto& p : curve) {
        CHECK(p.f == doctest::Approx(oracle::brute_ecdf_at(v, p.x)).epsilon(1e-15));
        CHECK(p.f > prev);
        prev = p.f;
    }
    CHECK(curve.back().f == 1.0);

    std::vector<double> shifted;
    for (double x : v) shifted.push_back(x + 1.8);
    const auto curve2 = ecdf(shifted);
    REQUIRE(curve2.size() == curve.size());
    for (std::size_t i = 0; i < curve.size(); ++i) {
        CHECK(curve2[i].x == doctest::Approx(curve[i].x + 1.8).epsilon(1e-12));
        CHECK(curve2[i].f == curve[i].f);
    }
    CHECK_THROWS_AS(ecdf(std::vector<double>{}), ValueError);
}

TEST_CASE("ecdf csv has the documented shape") {
    std::ostringstream out;
    write_ecdf_csv(out, ecdf(std::vector<double>{1.0, 2.0}));
    CHECK(out.str() == "value,cdf\n1,0.5\n2,1\n");
}

TEST_CASE("compare_models on a constant offset picks D1 and reports the drop") {
    // Stations sit exactly on pixels; transformed = local + 1.8 + jitter.
    auto local = testsupport::make_field(400, -74.3, -73.7, 40.5, 41.0, 83u,
                                         [](double lon, double lat) {
                                             return std::sin(6.0 * lon) + std::cos(4.0 * lat);
                                         });
    GnssStationSet gnss;
    testsupport::TestRng rng(89);
    for (int i = 0; i < 12; ++i) {
        const auto& px = local.samples[rng.integer(local.size())];
        gnss.stations.push_back(
            station("G" + std::to_string(i), px.lon, px.lat, px.value + 1.8));
    }
    std::map<int, VelocityField> transformed;
    for (int degree = 1; degree <= 3; ++degree) {
        VelocityField t = local;
        t.frame = FrameTag::global;
        testsupport::TestRng jitter(90);
        for (auto& s : t.samples) s.value += 1.8 + jitter.normal(1e-4);
        transformed[degree] = std::move(t);
    }
    const auto report = compare_models(local, transformed, gnss, 100.0);
    REQUIRE(report.rows.size() == 4);
    CHECK(report.rows[0].label == "Local InSAR");
    CHECK(report.rows[0].mae == doctest::Approx(1.8).epsilon(1e-3));
    CHECK_FALSE(report.rows[0].bic.has_value());
    CHECK(report.rows[1].label == "D1");
    CHECK(report.rows[1].mae < 1e-3);
    REQUIRE(report.rows[1].bic.has_value());
    REQUIRE(report.rows[2].bic.has_value());
    // Identical residuals at every degree: BIC must order by parameter count.
    CHECK(*report.rows[1].bic < *report.rows[2].bic);
    CHECK(report.selected == "D1");
    CHECK(report.n_stations == 12);
    CHECK(report.radius_m == 100.0);
    CHECK(report.rows[1].n_params == 3);
    CHECK(report.rows[3].n_params == 10);
}

TEST_CASE("adding a model does not change existing rows") {
    auto local = testsupport::make_field(200, -74.3, -73.7, 40.5, 41.0, 97u,
                                         [](double lon, double) { return 10.0 * lon; });
    GnssStationSet gnss;
    for (int i = 0; i < 6; ++i) {
        const auto& px = local.samples[static_cast<std::size_t>(i) * 30u];
        gnss.stations.push_back(station("G" + std::to_string(i), px.lon, px.lat, px.value - 0.3));
    }
    VelocityField t1 = local;
    for (auto& s : t1.samples) s.value -= 0.25;
    VelocityField t2 = local;
    for (auto& s : t2.samples) s.value -= 0.31;

    std::map<int, VelocityField> just_one{{1, t1}};
    std::map<int, VelocityField> both{{1, t1}, {2, t2}};
    const auto a = compare_models(local, just_one, gnss, 100.0);
    const auto b = compare_models(local, both, gnss, 100.0);
    REQUIRE(a.rows.size() == 2);
    REQUIRE(b.rows.size() == 3);
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(a.rows[i].rmse == b.rows[i].rmse);
        CHECK(a.rows[i].mae == b.rows[i].mae);
        CHECK(a.rows[i].std_dev == b.rows[i].std_dev);
    }
}

TEST_CASE("compare_models rejects misaligned inputs") {
    auto local = testsupport::make_field(50, -74.3, -73.7, 40.5, 41.0, 101u,
                                         [](double, double) { return 0.0; });
    GnssStationSet gnss;
    gnss.stations.push_back(station("A", local.samples[0].lon, local.samples[0].lat, 0.0));
    VelocityField bad = local;
    bad.samples[0].id = 999;
    CHECK_THROWS_AS(compare_models(local, {{1, bad}}, gnss, 100.0), ValueError);
    CHECK_THROWS_AS(compare_models(local, {{0, local}}, gnss, 100.0), ValueError);
    CHECK_THROWS_AS(compare_models(local, {{4, local}}, gnss, 100.0), ValueError);
    CHECK_THROWS_AS(compare_models(local, {}, gnss, 100.0), ValueError);
}

TEST_CASE("report json round trip preserves every value") {
    ModelReport r;
    r.rows.push_back({"Local InSAR", 1.8016, 1.8006, 0.0606, std::nullopt, std::nullopt,
                      std::nullopt});
    r.rows.push_back({"D1", 0.059, 0.0515, 0.0603, -107.2021, -104.21487, 3});
    r.n_stations = 20;
    r.radius_m = 100.0;
    r.selected = "D1";
    const auto back = report_from_json(report_to_json(r));
    REQUIRE(back.rows.size() == 2);
    CHECK(back.rows[0].label == "Local InSAR");
    CHECK_FALSE(back.rows[0].aic.has_value());
    CHECK(back.rows[1].rmse == r.rows[1].rmse);
    CHECK(back.rows[1].bic == r.rows[1].bic);
    CHECK(back.rows[1].n_params == 3);
    CHECK(back.n_stations == 20);
    CHECK(back.selected == "D1");
    CHECK_THROWS_AS(report_from_json(nlohmann::json::object()), ParseError);
}

TEST_CASE("report text carries the table layout and footer") {
    ModelReport r;
    r.rows.push_back({"Local InSAR", 1.8016, 1.8006, 0.0606, std::nullopt, std::nullopt,
                      std::nullopt});
    r.rows.push_back({"D1", 0.059, 0.0515, 0.0603, -107.2, -104.2, 3});
    r.n_stations = 20;
    r.radius_m = 100.0;
    r.selected = "D1";
    const std::string text = report_to_text(r);
    CHECK(text.find("Model") != std::string::npos);
    CHECK(text.find("RMSE") != std::string::npos);
    CHECK(text.find("BIC") != std::string::npos);
    CHECK(text.find("--") != std::string::npos);          // local row has no BIC
    CHECK(text.find("selected: D1 (lowest BIC)") != std::string::npos);
    CHECK(text.find("n_stations: 20") != std::string::npos);
}
