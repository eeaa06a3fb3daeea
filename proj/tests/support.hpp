#pragma once

// Shared fixtures for the test suite: scratch directories, small field and
// grid builders, and a deterministic RNG wrapper independent of the library's
// synth module.

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>

#include "vlmtie/point_field.hpp"
#include "vlmtie/raster_grid.hpp"

namespace testsupport {

/// Unique scratch directory under the system temp dir; removed on destruction.
class ScratchDir {
public:
    explicit ScratchDir(const std::string& tag) {
        static std::uint64_t counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("vlmtie_test_" + tag + "_" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~ScratchDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    ScratchDir(const ScratchDir&) = delete;
    ScratchDir& operator=(const ScratchDir&) = delete;

    std::string file(const std::string& name) const { return (path_ / name).string(); }
    std::string dir() const { return path_.string(); }

private:
    std::filesystem::path path_;
};

/// Mersenne-twister helpers for test data (distinct from the library RNG).
class TestRng {
public:
    explicit TestRng(std::uint64_t seed) : engine_(seed) {}
    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(engine_);
    }
    double normal(double sigma) {
        return std::normal_distribution<double>(0.0, sigma)(engine_);
    }
    std::uint64_t integer(std::uint64_t n) {
        return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(engine_);
    }

private:
    std::mt19937_64 engine_;
};

/// Scattered field with values from a callable value(lon, lat).
template <typename F>
vlmtie::VelocityField make_field(std::size_t n, double lon_lo, double lon_hi, double lat_lo,
                                 double lat_hi, std::uint64_t seed, F value) {
    TestRng rng(seed);
    vlmtie::VelocityField field;
    field.samples.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        vlmtie::PointSample s;
        s.id = static_cast<long long>(i);
        s.lon = rng.uniform(lon_lo, lon_hi);
        s.lat = rng.uniform(lat_lo, lat_hi);
        s.value = value(s.lon, s.lat);
        field.samples.push_back(s);
    }
    return field;
}

/// Raster whose cell (r, c) value comes from value(center_lon, center_lat).
template <typename F>
vlmtie::RasterGrid make_grid(std::size_t nrows, std::size_t ncols, double xll, double yll,
                             double cellsize, F value) {
    vlmtie::RasterGrid g;
    g.ncols = ncols;
    g.nrows = nrows;
    g.xll = xll;
    g.yll = yll;
    g.cellsize = cellsize;
    g.values.resize(nrows * ncols);
    for (std::size_t r = 0; r < nrows; ++r)
        for (std::size_t c = 0; c < ncols; ++c)
            g.values[r * ncols + c] = value(g.center_lon(c), g.center_lat(r));
    return g;
}

inline vlmtie::RasterGrid constant_grid(std::size_t nrows, std::size_t ncols, double xll,
                                        double yll, double cellsize, double v) {
    return make_grid(nrows, ncols, xll, yll, cellsize, [v](double, double) { return v; });
}

}  // namespace testsupport
