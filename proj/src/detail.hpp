#pragma once

// Per-item kernels shared by the OpenMP front-line implementations and the
// serial reference implementations (vlmtie::reference). Keeping one copy of
// the arithmetic is what makes the bit-for-bit equivalence guarantee hold.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <utility>

#include "vlmtie/frame_fit.hpp"
#include "vlmtie/gnss.hpp"
#include "vlmtie/point_field.hpp"
#include "vlmtie/raster_grid.hpp"
#include "vlmtie/resample.hpp"
#include "vlmtie/validation.hpp"

namespace vlmtie::detail {

inline constexpr double kDegToRad = std::numbers::pi / 180.0;

/// Sample outcome codes used by the oversampling kernels.
enum class SampleStatus : std::uint8_t { ok = 0, out_of_hull = 1, nodata_neighbor = 2 };

/// Single-pixel bilinear kernel; the status distinguishes the two failure
/// modes that bilinear_sample() collapses into nullopt.
inline SampleStatus bilinear_at(const RasterGrid& g, double lon, double lat, double& out) {
    // Continuous cell-center coordinates: u along columns, v along rows
    // counted from the south.
    double u = (lon - g.xll) / g.cellsize - 0.5;
    double v = (lat - g.yll) / g.cellsize - 0.5;
    const double umax = static_cast<double>(g.ncols - 1);
    const double vmax = static_cast<double>(g.nrows - 1);
    // Queries at exact cell centers can land an ulp outside the hull because
    // the centers themselves are computed in degrees; snap those back in.
    const double eps = 1e-9;
    if (u < 0.0 && u > -eps) u = 0.0;
    if (v < 0.0 && v > -eps) v = 0.0;
    if (u > umax && u < umax + eps) u = umax;
    if (v > vmax && v < vmax + eps) v = vmax;
    if (!(u >= 0.0 && u <= umax && v >= 0.0 && v <= vmax)) return SampleStatus::out_of_hull;

    std::size_t i0 = static_cast<std::size_t>(u);
    std::size_t j0 = static_cast<std::size_t>(v);
    if (i0 > g.ncols - 2) i0 = g.ncols - 2;
    if (j0 > g.nrows - 2) j0 = g.nrows - 2;
    const double fx = u - static_cast<double>(i0);
    const double fy = v - static_cast<double>(j0);

    // j counts rows from the south; storage is north row first.
    const std::size_t r0 = g.nrows - 1 - j0;        // southern pair
    const std::size_t r1 = g.nrows - 2 - j0;        // northern pair
    const double v00 = g.at(r0, i0), v10 = g.at(r0, i0 + 1);
    const double v01 = g.at(r1, i0), v11 = g.at(r1, i0 + 1);
    if (g.is_nodata(v00) || g.is_nodata(v10) || g.is_nodata(v01) || g.is_nodata(v11))
        return SampleStatus::nodata_neighbor;

    out = (1.0 - fy) * ((1.0 - fx) * v00 + fx * v10) + fy * ((1.0 - fx) * v01 + fx * v11);
    return SampleStatus::ok;
}

/// Evaluates a fitted model at one raw lon/lat point.
inline double eval_model_at(const PolynomialModel& model, double lon, double lat,
                            bool& extrapolated) {
    const auto [x1, x2] = model.norm.apply(lon, lat);
    extrapolated = std::abs(x1) > 1.0 || std::abs(x2) > 1.0;
    double row[10];
    design_row(x1, x2, model.degree, row);
    const int m = coeff_count(model.degree);
    double acc = 0.0;
    for (int j = 0; j < m; ++j) acc += row[j] * model.coeffs[static_cast<std::size_t>(j)];
    return acc;
}

/// Mean of field values within radius_m of one station (equirectangular
/// metric at the station latitude). Returns the pixel count; 0 = no pixel.
inline std::size_t collocate_station(const VelocityField& field, const GnssStation& st,
                                     double radius_m, double& mean_out) {
    const double coslat = std::cos(st.lat * kDegToRad);
    const double r2 = radius_m * radius_m;
    double sum = 0.0;
    std::size_t count = 0;
    for (const PointSample& p : field.samples) {
        const double dx = (p.lon - st.lon) * kMetersPerDegLon * coslat;
        const double dy = (p.lat - st.lat) * kMetersPerDegLat;
        if (dx * dx + dy * dy <= r2) {
            sum += p.value;
            ++count;
        }
    }
    if (count) mean_out = sum / static_cast<double>(count);
    return count;
}

/// Value of the nearest filled cell for one empty cell of a binned grid.
/// Distance is Euclidean in cell indices; ties break toward the smaller
/// (row, col), so the result does not depend on evaluation order.
inline double nearest_filled_value(const std::vector<std::uint8_t>& filled,
                                   const std::vector<double>& vals, std::size_t nrows,
                                   std::size_t ncols, std::size_t row, std::size_t col) {
    double best_d2 = 0.0;
    double best_val = 0.0;
    bool found = false;
    for (std::size_t r = 0; r < nrows; ++r) {
        const double dr = static_cast<double>(r) - static_cast<double>(row);
        for (std::size_t c = 0; c < ncols; ++c) {
            const std::size_t idx = r * ncols + c;
            if (!filled[idx]) continue;
            const double dc = static_cast<double>(c) - static_cast<double>(col);
            const double d2 = dr * dr + dc * dc;
            if (!found || d2 < best_d2) {
                best_d2 = d2;
                best_val = vals[idx];
                found = true;
            }
        }
    }
    return best_val;  // caller guarantees at least one filled cell
}

}  // namespace vlmtie::detail
