#include "vlmtie/reference.hpp"

#include <algorithm>
#include <string>

#include "detail.hpp"
#include "vlmtie/errors.hpp"
#include "vlmtie/util.hpp"

// Plain serial loops over the same per-item kernels the OpenMP versions use.
// Any divergence from the parallel results is a bug by definition; the
// equivalence tests compare both bit for bit.
namespace vlmtie::reference {

OversampleResult oversample_model(const RasterGrid& grid, const VelocityField& field) {
    if (field.size() == 0) throw ValueError("oversample: empty field");

    OversampleResult result;
    for (const PointSample& p : field.samples) {
        double v = 0.0;
        switch (detail::bilinear_at(grid, p.lon, p.lat, v)) {
            case detail::SampleStatus::ok:
                result.ids.push_back(p.id);
                result.model_values.push_back(v);
                break;
            case detail::SampleStatus::out_of_hull:
                result.excluded.emplace_back(p.id, ExcludeReason::out_of_hull);
                break;
            case detail::SampleStatus::nodata_neighbor:
                result.excluded.emplace_back(p.id, ExcludeReason::nodata_neighbor);
                break;
        }
    }
    if (result.ids.empty())
        throw EmptyOverlapError("no pixel overlaps the model grid (" +
                                std::to_string(field.size()) + " pixels, all excluded)");
    return result;
}

PolyEval evaluate_polynomial(const PolynomialModel& model, std::span<const double> lons,
                             std::span<const double> lats) {
    if (lons.size() != lats.size())
        throw ValueError("evaluate_polynomial: coordinate size mismatch");
    if (model.coeffs.size() != static_cast<std::size_t>(coeff_count(model.degree)))
        throw ValueError("evaluate_polynomial: coefficient count does not match degree");

    PolyEval out;
    out.values.resize(lons.size());
    out.extrapolated.resize(lons.size());
    for (std::size_t i = 0; i < lons.size(); ++i) {
        bool extrap = false;
        out.values[i] = detail::eval_model_at(model, lons[i], lats[i], extrap);
        out.extrapolated[i] = extrap ? 1 : 0;
    }
    return out;
}

CollocationResult collocate(const VelocityField& field, const GnssStationSet& gnss,
                            double radius_m) {
    if (field.samples.empty()) throw ValueError("collocate: empty field");
    if (gnss.stations.empty()) throw EmptyCollocationError("collocate: no gnss stations");
    if (!(radius_m > 0.0)) throw ValueError("collocate: radius must be > 0");

    CollocationResult result;
    for (const GnssStation& st : gnss.stations) {
        double mean = 0.0;
        const std::size_t count = detail::collocate_station(field, st, radius_m, mean);
        if (count == 0) {
            ++result.excluded_stations;
            continue;
        }
        result.pairs.push_back({st.id, st.vu, mean, count});
    }
    if (result.pairs.empty())
        throw EmptyCollocationError("no gnss station has a pixel within " +
                                    format_g(radius_m, 6) + " m");
    return result;
}

RasterGrid rasterize_points(const VelocityField& field, double cellsize_deg) {
    if (field.samples.empty()) throw ValueError("rasterize: empty field");
    if (!(cellsize_deg > 0.0)) throw ValueError("rasterize: cellsize must be > 0");

    double lon_min = field.samples[0].lon, lon_max = lon_min;
    double lat_min = field.samples[0].lat, lat_max = lat_min;
    for (const PointSample& s : field.samples) {
        lon_min = std::min(lon_min, s.lon);
        lon_max = std::max(lon_max, s.lon);
        lat_min = std::min(lat_min, s.lat);
        lat_max = std::max(lat_max, s.lat);
    }
    if (lon_max - lon_min <= 0.0 || lat_max - lat_min <= 0.0)
        throw DegenerateExtentError("rasterize: field bounding box has zero extent");

    RasterGrid grid;
    grid.cellsize = cellsize_deg;
    grid.xll = lon_min;
    grid.yll = lat_min;
    grid.ncols = std::max<std::size_t>(
        2, static_cast<std::size_t>(std::ceil((lon_max - lon_min) / cellsize_deg)));
    grid.nrows = std::max<std::size_t>(
        2, static_cast<std::size_t>(std::ceil((lat_max - lat_min) / cellsize_deg)));
    grid.values.assign(grid.ncols * grid.nrows, 0.0);

    std::vector<double> sums(grid.ncols * grid.nrows, 0.0);
    std::vector<std::size_t> counts(grid.ncols * grid.nrows, 0);
    for (const PointSample& s : field.samples) {
        auto col = static_cast<std::size_t>((s.lon - lon_min) / cellsize_deg);
        auto row_s = static_cast<std::size_t>((s.lat - lat_min) / cellsize_deg);
        if (col >= grid.ncols) col = grid.ncols - 1;
        if (row_s >= grid.nrows) row_s = grid.nrows - 1;
        const std::size_t idx = (grid.nrows - 1 - row_s) * grid.ncols + col;
        sums[idx] += s.value;
        ++counts[idx];
    }

    std::vector<std::uint8_t> filled(grid.ncols * grid.nrows, 0);
    for (std::size_t i = 0; i < sums.size(); ++i) {
        if (counts[i]) {
            grid.values[i] = sums[i] / static_cast<double>(counts[i]);
            filled[i] = 1;
        }
    }

    const std::vector<double> binned = grid.values;
    for (std::size_t r = 0; r < grid.nrows; ++r)
        for (std::size_t c = 0; c < grid.ncols; ++c)
            if (!filled[r * grid.ncols + c])
                grid.values[r * grid.ncols + c] =
                    detail::nearest_filled_value(filled, binned, grid.nrows, grid.ncols, r, c);
    return grid;
}

}  // namespace vlmtie::reference
