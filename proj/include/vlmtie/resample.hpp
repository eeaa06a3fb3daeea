#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "vlmtie/point_field.hpp"
#include "vlmtie/raster_grid.hpp"

namespace vlmtie {

/// Bilinear interpolation over the four surrounding cell centers.
/// Returns nullopt when the point lies outside the cell-center hull or any
/// of the four neighbors is nodata. Exact on fields affine in lon/lat.
std::optional<double> bilinear_sample(const RasterGrid& grid, double lon, double lat);

enum class ExcludeReason { out_of_hull, nodata_neighbor };

struct OversampleResult {
    std::vector<long long> ids;        ///< resolvable pixels, field order
    std::vector<double> model_values;  ///< aligned with ids
    std::vector<std::pair<long long, ExcludeReason>> excluded;
};

/// Samples the coarse model grid at every pixel of the field. Unresolvable
/// pixels are listed with a reason. Throws EmptyOverlapError when nothing
/// resolves. Parallel over pixels; results independent of thread count.
OversampleResult oversample_model(const RasterGrid& grid, const VelocityField& field);

struct DifferenceEntry {
    long long id = 0;
    double lon = 0.0;
    double lat = 0.0;
    double delta = 0.0;  ///< model - local, mm/yr
};

/// Per-pixel difference the polynomial models fit. delta = model - local, so
/// that adding the fitted surface back moves the field toward the global
/// frame. entries + excluded_count always reconciles with the source field.
struct DifferenceField {
    std::vector<DifferenceEntry> entries;
    std::size_t excluded_count = 0;
};

/// Throws ValueError when the oversample result does not align with the field.
DifferenceField difference_field(const VelocityField& field, const OversampleResult& model);

}  // namespace vlmtie
