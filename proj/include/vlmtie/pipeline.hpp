#pragma once

#include <cstdint>
#include <vector>

#include "vlmtie/frame_fit.hpp"
#include "vlmtie/point_field.hpp"
#include "vlmtie/raster_grid.hpp"
#include "vlmtie/resample.hpp"

namespace vlmtie {

/// Oversampled model values and the difference field they produce, computed
/// once and shared across polynomial degrees.
struct FramePrep {
    OversampleResult oversample;
    DifferenceField diff;
};

FramePrep prepare_frame_tie(const VelocityField& local, const RasterGrid& global_model);

/// Result of tying one field to the global frame at one degree. Pixels the
/// oversampling could not resolve keep their local value and are flagged as
/// not corrected instead of being dropped.
struct TiedField {
    PolynomialModel model;
    VelocityField transformed;           ///< all pixels, frame tag global
    std::vector<double> correction;      ///< 0 where not corrected
    std::vector<std::uint8_t> corrected;
    std::vector<std::uint8_t> extrapolated;
    std::size_t excluded_count = 0;
};

TiedField tie_frame(const VelocityField& local, const FramePrep& prep, int degree);

/// Convenience: prepare + tie in one call.
TiedField tie_frame(const VelocityField& local, const RasterGrid& global_model, int degree);

}  // namespace vlmtie
