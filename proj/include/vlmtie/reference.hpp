#pragma once

#include "vlmtie/frame_fit.hpp"
#include "vlmtie/resample.hpp"
#include "vlmtie/spectral.hpp"
#include "vlmtie/validation.hpp"

// Serial reference implementations of the OpenMP kernels: plain loops kept
// for equivalence tests and for the benchmark. Results must match the
// parallel versions bit for bit.
namespace vlmtie::reference {

OversampleResult oversample_model(const RasterGrid& grid, const VelocityField& field);

PolyEval evaluate_polynomial(const PolynomialModel& model, std::span<const double> lons,
                             std::span<const double> lats);

CollocationResult collocate(const VelocityField& field, const GnssStationSet& gnss,
                            double radius_m = kDefaultRadiusM);

RasterGrid rasterize_points(const VelocityField& field, double cellsize_deg);

}  // namespace vlmtie::reference
