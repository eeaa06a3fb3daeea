#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "vlmtie/point_field.hpp"
#include "vlmtie/raster_grid.hpp"

namespace vlmtie {

/// Kilometers per degree used for wavelength axes; longitude spacing is
/// additionally scaled by cos(latitude).
inline constexpr double kKmPerDegLon = 111.320;
inline constexpr double kKmPerDegLat = 110.540;

/// Bins scattered samples onto a regular grid spanning their bounding box:
/// cell value = mean of the samples in the cell, empty cells filled from the
/// nearest nonempty cell. Throws DegenerateExtentError when the bounding box
/// has zero extent. The fill step is parallel over cells.
RasterGrid rasterize_points(const VelocityField& field, double cellsize_deg);

/// Grid ready for the FFT: demeaned and tapered by a separable Hann window.
struct PreparedGrid {
    std::size_t ncols = 0;
    std::size_t nrows = 0;
    double dx_km = 0.0;  ///< column spacing at the grid's mean latitude
    double dy_km = 0.0;
    std::vector<double> values;  ///< row-major
    double window_power = 0.0;   ///< sum of squared window weights
};

/// Requires a gap-free grid (throws ValueError on nodata cells).
PreparedGrid preprocess(const RasterGrid& grid);

struct PowerSpectrum {
    std::size_t ncols = 0;
    std::size_t nrows = 0;
    std::vector<double> power;  ///< |FFT|^2 / N, row-major
    std::vector<double> fx;     ///< signed frequency per column, cycles/km
    std::vector<double> fy;     ///< signed frequency per row, cycles/km
};

/// 2D periodogram of the prepared grid. Satisfies Parseval:
/// sum(power) == sum(values^2).
PowerSpectrum power_spectrum(const PreparedGrid& grid);

struct SpectrumBin {
    double wavelength_km = 0.0;
    double power = 0.0;
};

/// Radially averaged curve, ordered by increasing frequency, so wavelengths
/// are strictly decreasing. Powers are in [0,1] with max exactly 1 once
/// normalized.
struct SpectrumCurve {
    std::vector<SpectrumBin> bins;
    std::string field_label;
};

inline constexpr std::size_t kDefaultRadialBins = 24;

/// Isotropic reduction: |f| binned into logarithmically spaced bins, DC
/// excluded, bin power = mean of contributing cells, empty bins dropped.
SpectrumCurve radial_average(const PowerSpectrum& spectrum,
                             std::size_t n_bins = kDefaultRadialBins);

/// Divides by the maximum bin power. Throws ValueError on an all-zero curve.
SpectrumCurve normalize_spectrum(const SpectrumCurve& curve);

/// OLS slope of log10(power) versus log10(wavelength) over the bins inside
/// [wl_min_km, wl_max_km] with positive power. Needs >= 3 usable bins.
double spectral_slope(const SpectrumCurve& curve, double wl_min_km, double wl_max_km);

/// rasterize -> preprocess -> power_spectrum -> radial_average, unnormalized.
SpectrumCurve field_spectrum(const VelocityField& field, double cellsize_deg,
                             std::size_t n_bins = kDefaultRadialBins);

/// Mean |log10 Pa - log10 Pb| over the bins of a and b that share a
/// wavelength inside [wl_min_km, wl_max_km] and are positive in both curves.
/// The curves must come from identically gridded fields.
double band_log_distance(const SpectrumCurve& a, const SpectrumCurve& b, double wl_min_km,
                         double wl_max_km);

void write_spectrum_csv(std::ostream& out, const SpectrumCurve& curve, int sig_digits = 17);

/// Side-by-side CSV of several curves (wavelength_km, one power column per
/// label). Requires identical wavelength bins across the curves.
void write_spectrum_bundle_csv(std::ostream& out, std::span<const SpectrumCurve> curves,
                               int sig_digits = 17);

}  // namespace vlmtie
