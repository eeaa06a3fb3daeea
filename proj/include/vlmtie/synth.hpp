#pragma once

#include <cstdint>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "vlmtie/frame_fit.hpp"
#include "vlmtie/gnss.hpp"
#include "vlmtie/point_field.hpp"
#include "vlmtie/raster_grid.hpp"

namespace vlmtie {

struct BoundingBox {
    double lon_min = 0.0;
    double lat_min = 0.0;
    double lon_max = 0.0;
    double lat_max = 0.0;

    double width() const { return lon_max - lon_min; }
    double height() const { return lat_max - lat_min; }
};

/// Smooth surface in graded monomial order over coordinates normalized to
/// the scenario domain (center at the domain midpoint, scaled by the half
/// extents). Empty coeffs = no surface.
struct PolySurface {
    int degree = 1;
    std::vector<double> coeffs;

    bool empty() const { return coeffs.empty(); }
};

/// Everything needed to generate a scenario deterministically. All randomness
/// derives from the seed via mt19937_64 with explicit uniform/Box-Muller
/// mappings, so identical specs give bit-identical scenarios anywhere.
struct ScenarioSpec {
    BoundingBox domain{-74.3, 40.5, -73.7, 41.0};
    std::size_t n_pixels = 20000;
    PolySurface frame_distortion{1, {1.8, 0.0, 0.0}};
    PolySurface regional_ramp{1, {}};  ///< long-wavelength signal in the truth
    std::size_t n_bowls = 8;
    double bowl_amplitude = 2.0;        ///< mm/yr, signs alternate
    double bowl_radius_km = 1.5;        ///< Gaussian sigma
    double noise_sigma = 0.0;           ///< mm/yr, added to the local field
    double model_cellsize = 0.05;       ///< degrees
    double model_smoothing_radius_km = 5.0;
    std::size_t n_gnss = 20;
    double gnss_sigma = 0.05;           ///< mm/yr, added to station rates
    std::uint64_t seed = 42;

    void validate() const;  ///< throws ValueError (n_pixels >= 100, ...)
};

struct GaussianBowl {
    double lon = 0.0;
    double lat = 0.0;
    double amplitude = 0.0;  ///< mm/yr
    double sigma_km = 0.0;
};

/// Generated ground truth for end-to-end pipeline validation.
struct Scenario {
    ScenarioSpec spec;
    VelocityField truth;       ///< global frame: bowls + optional ramp
    VelocityField local;       ///< truth - frame distortion + noise
    RasterGrid coarse_model;   ///< smoothed truth on a coarse grid, one-cell margin
    GnssStationSet gnss;       ///< truth at station sites + gnss noise
    NormalizationParams domain_norm;  ///< map for the injected surfaces
    std::vector<GaussianBowl> bowls;

    /// Injected frame-distortion surface at a point, mm/yr.
    double distortion_at(double lon, double lat) const;
    /// Noise-free truth surface at a point (bowls + ramp), mm/yr.
    double truth_at(double lon, double lat) const;
};

Scenario make_scenario(const ScenarioSpec& spec);

struct ScenarioError {
    double rmse_vs_truth = 0.0;
    double mae_vs_truth = 0.0;
};

/// Pixel-wise error of a transformed field against the scenario truth.
/// Throws ValueError when ids do not align.
ScenarioError scenario_error(const Scenario& scenario, const VelocityField& transformed);

nlohmann::json spec_to_json(const ScenarioSpec& spec);
ScenarioSpec spec_from_json(const nlohmann::json& j);

}  // namespace vlmtie
