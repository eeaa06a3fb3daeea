#include "vlmtie/synth.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "detail.hpp"
#include "vlmtie/errors.hpp"
#include "vlmtie/spectral.hpp"
#include "vlmtie/util.hpp"

namespace vlmtie {

namespace {

/// Explicit uniform/Gaussian mappings over mt19937_64 so that a spec pins the
/// generated values exactly: 53-bit uniform in [0,1), Box-Muller without
/// state (two fresh uniforms per normal draw, sine partner discarded).
struct Rng {
    std::mt19937_64 engine;

    explicit Rng(std::uint64_t seed) : engine(seed) {}

    double uniform() { return static_cast<double>(engine() >> 11) * 0x1.0p-53; }

    double uniform_in(double a, double b) { return a + (b - a) * uniform(); }

    double normal() {
        const double u1 = 1.0 - uniform();  // (0, 1], keeps the log finite
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * std::numbers::pi * u2);
    }
};

double surface_at(const PolySurface& surface, const NormalizationParams& norm, double lon,
                  double lat) {
    if (surface.empty()) return 0.0;
    const auto [x1, x2] = norm.apply(lon, lat);
    double row[10];
    design_row(x1, x2, surface.degree, row);
    double acc = 0.0;
    for (std::size_t j = 0; j < surface.coeffs.size(); ++j) acc += row[j] * surface.coeffs[j];
    return acc;
}

void check_surface(const PolySurface& s, const char* name) {
    if (s.empty()) return;
    if (s.degree < 0 || s.degree > kMaxDegree)
        throw ValueError(std::string(name) + ": degree outside [0, 3]");
    if (s.coeffs.size() != static_cast<std::size_t>(coeff_count(s.degree)))
        throw ValueError(std::string(name) + ": expected " +
                         std::to_string(coeff_count(s.degree)) + " coefficients, got " +
                         std::to_string(s.coeffs.size()));
    for (double c : s.coeffs)
        if (!std::isfinite(c)) throw ValueError(std::string(name) + ": non-finite coefficient");
}

double domain_width_km(const BoundingBox& d) {
    const double mid_lat = 0.5 * (d.lat_min + d.lat_max);
    return d.width() * kKmPerDegLon * std::cos(mid_lat * detail::kDegToRad);
}

double domain_height_km(const BoundingBox& d) { return d.height() * kKmPerDegLat; }

}  // namespace

void ScenarioSpec::validate() const {
    if (!(domain.width() > 0.0) || !(domain.height() > 0.0))
        throw ValueError("scenario: domain must have positive extent");
    if (n_pixels < 100) throw ValueError("scenario: n_pixels must be >= 100");
    if (!(model_cellsize > 0.0)) throw ValueError("scenario: model_cellsize must be > 0");
    if (noise_sigma < 0.0) throw ValueError("scenario: noise_sigma must be >= 0");
    if (gnss_sigma < 0.0) throw ValueError("scenario: gnss_sigma must be >= 0");
    if (model_smoothing_radius_km < 0.0)
        throw ValueError("scenario: model_smoothing_radius_km must be >= 0");
    check_surface(frame_distortion, "frame_distortion");
    check_surface(regional_ramp, "regional_ramp");
    if (n_bowls > 0) {
        if (!(bowl_radius_km > 0.0)) throw ValueError("scenario: bowl_radius_km must be > 0");
        if (2.0 * bowl_radius_km > std::min(domain_width_km(domain), domain_height_km(domain)))
            throw ValueError("scenario: bowls larger than the domain");
    }
}

double Scenario::distortion_at(double lon, double lat) const {
    return surface_at(spec.frame_distortion, domain_norm, lon, lat);
}

double Scenario::truth_at(double lon, double lat) const {
    double v = surface_at(spec.regional_ramp, domain_norm, lon, lat);
    for (const GaussianBowl& b : bowls) {
        const double dx = (lon - b.lon) * kKmPerDegLon * std::cos(b.lat * detail::kDegToRad);
        const double dy = (lat - b.lat) * kKmPerDegLat;
        v += b.amplitude * std::exp(-(dx * dx + dy * dy) / (2.0 * b.sigma_km * b.sigma_km));
    }
    return v;
}

Scenario make_scenario(const ScenarioSpec& spec) {
    spec.validate();

    Scenario sc;
    sc.spec = spec;
    sc.domain_norm.lon0 = 0.5 * (spec.domain.lon_min + spec.domain.lon_max);
    sc.domain_norm.lat0 = 0.5 * (spec.domain.lat_min + spec.domain.lat_max);
    sc.domain_norm.sx = std::max(spec.domain.width() / 2.0, 1e-9);
    sc.domain_norm.sy = std::max(spec.domain.height() / 2.0, 1e-9);

    Rng rng(spec.seed);

    // Draw order is part of the contract: pixels, bowls, pixel noise, gnss.
    std::vector<double> lons(spec.n_pixels), lats(spec.n_pixels);
    for (std::size_t i = 0; i < spec.n_pixels; ++i) {
        lons[i] = rng.uniform_in(spec.domain.lon_min, spec.domain.lon_max);
        lats[i] = rng.uniform_in(spec.domain.lat_min, spec.domain.lat_max);
    }

    sc.bowls.reserve(spec.n_bowls);
    for (std::size_t b = 0; b < spec.n_bowls; ++b) {
        GaussianBowl bowl;
        bowl.lon = rng.uniform_in(spec.domain.lon_min, spec.domain.lon_max);
        bowl.lat = rng.uniform_in(spec.domain.lat_min, spec.domain.lat_max);
        bowl.amplitude = (b % 2 == 0) ? spec.bowl_amplitude : -spec.bowl_amplitude;
        bowl.sigma_km = spec.bowl_radius_km;
        sc.bowls.push_back(bowl);
    }

    std::vector<double> noise(spec.n_pixels);
    for (std::size_t i = 0; i < spec.n_pixels; ++i) noise[i] = rng.normal() * spec.noise_sigma;

    sc.truth.frame = FrameTag::global;
    sc.local.frame = FrameTag::local;
    sc.truth.samples.reserve(spec.n_pixels);
    sc.local.samples.reserve(spec.n_pixels);
    for (std::size_t i = 0; i < spec.n_pixels; ++i) {
        const double t = sc.truth_at(lons[i], lats[i]);
        const auto id = static_cast<long long>(i);
        sc.truth.samples.push_back({id, lons[i], lats[i], t, std::nullopt});
        sc.local.samples.push_back(
            {id, lons[i], lats[i], t - sc.distortion_at(lons[i], lats[i]) + noise[i],
             std::nullopt});
    }

    // Coarse model: truth disc-averaged over the smoothing radius, sampled on
    // a grid that pads the domain by one cell.
    const double cs = spec.model_cellsize;
    sc.coarse_model.cellsize = cs;
    sc.coarse_model.xll = spec.domain.lon_min - cs;
    sc.coarse_model.yll = spec.domain.lat_min - cs;
    sc.coarse_model.ncols =
        static_cast<std::size_t>(std::ceil(spec.domain.width() / cs)) + 2;
    sc.coarse_model.nrows =
        static_cast<std::size_t>(std::ceil(spec.domain.height() / cs)) + 2;
    sc.coarse_model.values.assign(sc.coarse_model.ncols * sc.coarse_model.nrows, 0.0);

    // Fixed 9x9 stencil clipped to the disc: a deterministic quadrature of the
    // moving average.
    const double radius = spec.model_smoothing_radius_km;
    std::vector<std::pair<double, double>> stencil_km;
    if (radius > 0.0) {
        constexpr int kStencil = 9;
        for (int iy = 0; iy < kStencil; ++iy) {
            for (int ix = 0; ix < kStencil; ++ix) {
                const double ox = -radius + (ix + 0.5) * 2.0 * radius / kStencil;
                const double oy = -radius + (iy + 0.5) * 2.0 * radius / kStencil;
                if (ox * ox + oy * oy <= radius * radius) stencil_km.emplace_back(ox, oy);
            }
        }
    } else {
        stencil_km.emplace_back(0.0, 0.0);
    }

    for (std::size_t r = 0; r < sc.coarse_model.nrows; ++r) {
        for (std::size_t c = 0; c < sc.coarse_model.ncols; ++c) {
            const double clon = sc.coarse_model.center_lon(c);
            const double clat = sc.coarse_model.center_lat(r);
            const double coslat = std::cos(clat * detail::kDegToRad);
            double acc = 0.0;
            for (const auto& [ox_km, oy_km] : stencil_km)
                acc += sc.truth_at(clon + ox_km / (kKmPerDegLon * coslat),
                                   clat + oy_km / kKmPerDegLat);
            sc.coarse_model.at(r, c) = acc / static_cast<double>(stencil_km.size());
        }
    }

    // Stations: a uniform draw snapped onto the nearest pixel, so every
    // station is guaranteed to collocate at the default 100 m radius.
    for (std::size_t s = 0; s < spec.n_gnss; ++s) {
        const double draw_lon = rng.uniform_in(spec.domain.lon_min, spec.domain.lon_max);
        const double draw_lat = rng.uniform_in(spec.domain.lat_min, spec.domain.lat_max);
        const double coslat = std::cos(draw_lat * detail::kDegToRad);
        double best_d2 = std::numeric_limits<double>::infinity();
        std::size_t best = 0;
        for (std::size_t i = 0; i < spec.n_pixels; ++i) {
            const double dx = (lons[i] - draw_lon) * kKmPerDegLon * coslat;
            const double dy = (lats[i] - draw_lat) * kKmPerDegLat;
            const double d2 = dx * dx + dy * dy;
            if (d2 < best_d2) {
                best_d2 = d2;
                best = i;
            }
        }
        GnssStation st;
        char id[16];
        std::snprintf(id, sizeof(id), "S%03zu", s);
        st.id = id;
        st.lon = lons[best];
        st.lat = lats[best];
        st.vu = sc.truth_at(st.lon, st.lat) + rng.normal() * spec.gnss_sigma;
        st.sigma = spec.gnss_sigma;
        st.span = rng.uniform_in(3.5, 20.0);
        sc.gnss.stations.push_back(std::move(st));
    }

    sc.truth.validate();
    sc.local.validate();
    sc.coarse_model.validate();
    sc.gnss.validate();
    return sc;
}

ScenarioError scenario_error(const Scenario& scenario, const VelocityField& transformed) {
    if (transformed.size() != scenario.truth.size())
        throw ValueError("scenario_error: field size does not match truth");
    std::unordered_map<long long, double> truth_by_id;
    truth_by_id.reserve(scenario.truth.size());
    for (const PointSample& s : scenario.truth.samples) truth_by_id.emplace(s.id, s.value);

    double sum_sq = 0.0, sum_abs = 0.0;
    for (const PointSample& s : transformed.samples) {
        auto it = truth_by_id.find(s.id);
        if (it == truth_by_id.end())
            throw ValueError("scenario_error: id " + std::to_string(s.id) + " not in truth");
        const double e = s.value - it->second;
        sum_sq += e * e;
        sum_abs += std::abs(e);
    }
    const double dn = static_cast<double>(transformed.size());
    return {std::sqrt(sum_sq / dn), sum_abs / dn};
}

namespace {

nlohmann::json surface_to_json(const PolySurface& s) {
    return nlohmann::json{{"degree", s.degree}, {"coeffs", s.coeffs}};
}

PolySurface surface_from_json(const nlohmann::json& j, const PolySurface& fallback) {
    PolySurface s = fallback;
    if (j.contains("degree")) s.degree = j.at("degree").get<int>();
    if (j.contains("coeffs")) s.coeffs = j.at("coeffs").get<std::vector<double>>();
    return s;
}

}  // namespace

nlohmann::json spec_to_json(const ScenarioSpec& spec) {
    return nlohmann::json{
        {"format", "vlmtie.scenario_spec"},
        {"version", 1},
        {"domain",
         {{"lon_min", spec.domain.lon_min},
          {"lat_min", spec.domain.lat_min},
          {"lon_max", spec.domain.lon_max},
          {"lat_max", spec.domain.lat_max}}},
        {"n_pixels", spec.n_pixels},
        {"frame_distortion", surface_to_json(spec.frame_distortion)},
        {"regional_ramp", surface_to_json(spec.regional_ramp)},
        {"n_bowls", spec.n_bowls},
        {"bowl_amplitude", spec.bowl_amplitude},
        {"bowl_radius_km", spec.bowl_radius_km},
        {"noise_sigma", spec.noise_sigma},
        {"model_cellsize", spec.model_cellsize},
        {"model_smoothing_radius_km", spec.model_smoothing_radius_km},
        {"n_gnss", spec.n_gnss},
        {"gnss_sigma", spec.gnss_sigma},
        {"seed", spec.seed},
    };
}

ScenarioSpec spec_from_json(const nlohmann::json& j) {
    try {
        if (j.contains("format") &&
            j.at("format").get<std::string>() != "vlmtie.scenario_spec")
            throw ValueError("scenario spec json: unexpected format tag");
        ScenarioSpec spec;  // absent keys keep the built-in defaults
        if (j.contains("domain")) {
            const auto& d = j.at("domain");
            spec.domain.lon_min = d.value("lon_min", spec.domain.lon_min);
            spec.domain.lat_min = d.value("lat_min", spec.domain.lat_min);
            spec.domain.lon_max = d.value("lon_max", spec.domain.lon_max);
            spec.domain.lat_max = d.value("lat_max", spec.domain.lat_max);
        }
        spec.n_pixels = j.value("n_pixels", spec.n_pixels);
        if (j.contains("frame_distortion"))
            spec.frame_distortion =
                surface_from_json(j.at("frame_distortion"), spec.frame_distortion);
        if (j.contains("regional_ramp"))
            spec.regional_ramp = surface_from_json(j.at("regional_ramp"), spec.regional_ramp);
        spec.n_bowls = j.value("n_bowls", spec.n_bowls);
        spec.bowl_amplitude = j.value("bowl_amplitude", spec.bowl_amplitude);
        spec.bowl_radius_km = j.value("bowl_radius_km", spec.bowl_radius_km);
        spec.noise_sigma = j.value("noise_sigma", spec.noise_sigma);
        spec.model_cellsize = j.value("model_cellsize", spec.model_cellsize);
        spec.model_smoothing_radius_km =
            j.value("model_smoothing_radius_km", spec.model_smoothing_radius_km);
        spec.n_gnss = j.value("n_gnss", spec.n_gnss);
        spec.gnss_sigma = j.value("gnss_sigma", spec.gnss_sigma);
        spec.seed = j.value("seed", spec.seed);
        return spec;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("scenario spec json: ") + e.what());
    }
}

}  // namespace vlmtie
