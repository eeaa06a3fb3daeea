#include "vlmtie/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <mutex>
#include <numbers>
#include <ostream>
#include <string>

#include <fftw3.h>

#include "detail.hpp"
#include "vlmtie/errors.hpp"
#include "vlmtie/util.hpp"

namespace vlmtie {

namespace {

// The FFTW planner is not thread-safe; executing a plan is.
std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

struct BinIndex {
    std::size_t row, col;
};

}  // namespace

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

    // Mean binning, accumulated in sample order.
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

    // Fill gaps from the nearest occupied cell. Each empty cell looks up its
    // own neighbor, so the loop parallelizes without ordering effects.
    const std::vector<double> binned = grid.values;
    std::vector<BinIndex> empties;
    for (std::size_t r = 0; r < grid.nrows; ++r)
        for (std::size_t c = 0; c < grid.ncols; ++c)
            if (!filled[r * grid.ncols + c]) empties.push_back({r, c});

#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(empties.size()); ++i) {
        const BinIndex& e = empties[static_cast<std::size_t>(i)];
        grid.values[e.row * grid.ncols + e.col] = detail::nearest_filled_value(
            filled, binned, grid.nrows, grid.ncols, e.row, e.col);
    }
    return grid;
}

PreparedGrid preprocess(const RasterGrid& grid) {
    grid.validate();
    for (double v : grid.values)
        if (grid.is_nodata(v)) throw ValueError("preprocess: grid contains nodata cells");

    PreparedGrid prep;
    prep.ncols = grid.ncols;
    prep.nrows = grid.nrows;
    const double mean_lat = grid.mean_lat();
    prep.dx_km = grid.cellsize * kKmPerDegLon * std::cos(mean_lat * detail::kDegToRad);
    prep.dy_km = grid.cellsize * kKmPerDegLat;

    double mean = 0.0;
    for (double v : grid.values) mean += v;
    mean /= static_cast<double>(grid.values.size());

    auto hann = [](std::size_t i, std::size_t n) {
        if (n == 1) return 1.0;
        return 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                     static_cast<double>(n - 1)));
    };
    std::vector<double> wx(prep.ncols), wy(prep.nrows);
    for (std::size_t c = 0; c < prep.ncols; ++c) wx[c] = hann(c, prep.ncols);
    for (std::size_t r = 0; r < prep.nrows; ++r) wy[r] = hann(r, prep.nrows);

    prep.values.resize(grid.values.size());
    double wpow = 0.0;
    for (std::size_t r = 0; r < prep.nrows; ++r) {
        for (std::size_t c = 0; c < prep.ncols; ++c) {
            const double w = wy[r] * wx[c];
            prep.values[r * prep.ncols + c] = (grid.at(r, c) - mean) * w;
            wpow += w * w;
        }
    }
    prep.window_power = wpow;
    return prep;
}

PowerSpectrum power_spectrum(const PreparedGrid& grid) {
    const std::size_t n = grid.ncols * grid.nrows;
    if (n == 0 || grid.values.size() != n) throw ValueError("power_spectrum: bad prepared grid");
    if (!(grid.dx_km > 0.0) || !(grid.dy_km > 0.0))
        throw ValueError("power_spectrum: cell spacing must be > 0");

    std::vector<std::complex<double>> in(n), out(n);
    for (std::size_t i = 0; i < n; ++i) in[i] = {grid.values[i], 0.0};

    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(fftw_planner_mutex());
        plan = fftw_plan_dft_2d(static_cast<int>(grid.nrows), static_cast<int>(grid.ncols),
                                reinterpret_cast<fftw_complex*>(in.data()),
                                reinterpret_cast<fftw_complex*>(out.data()), FFTW_FORWARD,
                                FFTW_ESTIMATE);
    }
    if (!plan) throw Error("power_spectrum: fftw plan creation failed");
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(fftw_planner_mutex());
        fftw_destroy_plan(plan);
    }

    PowerSpectrum spec;
    spec.ncols = grid.ncols;
    spec.nrows = grid.nrows;
    spec.power.resize(n);
    const double dn = static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) spec.power[i] = std::norm(out[i]) / dn;

    // Signed sample frequencies, cycles/km.
    auto freqs = [](std::size_t count, double spacing_km) {
        std::vector<double> f(count);
        const auto half = static_cast<long long>((count + 1) / 2);
        for (std::size_t k = 0; k < count; ++k) {
            auto sk = static_cast<long long>(k);
            if (sk >= half) sk -= static_cast<long long>(count);
            f[k] = static_cast<double>(sk) / (static_cast<double>(count) * spacing_km);
        }
        return f;
    };
    spec.fx = freqs(grid.ncols, grid.dx_km);
    spec.fy = freqs(grid.nrows, grid.dy_km);
    return spec;
}

SpectrumCurve radial_average(const PowerSpectrum& spectrum, std::size_t n_bins) {
    if (n_bins == 0) throw ValueError("radial_average: need at least one bin");
    if (spectrum.power.size() != spectrum.ncols * spectrum.nrows ||
        spectrum.fx.size() != spectrum.ncols || spectrum.fy.size() != spectrum.nrows)
        throw ValueError("radial_average: inconsistent spectrum");

    // Radial frequency of every non-DC cell.
    double fmin = std::numeric_limits<double>::infinity(), fmax = 0.0;
    for (std::size_t r = 0; r < spectrum.nrows; ++r) {
        for (std::size_t c = 0; c < spectrum.ncols; ++c) {
            if (r == 0 && c == 0) continue;  // DC carries the frame offset
            const double f = std::hypot(spectrum.fx[c], spectrum.fy[r]);
            if (f > 0.0) {
                fmin = std::min(fmin, f);
                fmax = std::max(fmax, f);
            }
        }
    }
    if (!std::isfinite(fmin)) throw ValueError("radial_average: no non-DC frequencies");

    const double log_min = std::log10(fmin);
    const double log_span = std::log10(fmax) - log_min;
    const bool degenerate = !(log_span > 0.0);
    const std::size_t bins = degenerate ? 1 : n_bins;

    std::vector<double> sums(bins, 0.0);
    std::vector<std::size_t> counts(bins, 0);
    for (std::size_t r = 0; r < spectrum.nrows; ++r) {
        for (std::size_t c = 0; c < spectrum.ncols; ++c) {
            if (r == 0 && c == 0) continue;
            const double f = std::hypot(spectrum.fx[c], spectrum.fy[r]);
            if (!(f > 0.0)) continue;
            std::size_t b = 0;
            if (!degenerate) {
                b = static_cast<std::size_t>(std::floor(
                    static_cast<double>(bins) * (std::log10(f) - log_min) / log_span));
                if (b >= bins) b = bins - 1;
            }
            sums[b] += spectrum.power[r * spectrum.ncols + c];
            ++counts[b];
        }
    }

    SpectrumCurve curve;
    for (std::size_t b = 0; b < bins; ++b) {
        if (!counts[b]) continue;
        // Geometric bin center; wavelengths come out strictly decreasing.
        const double lo = degenerate ? log_min : log_min + log_span * b / bins;
        const double hi = degenerate ? log_min : log_min + log_span * (b + 1) / bins;
        const double f_center = std::pow(10.0, 0.5 * (lo + hi));
        curve.bins.push_back({1.0 / f_center, sums[b] / static_cast<double>(counts[b])});
    }
    return curve;
}

SpectrumCurve normalize_spectrum(const SpectrumCurve& curve) {
    double max_power = 0.0;
    for (const SpectrumBin& b : curve.bins) max_power = std::max(max_power, b.power);
    if (!(max_power > 0.0))
        throw ValueError("normalize_spectrum: curve has no positive power");

    SpectrumCurve out = curve;
    for (SpectrumBin& b : out.bins) b.power /= max_power;
    return out;
}

double spectral_slope(const SpectrumCurve& curve, double wl_min_km, double wl_max_km) {
    if (!(wl_min_km > 0.0) || !(wl_max_km > wl_min_km))
        throw ValueError("spectral_slope: bad wavelength band");

    std::vector<double> lx, ly;
    for (const SpectrumBin& b : curve.bins) {
        if (b.wavelength_km < wl_min_km || b.wavelength_km > wl_max_km) continue;
        if (!(b.power > 0.0)) continue;
        lx.push_back(std::log10(b.wavelength_km));
        ly.push_back(std::log10(b.power));
    }
    if (lx.size() < 3)
        throw ValueError("spectral_slope: fewer than 3 usable bins in band");

    const double n = static_cast<double>(lx.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxy += (lx[i] - mx) * (ly[i] - my);
        sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    if (!(sxx > 0.0)) throw ValueError("spectral_slope: degenerate wavelength spread");
    return sxy / sxx;
}

SpectrumCurve field_spectrum(const VelocityField& field, double cellsize_deg,
                             std::size_t n_bins) {
    const RasterGrid grid = rasterize_points(field, cellsize_deg);
    const PreparedGrid prep = preprocess(grid);
    const PowerSpectrum spec = power_spectrum(prep);
    return radial_average(spec, n_bins);
}

double band_log_distance(const SpectrumCurve& a, const SpectrumCurve& b, double wl_min_km,
                         double wl_max_km) {
    if (!(wl_min_km > 0.0) || !(wl_max_km > wl_min_km))
        throw ValueError("band_log_distance: bad wavelength band");

    double sum = 0.0;
    std::size_t n = 0;
    for (const SpectrumBin& ba : a.bins) {
        if (ba.wavelength_km < wl_min_km || ba.wavelength_km > wl_max_km) continue;
        for (const SpectrumBin& bb : b.bins) {
            if (std::abs(bb.wavelength_km - ba.wavelength_km) > 1e-9 * ba.wavelength_km)
                continue;
            if (ba.power > 0.0 && bb.power > 0.0) {
                sum += std::abs(std::log10(ba.power) - std::log10(bb.power));
                ++n;
            }
            break;
        }
    }
    if (n == 0)
        throw ValueError("band_log_distance: no shared positive bins in band");
    return sum / static_cast<double>(n);
}

void write_spectrum_csv(std::ostream& out, const SpectrumCurve& curve, int sig_digits) {
    out << "wavelength_km,power\n";
    for (const SpectrumBin& b : curve.bins)
        out << format_g(b.wavelength_km, sig_digits) << ',' << format_g(b.power, sig_digits)
            << '\n';
}

void write_spectrum_bundle_csv(std::ostream& out, std::span<const SpectrumCurve> curves,
                               int sig_digits) {
    if (curves.empty()) throw ValueError("spectrum bundle: no curves");
    const std::size_t n = curves[0].bins.size();
    for (const SpectrumCurve& c : curves) {
        if (c.bins.size() != n)
            throw ValueError("spectrum bundle: curves have different bin counts");
        for (std::size_t i = 0; i < n; ++i)
            if (std::abs(c.bins[i].wavelength_km - curves[0].bins[i].wavelength_km) >
                1e-9 * curves[0].bins[i].wavelength_km)
                throw ValueError("spectrum bundle: wavelength bins differ between curves");
    }

    out << "wavelength_km";
    for (const SpectrumCurve& c : curves) out << ',' << c.field_label;
    out << '\n';
    for (std::size_t i = 0; i < n; ++i) {
        out << format_g(curves[0].bins[i].wavelength_km, sig_digits);
        for (const SpectrumCurve& c : curves) out << ',' << format_g(c.bins[i].power, sig_digits);
        out << '\n';
    }
}

}  // namespace vlmtie
