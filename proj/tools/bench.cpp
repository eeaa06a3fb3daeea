// Benchmark of the OpenMP kernels against their serial reference twins.
// Also cross-checks that both produce bit-identical results, which is the
// contract the test suite enforces.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <functional>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "vlmtie/frame_fit.hpp"
#include "vlmtie/pipeline.hpp"
#include "vlmtie/reference.hpp"
#include "vlmtie/resample.hpp"
#include "vlmtie/spectral.hpp"
#include "vlmtie/synth.hpp"
#include "vlmtie/validation.hpp"

using namespace vlmtie;
using Clock = std::chrono::steady_clock;

namespace {

double time_best_of(int reps, const std::function<void()>& fn) {
    double best = 1e300;
    for (int i = 0; i < reps; ++i) {
        const auto t0 = Clock::now();
        fn();
        const auto t1 = Clock::now();
        best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return best;
}

bool bytes_equal(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() &&
           (a.empty() || std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
}

void report(const char* name, double serial_ms, double parallel_ms, bool identical) {
    std::printf("%-22s %10.2f ms %12.2f ms %8.2fx   %s\n", name, serial_ms, parallel_ms,
                serial_ms / parallel_ms, identical ? "bit-identical" : "MISMATCH");
}

}  // namespace

int main() {
    ScenarioSpec spec;
    spec.n_pixels = 200000;
    spec.n_bowls = 12;
    spec.noise_sigma = 0.1;
    spec.n_gnss = 60;
    spec.frame_distortion = {2, {1.8, 0.9, -0.4, 0.2, -0.1, 0.3}};
    const Scenario sc = make_scenario(spec);

#ifdef _OPENMP
    std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
    std::printf("OpenMP not enabled; both columns run serial code\n");
#endif
    std::printf("pixels: %zu, gnss stations: %zu\n\n", sc.local.size(), sc.gnss.size());
    std::printf("%-22s %13s %15s %9s\n", "kernel", "serial", "parallel", "speedup");

    const int reps = 3;

    // oversample_model
    OversampleResult ser_os, par_os;
    const double t_os_s =
        time_best_of(reps, [&] { ser_os = reference::oversample_model(sc.coarse_model, sc.local); });
    const double t_os_p =
        time_best_of(reps, [&] { par_os = oversample_model(sc.coarse_model, sc.local); });
    report("oversample_model", t_os_s, t_os_p,
           bytes_equal(ser_os.model_values, par_os.model_values) && ser_os.ids == par_os.ids);

    // evaluate_polynomial
    const DifferenceField diff = difference_field(sc.local, par_os);
    const PolynomialModel model = fit_polynomial(diff, 3);
    std::vector<double> lons(sc.local.size()), lats(sc.local.size());
    for (std::size_t i = 0; i < sc.local.size(); ++i) {
        lons[i] = sc.local.samples[i].lon;
        lats[i] = sc.local.samples[i].lat;
    }
    PolyEval ser_ev, par_ev;
    const double t_ev_s =
        time_best_of(reps, [&] { ser_ev = reference::evaluate_polynomial(model, lons, lats); });
    const double t_ev_p =
        time_best_of(reps, [&] { par_ev = evaluate_polynomial(model, lons, lats); });
    report("evaluate_polynomial", t_ev_s, t_ev_p,
           bytes_equal(ser_ev.values, par_ev.values) &&
               ser_ev.extrapolated == par_ev.extrapolated);

    // collocate
    CollocationResult ser_co, par_co;
    const double t_co_s =
        time_best_of(reps, [&] { ser_co = reference::collocate(sc.local, sc.gnss, 150.0); });
    const double t_co_p = time_best_of(reps, [&] { par_co = collocate(sc.local, sc.gnss, 150.0); });
    bool co_same = ser_co.pairs.size() == par_co.pairs.size();
    for (std::size_t i = 0; co_same && i < ser_co.pairs.size(); ++i)
        co_same = ser_co.pairs[i].station_id == par_co.pairs[i].station_id &&
                  std::memcmp(&ser_co.pairs[i].insar_mean, &par_co.pairs[i].insar_mean,
                              sizeof(double)) == 0 &&
                  ser_co.pairs[i].pixel_count == par_co.pairs[i].pixel_count;
    report("collocate", t_co_s, t_co_p, co_same);

    // rasterize_points (the gap-fill pass is the parallel part)
    RasterGrid ser_ra, par_ra;
    const double t_ra_s =
        time_best_of(reps, [&] { ser_ra = reference::rasterize_points(sc.local, 0.002); });
    const double t_ra_p = time_best_of(reps, [&] { par_ra = rasterize_points(sc.local, 0.002); });
    report("rasterize_points", t_ra_s, t_ra_p, bytes_equal(ser_ra.values, par_ra.values));

    return 0;
}
