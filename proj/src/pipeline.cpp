#include "vlmtie/pipeline.hpp"

#include <unordered_map>

#include "vlmtie/errors.hpp"

namespace vlmtie {

FramePrep prepare_frame_tie(const VelocityField& local, const RasterGrid& global_model) {
    FramePrep prep;
    prep.oversample = oversample_model(global_model, local);
    prep.diff = difference_field(local, prep.oversample);
    return prep;
}

TiedField tie_frame(const VelocityField& local, const FramePrep& prep, int degree) {
    TiedField tied;
    tied.model = fit_polynomial(prep.diff, degree);
    tied.excluded_count = prep.diff.excluded_count;

    // The fitted surface is evaluated only where the model resolved; excluded
    // pixels pass through with their local value and corrected = 0.
    const std::size_t n_fit = prep.diff.entries.size();
    std::vector<double> lons(n_fit), lats(n_fit);
    for (std::size_t i = 0; i < n_fit; ++i) {
        lons[i] = prep.diff.entries[i].lon;
        lats[i] = prep.diff.entries[i].lat;
    }
    const PolyEval eval = evaluate_polynomial(tied.model, lons, lats);

    std::unordered_map<long long, std::size_t> fit_index;
    fit_index.reserve(n_fit);
    for (std::size_t i = 0; i < n_fit; ++i) fit_index.emplace(prep.diff.entries[i].id, i);

    const std::size_t n = local.size();
    tied.transformed = local;
    tied.transformed.frame = FrameTag::global;
    tied.correction.assign(n, 0.0);
    tied.corrected.assign(n, 0);
    tied.extrapolated.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        auto it = fit_index.find(local.samples[i].id);
        if (it == fit_index.end()) continue;
        tied.transformed.samples[i].value += eval.values[it->second];
        tied.correction[i] = eval.values[it->second];
        tied.corrected[i] = 1;
        tied.extrapolated[i] = eval.extrapolated[it->second];
    }
    return tied;
}

TiedField tie_frame(const VelocityField& local, const RasterGrid& global_model, int degree) {
    return tie_frame(local, prepare_frame_tie(local, global_model), degree);
}

}  // namespace vlmtie
