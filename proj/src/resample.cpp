#include "vlmtie/resample.hpp"

#include <string>
#include <unordered_map>

#include "detail.hpp"
#include "vlmtie/errors.hpp"

namespace vlmtie {

std::optional<double> bilinear_sample(const RasterGrid& grid, double lon, double lat) {
    double v;
    if (detail::bilinear_at(grid, lon, lat, v) == detail::SampleStatus::ok) return v;
    return std::nullopt;
}

OversampleResult oversample_model(const RasterGrid& grid, const VelocityField& field) {
    const std::size_t n = field.size();
    if (n == 0) throw ValueError("oversample: empty field");

    std::vector<double> vals(n, 0.0);
    std::vector<detail::SampleStatus> status(n, detail::SampleStatus::ok);

    // Each pixel is independent; the result layout is fixed by index, so the
    // outcome cannot depend on the thread count.
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
        const auto idx = static_cast<std::size_t>(i);
        const PointSample& p = field.samples[idx];
        status[idx] = detail::bilinear_at(grid, p.lon, p.lat, vals[idx]);
    }

    OversampleResult result;
    result.ids.reserve(n);
    result.model_values.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (status[i] == detail::SampleStatus::ok) {
            result.ids.push_back(field.samples[i].id);
            result.model_values.push_back(vals[i]);
        } else {
            result.excluded.emplace_back(field.samples[i].id,
                                         status[i] == detail::SampleStatus::out_of_hull
                                             ? ExcludeReason::out_of_hull
                                             : ExcludeReason::nodata_neighbor);
        }
    }
    if (result.ids.empty())
        throw EmptyOverlapError("no pixel overlaps the model grid (" + std::to_string(n) +
                                " pixels, all excluded)");
    return result;
}

DifferenceField difference_field(const VelocityField& field, const OversampleResult& model) {
    if (model.ids.size() != model.model_values.size())
        throw ValueError("difference_field: ids/model_values size mismatch");
    if (model.ids.size() + model.excluded.size() != field.size())
        throw ValueError("difference_field: oversample result does not reconcile with field");

    std::unordered_map<long long, const PointSample*> by_id;
    by_id.reserve(field.size());
    for (const PointSample& s : field.samples) by_id.emplace(s.id, &s);

    DifferenceField diff;
    diff.entries.reserve(model.ids.size());
    for (std::size_t i = 0; i < model.ids.size(); ++i) {
        auto it = by_id.find(model.ids[i]);
        if (it == by_id.end())
            throw ValueError("difference_field: model id " + std::to_string(model.ids[i]) +
                             " not present in field");
        const PointSample& s = *it->second;
        diff.entries.push_back({s.id, s.lon, s.lat, model.model_values[i] - s.value});
    }
    diff.excluded_count = field.size() - diff.entries.size();
    return diff;
}

}  // namespace vlmtie
