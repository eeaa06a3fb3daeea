#include "vlmtie/validation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include <nlohmann/json.hpp>

#include "detail.hpp"
#include "vlmtie/errors.hpp"
#include "vlmtie/frame_fit.hpp"
#include "vlmtie/log.hpp"
#include "vlmtie/util.hpp"

namespace vlmtie {

CollocationResult collocate(const VelocityField& field, const GnssStationSet& gnss,
                            double radius_m) {
    if (field.samples.empty()) throw ValueError("collocate: empty field");
    if (gnss.stations.empty()) throw EmptyCollocationError("collocate: no gnss stations");
    if (!(radius_m > 0.0)) throw ValueError("collocate: radius must be > 0");

    const std::size_t ns = gnss.size();
    std::vector<double> means(ns, 0.0);
    std::vector<std::size_t> counts(ns, 0);

    // Stations are independent; each scans the whole field, so the per-station
    // accumulation order is the sample order regardless of threading.
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(ns); ++i) {
        const auto idx = static_cast<std::size_t>(i);
        counts[idx] =
            detail::collocate_station(field, gnss.stations[idx], radius_m, means[idx]);
    }

    CollocationResult result;
    for (std::size_t i = 0; i < ns; ++i) {
        if (counts[i] == 0) {
            ++result.excluded_stations;
            continue;
        }
        result.pairs.push_back(
            {gnss.stations[i].id, gnss.stations[i].vu, means[i], counts[i]});
    }
    if (result.pairs.empty())
        throw EmptyCollocationError("no gnss station has a pixel within " +
                                    format_g(radius_m, 6) + " m");
    return result;
}

ResidualMetrics residual_metrics(std::span<const CollocationPair> pairs) {
    const std::size_t n = pairs.size();
    if (n < 2) throw ValueError("residual metrics need at least 2 collocation pairs");

    double sum = 0.0, sum_sq = 0.0, sum_abs = 0.0;
    for (const CollocationPair& p : pairs) {
        const double r = p.insar_mean - p.gnss_vu;
        sum += r;
        sum_sq += r * r;
        sum_abs += std::abs(r);
    }
    const double dn = static_cast<double>(n);
    const double mean = sum / dn;

    double var = 0.0;
    for (const CollocationPair& p : pairs) {
        const double d = (p.insar_mean - p.gnss_vu) - mean;
        var += d * d;
    }

    ResidualMetrics m;
    m.rmse = std::sqrt(sum_sq / dn);
    m.mae = sum_abs / dn;
    m.std_dev = std::sqrt(var / (dn - 1.0));
    return m;
}

InformationCriteria information_criteria(std::span<const CollocationPair> pairs, int n_params) {
    const std::size_t n = pairs.size();
    if (n < 2) throw ValueError("information criteria need at least 2 collocation pairs");
    if (n_params < 1) throw ValueError("information criteria need n_params >= 1");

    double rss = 0.0;
    for (const CollocationPair& p : pairs) {
        const double r = p.insar_mean - p.gnss_vu;
        rss += r * r;
    }

    InformationCriteria ic;
    if (rss == 0.0) {
        log::warn("information criteria: zero residual sum of squares, reporting -inf");
        ic.aic = -std::numeric_limits<double>::infinity();
        ic.bic = -std::numeric_limits<double>::infinity();
        return ic;
    }
    const double dn = static_cast<double>(n);
    const double base = dn * std::log(rss / dn);
    ic.aic = base + 2.0 * n_params;
    ic.bic = base + n_params * std::log(dn);
    return ic;
}

std::vector<EcdfPoint> ecdf(std::span<const double> values) {
    if (values.empty()) throw ValueError("ecdf: empty input");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());

    std::vector<EcdfPoint> curve;
    const double dn = static_cast<double>(sorted.size());
    std::size_t i = 0;
    while (i < sorted.size()) {
        std::size_t j = i;
        while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
        curve.push_back({sorted[i], static_cast<double>(j + 1) / dn});
        i = j + 1;
    }
    return curve;
}

double ecdf_median(const std::vector<EcdfPoint>& curve) {
    if (curve.empty()) throw ValueError("ecdf_median: empty curve");
    for (const EcdfPoint& p : curve)
        if (p.f >= 0.5) return p.x;
    return curve.back().x;  // unreachable: the last step is 1.0
}

void write_ecdf_csv(std::ostream& out, const std::vector<EcdfPoint>& curve, int sig_digits) {
    out << "value,cdf\n";
    for (const EcdfPoint& p : curve)
        out << format_g(p.x, sig_digits) << ',' << format_g(p.f, sig_digits) << '\n';
}

namespace {

/// Pairs restricted to the given station ids, original order preserved.
std::vector<CollocationPair> restrict_pairs(const std::vector<CollocationPair>& pairs,
                                            const std::vector<std::string>& keep) {
    std::vector<CollocationPair> out;
    out.reserve(keep.size());
    for (const CollocationPair& p : pairs)
        if (std::find(keep.begin(), keep.end(), p.station_id) != keep.end()) out.push_back(p);
    return out;
}

}  // namespace

ModelReport compare_models(const VelocityField& local,
                           const std::map<int, VelocityField>& transformed,
                           const GnssStationSet& gnss, double radius_m) {
    if (transformed.empty()) throw ValueError("compare_models: no transformed fields");
    for (const auto& [degree, field] : transformed) {
        if (degree < kMinDegree || degree > kMaxDegree)
            throw ValueError("compare_models: degree outside {1,2,3}");
        if (field.size() != local.size())
            throw ValueError("compare_models: field size mismatch for degree " +
                             std::to_string(degree));
        for (std::size_t i = 0; i < local.size(); ++i)
            if (field.samples[i].id != local.samples[i].id)
                throw ValueError("compare_models: pixel ids differ for degree " +
                                 std::to_string(degree));
    }

    // One station set for every row: stations that collocate in all fields.
    // Fields share pixel positions, so in practice this is the local set.
    CollocationResult local_pairs = collocate(local, gnss, radius_m);
    std::map<int, CollocationResult> model_pairs;
    std::vector<std::string> common;
    for (const CollocationPair& p : local_pairs.pairs) common.push_back(p.station_id);
    for (const auto& [degree, field] : transformed) {
        CollocationResult r = collocate(field, gnss, radius_m);
        std::erase_if(common, [&](const std::string& id) {
            return std::none_of(r.pairs.begin(), r.pairs.end(),
                                [&](const CollocationPair& p) { return p.station_id == id; });
        });
        model_pairs.emplace(degree, std::move(r));
    }
    if (common.empty())
        throw EmptyCollocationError("compare_models: no station collocates in every field");

    ModelReport report;
    report.n_stations = common.size();
    report.radius_m = radius_m;

    const std::vector<CollocationPair> lp = restrict_pairs(local_pairs.pairs, common);
    ResidualMetrics lm = residual_metrics(lp);
    report.rows.push_back({"Local InSAR", lm.rmse, lm.mae, lm.std_dev, std::nullopt,
                           std::nullopt, std::nullopt});

    double best_bic = 0.0;
    for (const auto& [degree, result] : model_pairs) {
        const std::vector<CollocationPair> pairs = restrict_pairs(result.pairs, common);
        const ResidualMetrics m = residual_metrics(pairs);
        const int n_params = coeff_count(degree);
        const InformationCriteria ic = information_criteria(pairs, n_params);
        MetricsRow row{"D" + std::to_string(degree), m.rmse, m.mae, m.std_dev, ic.aic, ic.bic,
                       n_params};
        report.rows.push_back(row);
        // Strict less keeps the lowest degree on ties (map iterates ascending).
        if (report.selected.empty() || ic.bic < best_bic) {
            best_bic = ic.bic;
            report.selected = row.label;
        }
    }
    return report;
}

nlohmann::json report_to_json(const ModelReport& report) {
    nlohmann::json rows = nlohmann::json::array();
    for (const MetricsRow& r : report.rows) {
        nlohmann::json row{{"model", r.label},
                           {"rmse", r.rmse},
                           {"mae", r.mae},
                           {"std", r.std_dev}};
        if (r.aic) row["aic"] = *r.aic;
        if (r.bic) row["bic"] = *r.bic;
        if (r.n_params) row["n_params"] = *r.n_params;
        rows.push_back(row);
    }
    return nlohmann::json{{"format", "vlmtie.model_report"},
                          {"version", 1},
                          {"n_stations", report.n_stations},
                          {"radius_m", report.radius_m},
                          {"selected", report.selected},
                          {"rows", rows}};
}

ModelReport report_from_json(const nlohmann::json& j) {
    try {
        if (j.at("format").get<std::string>() != "vlmtie.model_report")
            throw ValueError("report json: unexpected format tag");
        ModelReport report;
        report.n_stations = j.at("n_stations").get<std::size_t>();
        report.radius_m = j.at("radius_m").get<double>();
        report.selected = j.at("selected").get<std::string>();
        for (const auto& row : j.at("rows")) {
            MetricsRow r;
            r.label = row.at("model").get<std::string>();
            r.rmse = row.at("rmse").get<double>();
            r.mae = row.at("mae").get<double>();
            r.std_dev = row.at("std").get<double>();
            if (row.contains("aic")) r.aic = row.at("aic").get<double>();
            if (row.contains("bic")) r.bic = row.at("bic").get<double>();
            if (row.contains("n_params")) r.n_params = row.at("n_params").get<int>();
            report.rows.push_back(std::move(r));
        }
        return report;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("report json: ") + e.what());
    }
}

std::string report_to_text(const ModelReport& report) {
    auto num = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%10.4f", v);
        return std::string(buf);
    };
    auto opt = [&](const std::optional<double>& v) {
        return v ? num(*v) : std::string("        --");
    };

    std::string text;
    text += "Model        |       RMSE |        BIC |        AIC |        MAE |        STD\n";
    text += "-------------+------------+------------+------------+------------+-----------\n";
    for (const MetricsRow& r : report.rows) {
        char label[16];
        std::snprintf(label, sizeof(label), "%-12s", r.label.c_str());
        text += std::string(label) + " | " + num(r.rmse) + " | " + opt(r.bic) + " | " +
                opt(r.aic) + " | " + num(r.mae) + " | " + num(r.std_dev) + "\n";
    }
    text += "n_stations: " + std::to_string(report.n_stations) +
            ", radius_m: " + format_g(report.radius_m, 6) + ", selected: " + report.selected +
            " (lowest BIC)\n";
    return text;
}

}  // namespace vlmtie
