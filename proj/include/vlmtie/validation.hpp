#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "vlmtie/gnss.hpp"
#include "vlmtie/point_field.hpp"

namespace vlmtie {

inline constexpr double kDefaultRadiusM = 100.0;

/// Local equirectangular approximation used for station-pixel distances:
/// dx = dlon * 111320 * cos(lat), dy = dlat * 110540, meters. At the 100 m
/// collocation scale the error versus a great circle is below a millimeter.
inline constexpr double kMetersPerDegLon = 111320.0;
inline constexpr double kMetersPerDegLat = 110540.0;

struct CollocationPair {
    std::string station_id;
    double gnss_vu = 0.0;
    double insar_mean = 0.0;
    std::size_t pixel_count = 0;
};

struct CollocationResult {
    std::vector<CollocationPair> pairs;      ///< ordered by station input order
    std::size_t excluded_stations = 0;       ///< stations with no pixel in radius
};

/// Pairs each station's vertical rate with the mean of field values within
/// radius_m. Throws EmptyCollocationError when no station collocates.
/// Parallel over stations; results independent of thread count.
CollocationResult collocate(const VelocityField& field, const GnssStationSet& gnss,
                            double radius_m = kDefaultRadiusM);

struct ResidualMetrics {
    double rmse = 0.0;
    double mae = 0.0;
    double std_dev = 0.0;  ///< sample standard deviation (n-1)
};

/// Metrics of the residuals r_i = insar_mean_i - gnss_vu_i. Needs >= 2 pairs.
ResidualMetrics residual_metrics(std::span<const CollocationPair> pairs);

struct InformationCriteria {
    double aic = 0.0;
    double bic = 0.0;
};

/// Gaussian concentrated-likelihood form over the collocation residuals:
/// aic = n ln(RSS/n) + 2m, bic = n ln(RSS/n) + m ln(n). A zero RSS is
/// reported as -inf with a warning rather than an error.
InformationCriteria information_criteria(std::span<const CollocationPair> pairs, int n_params);

struct EcdfPoint {
    double x = 0.0;
    double f = 0.0;  ///< fraction of values <= x
};

/// Right-continuous empirical CDF: one step per distinct value.
std::vector<EcdfPoint> ecdf(std::span<const double> values);

/// Smallest x with F(x) >= 0.5.
double ecdf_median(const std::vector<EcdfPoint>& curve);

void write_ecdf_csv(std::ostream& out, const std::vector<EcdfPoint>& curve, int sig_digits = 17);

struct MetricsRow {
    std::string label;  ///< "Local InSAR" or "D1".."D3"
    double rmse = 0.0;
    double mae = 0.0;
    double std_dev = 0.0;
    std::optional<double> aic;      ///< absent for the local row
    std::optional<double> bic;
    std::optional<int> n_params;
};

struct ModelReport {
    std::vector<MetricsRow> rows;
    std::size_t n_stations = 0;
    double radius_m = kDefaultRadiusM;
    std::string selected;  ///< lowest-BIC transformed model, ties to lowest degree
};

/// One metrics row per model over a single station set: the intersection of
/// the stations that collocate in every field. AIC/BIC only for the
/// transformed (parametric) rows. All fields must share pixel ids.
ModelReport compare_models(const VelocityField& local,
                           const std::map<int, VelocityField>& transformed,
                           const GnssStationSet& gnss, double radius_m = kDefaultRadiusM);

nlohmann::json report_to_json(const ModelReport& report);
ModelReport report_from_json(const nlohmann::json& j);

/// Aligned text table with the columns Model, RMSE, BIC, AIC, MAE, STD.
std::string report_to_text(const ModelReport& report);

}  // namespace vlmtie
