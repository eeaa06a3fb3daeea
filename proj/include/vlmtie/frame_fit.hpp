#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json_fwd.hpp>

#include "vlmtie/point_field.hpp"
#include "vlmtie/resample.hpp"

namespace vlmtie {

inline constexpr int kMinDegree = 1;
inline constexpr int kMaxDegree = 3;

/// Number of coefficients of a bivariate polynomial of the given degree.
constexpr int coeff_count(int degree) { return (degree + 1) * (degree + 2) / 2; }

/// Affine map taking raw lon/lat into well-conditioned fit coordinates:
/// x1 = (lon - lon0)/sx, x2 = (lat - lat0)/sy. Raw degree-3 monomials of
/// geographic coordinates are numerically unusable (condition numbers beyond
/// 1e12), so every fit and evaluation goes through this map.
struct NormalizationParams {
    double lon0 = 0.0;
    double lat0 = 0.0;
    double sx = 1.0;
    double sy = 1.0;

    std::pair<double, double> apply(double lon, double lat) const {
        return {(lon - lon0) / sx, (lat - lat0) / sy};
    }
};

/// Centers on the bounding-box midpoints and scales by half the ranges
/// (floored at 1e-9), so the input points land in [-1, 1]^2. Optionally
/// writes the normalized coordinates to x1/x2.
NormalizationParams normalize_coords(std::span<const double> lons, std::span<const double> lats,
                                     std::vector<double>* x1 = nullptr,
                                     std::vector<double>* x2 = nullptr);

/// Fills row[0..coeff_count(degree)) with the graded monomial basis
/// 1, x1, x2, x1^2, x1*x2, x2^2, ... evaluated at (x1, x2).
void design_row(double x1, double x2, int degree, double* row);

/// n x m matrix of graded monomials of the (normalized) coordinates.
/// Throws ValueError for degree outside {1,2,3} or n < m.
Eigen::MatrixXd build_design_matrix(std::span<const double> x1, std::span<const double> x2,
                                    int degree);

/// Ratio of the largest to smallest singular value; +inf when singular.
double condition_number(const Eigen::MatrixXd& m);

/// Condition number above which a fit is rejected as rank deficient.
inline constexpr double kRankCondLimit = 1e12;

/// Fitted 2D polynomial: coefficients in graded monomial order over the
/// normalized coordinates, plus fit diagnostics.
struct PolynomialModel {
    int degree = 1;
    std::vector<double> coeffs;
    NormalizationParams norm;
    double cond = 0.0;       ///< condition number of the normalized design matrix
    double rss = 0.0;        ///< residual sum of squares over fit pixels, mm^2/yr^2
    std::size_t n_fit = 0;
};

/// Least-squares fit of the difference field via Householder QR of the
/// normalized design matrix (same minimizer as the normal equations, far
/// better conditioned). Throws RankDeficiencyError when cond exceeds
/// kRankCondLimit and ValueError when there are too few points.
PolynomialModel fit_polynomial(const DifferenceField& diff, int degree);

struct PolyEval {
    std::vector<double> values;
    /// 1 where the normalized point lies outside the fit hull [-1,1]^2
    /// (evaluation is permitted there, but it is extrapolation).
    std::vector<std::uint8_t> extrapolated;
};

/// Evaluates the model at raw lon/lat positions. Parallel over points;
/// results independent of thread count.
PolyEval evaluate_polynomial(const PolynomialModel& model, std::span<const double> lons,
                             std::span<const double> lats);

struct TransformResult {
    VelocityField field;               ///< frame tag flipped to global
    std::vector<double> correction;    ///< added per pixel, for audit
    std::vector<std::uint8_t> extrapolated;
};

/// value_out = value_in + model(lon, lat) for every sample.
TransformResult transform_field(const VelocityField& field, const PolynomialModel& model);

nlohmann::json model_to_json(const PolynomialModel& model);
PolynomialModel model_from_json(const nlohmann::json& j);
void save_model(const std::filesystem::path& path, const PolynomialModel& model);
PolynomialModel load_model(const std::filesystem::path& path);

}  // namespace vlmtie
