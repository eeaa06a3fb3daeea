#include "vlmtie/frame_fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <nlohmann/json.hpp>

#include "detail.hpp"
#include "vlmtie/errors.hpp"
#include "vlmtie/util.hpp"

namespace vlmtie {

NormalizationParams normalize_coords(std::span<const double> lons, std::span<const double> lats,
                                     std::vector<double>* x1, std::vector<double>* x2) {
    if (lons.empty() || lons.size() != lats.size())
        throw ValueError("normalize_coords: need matching, nonempty coordinate spans");

    const std::size_t n = lons.size();
    double lon_min = lons[0], lon_max = lons[0];
    double lat_min = lats[0], lat_max = lats[0];
    for (std::size_t i = 0; i < n; ++i) {
        lon_min = std::min(lon_min, lons[i]);
        lon_max = std::max(lon_max, lons[i]);
        lat_min = std::min(lat_min, lats[i]);
        lat_max = std::max(lat_max, lats[i]);
    }

    // Center on the bounding-box midpoint, not the mean: with half-range
    // scaling only the midpoint guarantees every fit point lands in [-1, 1].
    NormalizationParams norm;
    norm.lon0 = (lon_min + lon_max) / 2.0;
    norm.lat0 = (lat_min + lat_max) / 2.0;
    norm.sx = std::max((lon_max - lon_min) / 2.0, 1e-9);
    norm.sy = std::max((lat_max - lat_min) / 2.0, 1e-9);

    if (x1) {
        x1->resize(n);
        for (std::size_t i = 0; i < n; ++i) (*x1)[i] = (lons[i] - norm.lon0) / norm.sx;
    }
    if (x2) {
        x2->resize(n);
        for (std::size_t i = 0; i < n; ++i) (*x2)[i] = (lats[i] - norm.lat0) / norm.sy;
    }
    return norm;
}

void design_row(double x1, double x2, int degree, double* row) {
    // Graded order: 1; x1, x2; x1^2, x1*x2, x2^2; ... Within degree j the
    // x1 exponent falls from j to 0.
    double p1[kMaxDegree + 1], p2[kMaxDegree + 1];
    p1[0] = p2[0] = 1.0;
    for (int t = 1; t <= degree; ++t) {
        p1[t] = p1[t - 1] * x1;
        p2[t] = p2[t - 1] * x2;
    }
    int idx = 0;
    for (int j = 0; j <= degree; ++j)
        for (int p = 0; p <= j; ++p) row[idx++] = p1[j - p] * p2[p];
}

Eigen::MatrixXd build_design_matrix(std::span<const double> x1, std::span<const double> x2,
                                    int degree) {
    if (degree < kMinDegree || degree > kMaxDegree)
        throw ValueError("polynomial degree must be 1, 2, or 3 (got " + std::to_string(degree) +
                         ")");
    if (x1.size() != x2.size()) throw ValueError("design matrix: coordinate size mismatch");
    const auto n = static_cast<Eigen::Index>(x1.size());
    const int m = coeff_count(degree);
    if (n < m)
        throw ValueError("design matrix underdetermined: " + std::to_string(n) + " points for " +
                         std::to_string(m) + " coefficients");

    Eigen::MatrixXd X(n, m);
    double row[10];
    for (Eigen::Index i = 0; i < n; ++i) {
        design_row(x1[static_cast<std::size_t>(i)], x2[static_cast<std::size_t>(i)], degree, row);
        for (int j = 0; j < m; ++j) X(i, j) = row[j];
    }
    return X;
}

double condition_number(const Eigen::MatrixXd& m) {
    // Reduce tall matrices to their R factor first: Q is orthogonal, so R has
    // the same singular values and the SVD only ever sees a small square.
    Eigen::MatrixXd r;
    if (m.rows() > m.cols()) {
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
        r = qr.matrixQR().topRows(m.cols()).triangularView<Eigen::Upper>();
    } else {
        r = m;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(r);
    const auto& s = svd.singularValues();
    const double smax = s(0);
    const double smin = s(s.size() - 1);
    if (!(smin > 0.0) || !std::isfinite(smax))
        return std::numeric_limits<double>::infinity();
    return smax / smin;
}

PolynomialModel fit_polynomial(const DifferenceField& diff, int degree) {
    const std::size_t n = diff.entries.size();
    const int m = coeff_count(degree);
    if (degree < kMinDegree || degree > kMaxDegree)
        throw ValueError("polynomial degree must be 1, 2, or 3 (got " + std::to_string(degree) +
                         ")");
    if (n < static_cast<std::size_t>(m))
        throw ValueError("fit needs at least " + std::to_string(m) + " points, got " +
                         std::to_string(n));

    std::vector<double> lons(n), lats(n);
    Eigen::VectorXd delta(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        lons[i] = diff.entries[i].lon;
        lats[i] = diff.entries[i].lat;
        delta(static_cast<Eigen::Index>(i)) = diff.entries[i].delta;
    }

    PolynomialModel model;
    model.degree = degree;
    std::vector<double> x1, x2;
    model.norm = normalize_coords(lons, lats, &x1, &x2);

    const Eigen::MatrixXd X = build_design_matrix(x1, x2, degree);
    model.cond = condition_number(X);
    if (!(model.cond <= kRankCondLimit))
        throw RankDeficiencyError("design matrix is rank deficient (degree " +
                                  std::to_string(degree) + ", condition number " +
                                  format_g(model.cond, 6) + " > 1e12)");

    const Eigen::VectorXd beta = X.householderQr().solve(delta);
    model.coeffs.assign(beta.data(), beta.data() + beta.size());
    model.rss = (delta - X * beta).squaredNorm();
    model.n_fit = n;
    return model;
}

PolyEval evaluate_polynomial(const PolynomialModel& model, std::span<const double> lons,
                             std::span<const double> lats) {
    if (lons.size() != lats.size())
        throw ValueError("evaluate_polynomial: coordinate size mismatch");
    if (model.coeffs.size() != static_cast<std::size_t>(coeff_count(model.degree)))
        throw ValueError("evaluate_polynomial: coefficient count does not match degree");

    const std::size_t n = lons.size();
    PolyEval out;
    out.values.resize(n);
    out.extrapolated.resize(n);

#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
        const auto idx = static_cast<std::size_t>(i);
        bool extrap = false;
        out.values[idx] = detail::eval_model_at(model, lons[idx], lats[idx], extrap);
        out.extrapolated[idx] = extrap ? 1 : 0;
    }
    return out;
}

TransformResult transform_field(const VelocityField& field, const PolynomialModel& model) {
    const std::size_t n = field.size();
    if (n == 0) throw ValueError("transform_field: empty field");

    std::vector<double> lons(n), lats(n);
    for (std::size_t i = 0; i < n; ++i) {
        lons[i] = field.samples[i].lon;
        lats[i] = field.samples[i].lat;
    }
    PolyEval eval = evaluate_polynomial(model, lons, lats);

    TransformResult result;
    result.field = field;
    result.field.frame = FrameTag::global;
    for (std::size_t i = 0; i < n; ++i) result.field.samples[i].value += eval.values[i];
    result.correction = std::move(eval.values);
    result.extrapolated = std::move(eval.extrapolated);
    return result;
}

nlohmann::json model_to_json(const PolynomialModel& model) {
    return nlohmann::json{
        {"format", "vlmtie.polynomial_model"},
        {"version", 1},
        {"degree", model.degree},
        {"coeffs", model.coeffs},
        {"norm",
         {{"lon0", model.norm.lon0},
          {"lat0", model.norm.lat0},
          {"sx", model.norm.sx},
          {"sy", model.norm.sy}}},
        {"cond", model.cond},
        {"rss", model.rss},
        {"n_fit", model.n_fit},
    };
}

PolynomialModel model_from_json(const nlohmann::json& j) {
    try {
        if (j.at("format").get<std::string>() != "vlmtie.polynomial_model")
            throw ValueError("model json: unexpected format tag");
        PolynomialModel model;
        model.degree = j.at("degree").get<int>();
        model.coeffs = j.at("coeffs").get<std::vector<double>>();
        const auto& norm = j.at("norm");
        model.norm.lon0 = norm.at("lon0").get<double>();
        model.norm.lat0 = norm.at("lat0").get<double>();
        model.norm.sx = norm.at("sx").get<double>();
        model.norm.sy = norm.at("sy").get<double>();
        model.cond = j.at("cond").get<double>();
        model.rss = j.at("rss").get<double>();
        model.n_fit = j.at("n_fit").get<std::size_t>();
        if (model.degree < kMinDegree || model.degree > kMaxDegree)
            throw ValueError("model json: degree outside {1,2,3}");
        if (model.coeffs.size() != static_cast<std::size_t>(coeff_count(model.degree)))
            throw ValueError("model json: coefficient count does not match degree");
        if (!(model.norm.sx > 0.0) || !(model.norm.sy > 0.0))
            throw ValueError("model json: normalization scales must be > 0");
        return model;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("model json: ") + e.what());
    }
}

void save_model(const std::filesystem::path& path, const PolynomialModel& model) {
    write_file_atomic(path, model_to_json(model).dump(2) + "\n");
}

PolynomialModel load_model(const std::filesystem::path& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    return model_from_json(j);
}

}  // namespace vlmtie
