#include "vlmtie/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "vlmtie/errors.hpp"
#include "vlmtie/gnss.hpp"
#include "vlmtie/log.hpp"
#include "vlmtie/manifest.hpp"
#include "vlmtie/pipeline.hpp"
#include "vlmtie/point_field.hpp"
#include "vlmtie/raster_grid.hpp"
#include "vlmtie/spectral.hpp"
#include "vlmtie/synth.hpp"
#include "vlmtie/util.hpp"
#include "vlmtie/validation.hpp"

namespace fs = std::filesystem;

namespace vlmtie::cli {

namespace {

/// Runs a subcommand body and maps the error taxonomy onto the stable exit
/// codes, printing a one-line diagnostic.
template <typename F>
int guarded(const char* subcommand, F&& body) {
    try {
        body();
        return kExitOk;
    } catch (const EmptyOverlapError& e) {
        std::cerr << "vlmtie " << subcommand << ": " << e.what() << '\n';
        return kExitOverlap;
    } catch (const RankDeficiencyError& e) {
        std::cerr << "vlmtie " << subcommand << ": " << e.what() << '\n';
        return kExitRank;
    } catch (const EmptyCollocationError& e) {
        std::cerr << "vlmtie " << subcommand << ": " << e.what() << '\n';
        return kExitCollocation;
    } catch (const DegenerateExtentError& e) {
        std::cerr << "vlmtie " << subcommand << ": " << e.what() << '\n';
        return kExitSpectral;
    } catch (const std::exception& e) {
        std::cerr << "vlmtie " << subcommand << ": " << e.what() << '\n';
        return kExitIo;
    }
}

std::vector<int> checked_degrees(std::vector<int> degrees) {
    if (degrees.empty()) throw ValueError("at least one degree is required");
    std::sort(degrees.begin(), degrees.end());
    degrees.erase(std::unique(degrees.begin(), degrees.end()), degrees.end());
    for (int d : degrees)
        if (d < kMinDegree || d > kMaxDegree)
            throw ValueError("degree " + std::to_string(d) + " outside {1,2,3}");
    return degrees;
}

void ensure_out_dir(const std::string& dir) {
    if (dir.empty()) throw ValueError("output directory is required");
    fs::create_directories(dir);
}

}  // namespace

int run_transform(const TransformOptions& opt) {
    return guarded("transform", [&] {
        const std::vector<int> degrees = checked_degrees(opt.degrees);
        ensure_out_dir(opt.out_dir);
        const fs::path out(opt.out_dir);

        VelocityField local = load_point_field(opt.local_path, opt.los);
        local.validate();
        if (opt.los) local = los_to_vertical(local, opt.max_incidence_deg);
        const RasterGrid grid = load_grid(opt.grid_path);

        Manifest manifest("transform",
                          {{"local", opt.local_path},
                           {"global_grid", opt.grid_path},
                           {"degrees", degrees},
                           {"los", opt.los},
                           {"max_incidence_deg", opt.max_incidence_deg},
                           {"out", opt.out_dir}});
        manifest.add_input(opt.local_path);
        manifest.add_input(opt.grid_path);

        const FramePrep prep = prepare_frame_tie(local, grid);
        log::info("oversampled " + std::to_string(prep.diff.entries.size()) + " of " +
                  std::to_string(local.size()) + " pixels (" +
                  std::to_string(prep.diff.excluded_count) + " excluded)");

        // The oversampled model values, for plotting against the local field.
        {
            std::ostringstream ss;
            ss << "id,lon,lat,model_value\n";
            for (std::size_t i = 0; i < prep.diff.entries.size(); ++i) {
                const DifferenceEntry& e = prep.diff.entries[i];
                ss << e.id << ',' << format_g(e.lon, kCliSigDigits) << ','
                   << format_g(e.lat, kCliSigDigits) << ','
                   << format_g(prep.oversample.model_values[i], kCliSigDigits) << '\n';
            }
            write_file_atomic(out / "global_oversampled.csv", ss.str());
            manifest.add_output(out / "global_oversampled.csv");
        }

        for (int degree : degrees) {
            const TiedField tied = tie_frame(local, prep, degree);
            const std::string suffix = "_d" + std::to_string(degree);

            save_model(out / ("model" + suffix + ".json"), tied.model);
            save_point_field(out / ("transformed" + suffix + ".csv"), tied.transformed,
                             kCliSigDigits);

            std::ostringstream ss;
            ss << "id,lon,lat,correction,corrected,extrapolated\n";
            for (std::size_t i = 0; i < tied.transformed.size(); ++i) {
                const PointSample& s = tied.transformed.samples[i];
                ss << s.id << ',' << format_g(s.lon, kCliSigDigits) << ','
                   << format_g(s.lat, kCliSigDigits) << ','
                   << format_g(tied.correction[i], kCliSigDigits) << ','
                   << int(tied.corrected[i]) << ',' << int(tied.extrapolated[i]) << '\n';
            }
            write_file_atomic(out / ("correction" + suffix + ".csv"), ss.str());

            manifest.add_output(out / ("model" + suffix + ".json"));
            manifest.add_output(out / ("transformed" + suffix + ".csv"));
            manifest.add_output(out / ("correction" + suffix + ".csv"));

            std::cout << "degree " << degree << ": cond " << format_g(tied.model.cond, 6)
                      << ", rss " << format_g(tied.model.rss, kCliSigDigits) << ", n_fit "
                      << tied.model.n_fit << ", excluded " << tied.excluded_count << '\n';
        }
        manifest.save(out);
    });
}

int run_validate(const ValidateOptions& opt) {
    return guarded("validate", [&] {
        if (opt.transformed.empty())
            throw ValueError("at least one --transformed degree=path is required");
        ensure_out_dir(opt.out_dir);
        const fs::path out(opt.out_dir);

        VelocityField local = load_point_field(opt.local_path);
        local.validate();

        std::map<int, VelocityField> transformed;
        for (const auto& [degree, path] : opt.transformed) {
            if (degree < kMinDegree || degree > kMaxDegree)
                throw ValueError("degree " + std::to_string(degree) + " outside {1,2,3}");
            if (transformed.count(degree))
                throw ValueError("duplicate --transformed degree " + std::to_string(degree));
            VelocityField f = load_point_field(path);
            f.validate();
            f.frame = FrameTag::global;
            transformed.emplace(degree, std::move(f));
        }

        const GnssParseResult gnss = load_gnss_table(opt.gnss_path, opt.min_span_years);
        if (gnss.set.stations.empty())
            throw EmptyCollocationError("no usable gnss station (" +
                                        std::to_string(gnss.dropped) +
                                        " dropped by the span filter)");

        Manifest manifest("validate",
                          {{"local", opt.local_path},
                           {"gnss", opt.gnss_path},
                           {"radius_m", opt.radius_m},
                           {"min_span_years", opt.min_span_years},
                           {"out", opt.out_dir}});
        manifest.add_input(opt.local_path);
        manifest.add_input(opt.gnss_path);
        nlohmann::json transformed_cfg = nlohmann::json::object();
        for (const auto& [degree, path] : opt.transformed) {
            transformed_cfg["d" + std::to_string(degree)] = path;
            manifest.add_input(path);
        }

        const ModelReport report = compare_models(local, transformed, gnss.set, opt.radius_m);

        const std::string text = report_to_text(report);
        write_file_atomic(out / "report.txt", text);
        write_file_atomic(out / "report.json", report_to_json(report).dump(2) + "\n");
        manifest.add_output(out / "report.txt");
        manifest.add_output(out / "report.json");

        // Pixel-value distributions per model; the horizontal offset between
        // these curves is the bulk frame shift.
        auto emit_ecdf = [&](const std::string& name, const VelocityField& f) {
            std::vector<double> values(f.size());
            for (std::size_t i = 0; i < f.size(); ++i) values[i] = f.samples[i].value;
            std::ostringstream ss;
            write_ecdf_csv(ss, ecdf(values), kCliSigDigits);
            write_file_atomic(out / ("ecdf_" + name + ".csv"), ss.str());
            manifest.add_output(out / ("ecdf_" + name + ".csv"));
        };
        emit_ecdf("local", local);
        for (const auto& [degree, field] : transformed)
            emit_ecdf("d" + std::to_string(degree), field);

        manifest.save(out);
        std::cout << text;
    });
}

int run_spectrum(const SpectrumOptions& opt) {
    return guarded("spectrum", [&] {
        if (opt.fields.empty()) throw ValueError("at least one --field label=path is required");
        if (opt.fields.size() > 5) throw ValueError("at most five labeled fields are supported");
        if (!(opt.cellsize_deg > 0.0)) throw ValueError("--cellsize must be > 0");
        {
            std::set<std::string> labels;
            for (const auto& [label, path] : opt.fields)
                if (label.empty() || !labels.insert(label).second)
                    throw ValueError("field labels must be nonempty and unique");
        }
        ensure_out_dir(opt.out_dir);
        const fs::path out(opt.out_dir);

        Manifest manifest("spectrum", {{"cellsize_deg", opt.cellsize_deg},
                                       {"bins", opt.bins},
                                       {"out", opt.out_dir}});

        std::vector<SpectrumCurve> curves;
        for (const auto& [label, path] : opt.fields) {
            VelocityField field = load_point_field(path);
            field.validate();
            manifest.add_input(path);

            SpectrumCurve curve = field_spectrum(field, opt.cellsize_deg, opt.bins);
            curve.field_label = label;
            try {
                curve = normalize_spectrum(curve);
            } catch (const ValueError&) {
                log::warn("field '" + label +
                          "' has an all-zero spectrum (constant field); emitting it unnormalized");
            }
            curves.push_back(std::move(curve));
        }

        for (const SpectrumCurve& curve : curves) {
            std::ostringstream ss;
            write_spectrum_csv(ss, curve, kCliSigDigits);
            write_file_atomic(out / ("spectrum_" + curve.field_label + ".csv"), ss.str());
            manifest.add_output(out / ("spectrum_" + curve.field_label + ".csv"));
        }

        try {
            std::ostringstream ss;
            write_spectrum_bundle_csv(ss, curves, kCliSigDigits);
            write_file_atomic(out / "spectrum_bundle.csv", ss.str());
            manifest.add_output(out / "spectrum_bundle.csv");
        } catch (const ValueError& e) {
            log::warn(std::string("bundle not written: ") + e.what());
        }

        nlohmann::json slopes = nlohmann::json::object();
        for (const SpectrumCurve& curve : curves) {
            double wl_min = opt.band_km ? opt.band_km->first : 0.0;
            double wl_max = opt.band_km ? opt.band_km->second : 0.0;
            if (!opt.band_km && !curve.bins.empty()) {
                wl_min = curve.bins.back().wavelength_km;
                wl_max = curve.bins.front().wavelength_km;
            }
            try {
                slopes[curve.field_label] = {{"wl_min_km", wl_min},
                                             {"wl_max_km", wl_max},
                                             {"slope", spectral_slope(curve, wl_min, wl_max)}};
            } catch (const ValueError& e) {
                slopes[curve.field_label] = {{"wl_min_km", wl_min},
                                             {"wl_max_km", wl_max},
                                             {"slope", nullptr},
                                             {"reason", e.what()}};
            }
        }
        write_file_atomic(out / "slopes.json", slopes.dump(2) + "\n");
        manifest.add_output(out / "slopes.json");
        manifest.save(out);
    });
}

int run_synth(const SynthOptions& opt) {
    return guarded("synth", [&] {
        ensure_out_dir(opt.out_dir);
        const fs::path out(opt.out_dir);

        ScenarioSpec spec;
        if (!opt.spec_path.empty()) {
            nlohmann::json j;
            try {
                j = nlohmann::json::parse(read_file(opt.spec_path));
            } catch (const nlohmann::json::exception& e) {
                throw ParseError(opt.spec_path + ": " + e.what());
            }
            spec = spec_from_json(j);
        }
        if (opt.seed) spec.seed = *opt.seed;

        const Scenario scenario = make_scenario(spec);

        save_point_field(out / "truth.csv", scenario.truth, kCliSigDigits);
        save_point_field(out / "local.csv", scenario.local, kCliSigDigits);
        save_grid(out / "model.asc", scenario.coarse_model, kCliSigDigits);
        save_gnss_table(out / "gnss.csv", scenario.gnss, kCliSigDigits);

        nlohmann::json config = spec_to_json(spec);
        config["injected_distortion"] = {{"degree", spec.frame_distortion.degree},
                                         {"coeffs", spec.frame_distortion.coeffs}};
        Manifest manifest("synth", config);
        if (!opt.spec_path.empty()) manifest.add_input(opt.spec_path);
        manifest.add_output(out / "truth.csv");
        manifest.add_output(out / "local.csv");
        manifest.add_output(out / "model.asc");
        manifest.add_output(out / "gnss.csv");
        manifest.save(out);

        std::cout << "injected frame distortion (degree " << spec.frame_distortion.degree
                  << ", normalized domain coords):";
        for (double c : spec.frame_distortion.coeffs)
            std::cout << ' ' << format_g(c, kCliSigDigits);
        std::cout << '\n';
    });
}

}  // namespace vlmtie::cli
