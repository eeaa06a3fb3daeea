#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "vlmtie/cli.hpp"
#include "vlmtie/errors.hpp"
#include "vlmtie/util.hpp"
#include "vlmtie/version.hpp"

namespace {

/// "key=value" pair arguments, e.g. --transformed 1=d1.csv, --field local=a.csv.
std::pair<std::string, std::string> split_kv(const std::string& arg, const char* what) {
    const auto eq = arg.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 >= arg.size())
        throw CLI::ValidationError(std::string(what) + " must look like KEY=PATH, got '" + arg +
                                   "'");
    return {arg.substr(0, eq), arg.substr(eq + 1)};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string(vlmtie::kToolName) +
                 " - tie InSAR vertical-land-motion fields to a global reference frame"};
    app.set_version_flag("--version", std::string(vlmtie::kVersion));
    app.require_subcommand(1);

    // transform
    auto* transform = app.add_subcommand(
        "transform", "Fit difference polynomials against a global model grid and apply them");
    vlmtie::cli::TransformOptions topt;
    std::vector<int> degrees;
    transform->add_option("--local", topt.local_path, "Local-frame point CSV")->required();
    transform->add_option("--global-grid", topt.grid_path, "Global VLM model, ESRI ASCII grid")
        ->required();
    transform->add_option("--degrees", degrees, "Polynomial degrees to fit (subset of 1,2,3)")
        ->delimiter(',');
    transform->add_option("--out", topt.out_dir, "Output directory")->required();
    transform->add_flag("--los", topt.los,
                        "Input carries line-of-sight values plus an incidence column");
    transform->add_option("--max-incidence", topt.max_incidence_deg,
                          "Reject incidence angles at or above this limit (degrees)");

    // validate
    auto* validate = app.add_subcommand(
        "validate", "Score local and transformed fields against GNSS vertical rates");
    vlmtie::cli::ValidateOptions vopt;
    std::vector<std::string> transformed_args;
    validate->add_option("--local", vopt.local_path, "Local-frame point CSV")->required();
    validate->add_option("--gnss", vopt.gnss_path, "GNSS table CSV")->required();
    validate
        ->add_option("--transformed", transformed_args,
                     "Transformed field as DEGREE=PATH (repeatable)")
        ->required();
    validate->add_option("--radius", vopt.radius_m, "Collocation radius, meters");
    validate->add_option("--min-span", vopt.min_span_years,
                         "Minimum GNSS observation span, years (0 disables the filter)");
    validate->add_option("--out", vopt.out_dir, "Output directory")->required();

    // spectrum
    auto* spectrum = app.add_subcommand(
        "spectrum", "Radially averaged power spectra of up to five point fields");
    vlmtie::cli::SpectrumOptions sopt;
    std::vector<std::string> field_args;
    spectrum->add_option("--field", field_args, "Point field as LABEL=PATH (repeatable)")
        ->required();
    spectrum->add_option("--cellsize", sopt.cellsize_deg, "Rasterization cell size, degrees")
        ->required();
    spectrum->add_option("--bins", sopt.bins, "Number of logarithmic radial bins");
    std::vector<double> band;
    spectrum->add_option("--band", band, "Slope band as WLMIN,WLMAX in km")->delimiter(',');
    spectrum->add_option("--out", sopt.out_dir, "Output directory")->required();

    // synth
    auto* synth = app.add_subcommand(
        "synth", "Generate a synthetic scenario (truth, local, model grid, GNSS)");
    vlmtie::cli::SynthOptions yopt;
    std::uint64_t seed = 0;
    auto* seed_opt = synth->add_option("--seed", seed, "Override the spec seed");
    synth->add_option("--spec", yopt.spec_path, "Scenario spec JSON (defaults when omitted)");
    synth->add_option("--out", yopt.out_dir, "Output directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*transform) {
            if (!degrees.empty()) topt.degrees = degrees;
            return vlmtie::cli::run_transform(topt);
        }
        if (*validate) {
            for (const std::string& arg : transformed_args) {
                auto [key, path] = split_kv(arg, "--transformed");
                long long degree = 0;
                if (!vlmtie::parse_long(key, degree))
                    throw CLI::ValidationError("--transformed degree must be an integer, got '" +
                                               key + "'");
                vopt.transformed.emplace_back(static_cast<int>(degree), path);
            }
            return vlmtie::cli::run_validate(vopt);
        }
        if (*spectrum) {
            for (const std::string& arg : field_args)
                sopt.fields.push_back(split_kv(arg, "--field"));
            if (!band.empty()) {
                if (band.size() != 2)
                    throw CLI::ValidationError("--band needs exactly WLMIN,WLMAX");
                sopt.band_km = {band[0], band[1]};
            }
            return vlmtie::cli::run_spectrum(sopt);
        }
        if (*synth) {
            if (seed_opt->count()) yopt.seed = seed;
            return vlmtie::cli::run_synth(yopt);
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "vlmtie: " << e.what() << '\n';
        return vlmtie::cli::kExitIo;
    }
    return vlmtie::cli::kExitIo;  // unreachable: a subcommand is required
}
