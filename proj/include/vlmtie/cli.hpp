#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace vlmtie::cli {

// Stable exit-code contract.
inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;           ///< I/O, parse, or config failure
inline constexpr int kExitOverlap = 2;      ///< no pixel overlaps the model grid
inline constexpr int kExitRank = 3;         ///< rank-deficient design matrix
inline constexpr int kExitCollocation = 4;  ///< no station collocates
inline constexpr int kExitSpectral = 5;     ///< degenerate extent for spectra

/// Numeric precision of CLI-written data files (significant digits).
inline constexpr int kCliSigDigits = 15;

struct TransformOptions {
    std::string local_path;
    std::string grid_path;
    std::string out_dir;
    std::vector<int> degrees{1, 2, 3};
    bool los = false;  ///< input carries LOS values + incidence column
    double max_incidence_deg = 60.0;
};

/// Fits one model per degree and writes, per degree k: model_d<k>.json,
/// transformed_d<k>.csv, correction_d<k>.csv; plus global_oversampled.csv
/// and manifest.json.
int run_transform(const TransformOptions& opt);

struct ValidateOptions {
    std::string local_path;
    std::string gnss_path;
    std::string out_dir;
    std::vector<std::pair<int, std::string>> transformed;  ///< degree -> path
    double radius_m = 100.0;
    double min_span_years = 3.0;
};

/// Writes report.txt, report.json, one ECDF CSV per model, and manifest.json.
int run_validate(const ValidateOptions& opt);

struct SpectrumOptions {
    std::vector<std::pair<std::string, std::string>> fields;  ///< label -> path
    double cellsize_deg = 0.0;
    std::string out_dir;
    std::size_t bins = 24;
    std::optional<std::pair<double, double>> band_km;  ///< slope band, min:max
};

/// Writes spectrum_<label>.csv per field, spectrum_bundle.csv when the bins
/// align, slopes.json, and manifest.json.
int run_spectrum(const SpectrumOptions& opt);

struct SynthOptions {
    std::string spec_path;  ///< empty = built-in default spec
    std::optional<std::uint64_t> seed;
    std::string out_dir;
};

/// Writes truth.csv, local.csv, model.asc, gnss.csv, and manifest.json
/// (which records the spec and the injected distortion coefficients).
int run_synth(const SynthOptions& opt);

}  // namespace vlmtie::cli
