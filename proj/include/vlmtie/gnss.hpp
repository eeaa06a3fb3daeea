#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace vlmtie {

/// One GNSS station with vertical rate vu (mm/yr), its reported uncertainty
/// sigma (mm/yr), and the observation span in years.
struct GnssStation {
    std::string id;
    double lon = 0.0;
    double lat = 0.0;
    double vu = 0.0;
    double sigma = 0.0;
    double span = 0.0;
};

struct GnssStationSet {
    std::vector<GnssStation> stations;

    std::size_t size() const { return stations.size(); }
    void validate() const;
};

struct GnssParseResult {
    GnssStationSet set;
    std::size_t dropped = 0;  ///< stations removed by the span filter
};

inline constexpr double kDefaultMinSpanYears = 3.0;

/// Parses CSV with header id,lon,lat,vu,sigma,span. Stations with
/// span < min_span_years are dropped and counted; pass 0 to disable the
/// filter. Throws ParseError / ValueError (duplicate id, non-finite vu, ...).
GnssParseResult parse_gnss_table(std::istream& in,
                                 double min_span_years = kDefaultMinSpanYears);
GnssParseResult load_gnss_table(const std::filesystem::path& path,
                                double min_span_years = kDefaultMinSpanYears);

void write_gnss_table(std::ostream& out, const GnssStationSet& set, int sig_digits = 17);
void save_gnss_table(const std::filesystem::path& path, const GnssStationSet& set,
                     int sig_digits = 17);

}  // namespace vlmtie
