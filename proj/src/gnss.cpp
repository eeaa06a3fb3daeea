#include "vlmtie/gnss.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "vlmtie/errors.hpp"
#include "vlmtie/log.hpp"
#include "vlmtie/util.hpp"

namespace vlmtie {

void GnssStationSet::validate() const {
    std::unordered_set<std::string> seen;
    seen.reserve(stations.size());
    for (const GnssStation& s : stations) {
        if (s.id.empty()) throw ValueError("gnss station with empty id");
        if (!seen.insert(s.id).second) throw ValueError("duplicate gnss station id " + s.id);
        if (!std::isfinite(s.vu)) throw ValueError("station " + s.id + ": non-finite vu");
        if (!std::isfinite(s.sigma) || s.sigma < 0.0)
            throw ValueError("station " + s.id + ": sigma must be finite and >= 0");
    }
}

namespace {

std::string lower(std::string_view sv) {
    std::string s(sv);
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

}  // namespace

GnssParseResult parse_gnss_table(std::istream& in, double min_span_years) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError("gnss table: empty stream");
    auto header = split_csv(line);
    static const char* expect[6] = {"id", "lon", "lat", "vu", "sigma", "span"};
    if (header.size() != 6) throw ParseError("gnss table: header must be id,lon,lat,vu,sigma,span");
    for (int i = 0; i < 6; ++i)
        if (lower(header[i]) != expect[i])
            throw ParseError("gnss table: header must be id,lon,lat,vu,sigma,span");

    GnssParseResult result;
    std::unordered_set<std::string> seen;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        ++row;
        const std::string where = "gnss table row " + std::to_string(row);
        auto fields = split_csv(line);
        if (fields.size() != 6)
            throw ParseError(where + ": expected 6 fields, got " + std::to_string(fields.size()));
        GnssStation s;
        s.id = std::string(fields[0]);
        if (s.id.empty()) throw ParseError(where + ": empty id");
        if (!seen.insert(s.id).second) throw ValueError(where + ": duplicate id " + s.id);
        if (!parse_double(fields[1], s.lon)) throw ParseError(where + ": bad lon");
        if (!parse_double(fields[2], s.lat)) throw ParseError(where + ": bad lat");
        if (!parse_double(fields[3], s.vu)) throw ParseError(where + ": bad vu");
        if (!parse_double(fields[4], s.sigma)) throw ParseError(where + ": bad sigma");
        if (!parse_double(fields[5], s.span)) throw ParseError(where + ": bad span");
        if (!std::isfinite(s.vu)) throw ValueError(where + ": non-finite vu");
        if (!std::isfinite(s.sigma) || s.sigma < 0.0)
            throw ValueError(where + ": sigma must be finite and >= 0");
        if (s.span < min_span_years) {
            ++result.dropped;
            continue;
        }
        result.set.stations.push_back(std::move(s));
    }
    if (result.dropped > 0)
        log::info("gnss table: dropped " + std::to_string(result.dropped) +
                  " station(s) with span < " + format_g(min_span_years, 6) + " yr");
    return result;
}

GnssParseResult load_gnss_table(const std::filesystem::path& path, double min_span_years) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    try {
        return parse_gnss_table(in, min_span_years);
    } catch (const Error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

void write_gnss_table(std::ostream& out, const GnssStationSet& set, int sig_digits) {
    out << "id,lon,lat,vu,sigma,span\n";
    for (const GnssStation& s : set.stations) {
        out << s.id << ',' << format_g(s.lon, sig_digits) << ',' << format_g(s.lat, sig_digits)
            << ',' << format_g(s.vu, sig_digits) << ',' << format_g(s.sigma, sig_digits) << ','
            << format_g(s.span, sig_digits) << '\n';
    }
}

void save_gnss_table(const std::filesystem::path& path, const GnssStationSet& set,
                     int sig_digits) {
    std::ostringstream ss;
    write_gnss_table(ss, set, sig_digits);
    write_file_atomic(path, ss.str());
}

}  // namespace vlmtie
