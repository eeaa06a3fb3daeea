#include "vlmtie/point_field.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_set>

#include "vlmtie/errors.hpp"
#include "vlmtie/util.hpp"

namespace vlmtie {

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return out;
}

void check_sample(const PointSample& s, const std::string& where) {
    if (!std::isfinite(s.value))
        throw ValueError(where + ": non-finite value");
    if (!std::isfinite(s.lon) || s.lon < -180.0 || s.lon >= 180.0)
        throw ValueError(where + ": lon " + format_g(s.lon) + " outside [-180, 180)");
    if (!std::isfinite(s.lat) || s.lat < -90.0 || s.lat > 90.0)
        throw ValueError(where + ": lat " + format_g(s.lat) + " outside [-90, 90]");
    if (s.incidence) {
        double inc = *s.incidence;
        if (!std::isfinite(inc) || inc < 0.0 || inc >= 90.0)
            throw ValueError(where + ": incidence " + format_g(inc) + " outside [0, 90)");
    }
}

}  // namespace

void VelocityField::validate() const {
    if (samples.empty()) throw ValueError("velocity field is empty");
    std::unordered_set<long long> seen;
    seen.reserve(samples.size());
    for (const PointSample& s : samples) {
        check_sample(s, "sample id " + std::to_string(s.id));
        if (!seen.insert(s.id).second)
            throw ValueError("duplicate sample id " + std::to_string(s.id));
    }
}

VelocityField parse_point_field(std::istream& in, bool has_incidence) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError("point field: empty stream");

    auto header = split_csv(line);
    bool file_has_incidence = false;
    if (header.size() == 4 && lower(header[3]) == "incidence") {
        file_has_incidence = true;
    } else if (header.size() != 3) {
        throw ParseError("point field: header must be lon,lat,value[,incidence]");
    }
    if (lower(header[0]) != "lon" || lower(header[1]) != "lat" || lower(header[2]) != "value")
        throw ParseError("point field: header must be lon,lat,value[,incidence]");
    if (has_incidence && !file_has_incidence)
        throw ParseError("point field: incidence column required but absent");

    VelocityField field;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        ++row;
        const std::string where = "point field row " + std::to_string(row);
        auto fields = split_csv(line);
        if (fields.size() != (file_has_incidence ? 4u : 3u))
            throw ParseError(where + ": expected " +
                             std::to_string(file_has_incidence ? 4 : 3) + " fields, got " +
                             std::to_string(fields.size()));
        PointSample s;
        s.id = static_cast<long long>(field.samples.size());
        if (!parse_double(fields[0], s.lon)) throw ParseError(where + ": bad lon");
        if (!parse_double(fields[1], s.lat)) throw ParseError(where + ": bad lat");
        if (!parse_double(fields[2], s.value)) throw ParseError(where + ": bad value");
        if (file_has_incidence) {
            double inc;
            if (!parse_double(fields[3], inc)) throw ParseError(where + ": bad incidence");
            s.incidence = inc;
        }
        check_sample(s, where);
        field.samples.push_back(s);
    }
    if (field.samples.empty()) throw ParseError("point field: no data rows");
    return field;
}

VelocityField load_point_field(const std::filesystem::path& path, bool has_incidence) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    try {
        return parse_point_field(in, has_incidence);
    } catch (const Error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

void write_point_field(std::ostream& out, const VelocityField& field, int sig_digits) {
    bool any_inc = false, all_inc = true;
    for (const PointSample& s : field.samples) {
        if (s.incidence) any_inc = true;
        else all_inc = false;
    }
    if (any_inc && !all_inc)
        throw ValueError("cannot serialize a field with a partial incidence column");

    out << (any_inc ? "lon,lat,value,incidence\n" : "lon,lat,value\n");
    for (const PointSample& s : field.samples) {
        out << format_g(s.lon, sig_digits) << ',' << format_g(s.lat, sig_digits) << ','
            << format_g(s.value, sig_digits);
        if (any_inc) out << ',' << format_g(*s.incidence, sig_digits);
        out << '\n';
    }
}

void save_point_field(const std::filesystem::path& path, const VelocityField& field,
                      int sig_digits) {
    std::ostringstream ss;
    write_point_field(ss, field, sig_digits);
    write_file_atomic(path, ss.str());
}

VelocityField los_to_vertical(const VelocityField& field, double max_incidence_deg) {
    VelocityField out = field;
    for (PointSample& s : out.samples) {
        if (!s.incidence)
            throw ValueError("sample id " + std::to_string(s.id) + ": missing incidence");
        double inc = *s.incidence;
        if (inc < 0.0 || inc >= max_incidence_deg)
            throw ValueError("sample id " + std::to_string(s.id) + ": incidence " +
                             format_g(inc) + " outside [0, " + format_g(max_incidence_deg) +
                             ")");
        s.value /= std::cos(inc * std::numbers::pi / 180.0);
    }
    return out;
}

}  // namespace vlmtie
