#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

namespace vlmtie {

/// Reference frame a velocity field is expressed in. Local means tied to an
/// arbitrary InSAR reference pixel; global means tied to the frame of the
/// coarse VLM model (e.g. ITRF/IGS14).
enum class FrameTag { local, global };

/// One InSAR pixel: position in degrees, vertical rate in mm/yr
/// (positive = uplift). The incidence angle (degrees) is carried only for
/// fields still in line-of-sight geometry.
struct PointSample {
    long long id = 0;
    double lon = 0.0;
    double lat = 0.0;
    double value = 0.0;
    std::optional<double> incidence;
};

struct VelocityField {
    std::vector<PointSample> samples;
    FrameTag frame = FrameTag::local;

    std::size_t size() const { return samples.size(); }

    /// Throws ValueError unless: nonempty, values finite, lat in [-90,90],
    /// lon in [-180,180), ids unique, incidence (where present) in [0,90).
    void validate() const;
};

/// Parses header-bearing CSV with columns lon,lat,value[,incidence].
/// Sequential ids are assigned in input order starting at 0.
/// Throws ParseError (with the offending data row) or ValueError.
VelocityField parse_point_field(std::istream& in, bool has_incidence = false);
VelocityField load_point_field(const std::filesystem::path& path, bool has_incidence = false);

void write_point_field(std::ostream& out, const VelocityField& field, int sig_digits = 17);
void save_point_field(const std::filesystem::path& path, const VelocityField& field,
                      int sig_digits = 17);

inline constexpr double kDefaultMaxIncidenceDeg = 60.0;

/// Converts line-of-sight rates to vertical: value / cos(incidence).
/// Every sample must carry an incidence in [0, max_incidence_deg); the guard
/// keeps the cosine away from zero. The incidence column is retained and the
/// frame tag is unchanged.
VelocityField los_to_vertical(const VelocityField& field,
                              double max_incidence_deg = kDefaultMaxIncidenceDeg);

}  // namespace vlmtie
