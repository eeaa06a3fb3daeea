#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <vector>

namespace vlmtie {

/// Regular geographic grid in the ESRI ASCII layout: (xll, yll) is the outer
/// corner of the south-west cell, values are stored row-major with the
/// northernmost row first. Cell registration: value j of row i sits at the
/// center of that cell.
struct RasterGrid {
    std::size_t ncols = 0;
    std::size_t nrows = 0;
    double xll = 0.0;
    double yll = 0.0;
    double cellsize = 0.0;
    double nodata = -9999.0;
    std::vector<double> values;

    double at(std::size_t row, std::size_t col) const { return values[row * ncols + col]; }
    double& at(std::size_t row, std::size_t col) { return values[row * ncols + col]; }

    bool is_nodata(double v) const { return v == nodata; }

    double center_lon(std::size_t col) const { return xll + (double(col) + 0.5) * cellsize; }
    /// Latitude of a row counted from the north (storage order).
    double center_lat(std::size_t row) const {
        return yll + (double(nrows - 1 - row) + 0.5) * cellsize;
    }
    double mean_lat() const { return yll + 0.5 * double(nrows) * cellsize; }

    /// Throws ValueError unless ncols,nrows >= 2, cellsize > 0, value count
    /// matches, and every non-nodata value is finite.
    void validate() const;
};

/// Parses an ESRI ASCII grid: six header keys (case-insensitive), then nrows
/// rows of ncols whitespace-separated values, first row = northernmost.
/// NODATA_value is optional in the input and defaults to -9999.
RasterGrid parse_grid(std::istream& in);
RasterGrid load_grid(const std::filesystem::path& path);

void write_grid(std::ostream& out, const RasterGrid& grid, int sig_digits = 17);
void save_grid(const std::filesystem::path& path, const RasterGrid& grid, int sig_digits = 17);

}  // namespace vlmtie
