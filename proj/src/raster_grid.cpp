#include "vlmtie/raster_grid.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

#include "vlmtie/errors.hpp"
#include "vlmtie/util.hpp"

namespace vlmtie {

void RasterGrid::validate() const {
    if (ncols < 2 || nrows < 2)
        throw ValueError("grid must be at least 2x2 (got " + std::to_string(ncols) + "x" +
                         std::to_string(nrows) + ")");
    if (!(cellsize > 0.0)) throw ValueError("cellsize must be > 0");
    if (values.size() != ncols * nrows)
        throw ValueError("grid has " + std::to_string(values.size()) + " values, expected " +
                         std::to_string(ncols * nrows));
    for (double v : values)
        if (!is_nodata(v) && !std::isfinite(v))
            throw ValueError("grid contains a non-finite value");
}

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

bool is_header_key(const std::string& tok) {
    return !tok.empty() && (std::isalpha(static_cast<unsigned char>(tok[0])) || tok[0] == '_');
}

}  // namespace

RasterGrid parse_grid(std::istream& in) {
    std::map<std::string, double> header;
    std::string line;

    // Header: lines of "key value" until the first line starting with a number.
    // That first data line is kept in `line` for the data pass below.
    while (true) {
        if (!std::getline(in, line)) throw ParseError("grid: no data rows");
        std::istringstream ls{line};
        std::string key;
        if (!(ls >> key)) continue;  // blank line
        if (!is_header_key(key)) break;
        std::string value_tok;
        double value;
        if (!(ls >> value_tok) || !parse_double(value_tok, value))
            throw ParseError("grid: bad header line '" + line + "'");
        header[lower(key)] = value;
    }

    RasterGrid grid;
    auto require = [&](const char* key) {
        auto it = header.find(key);
        if (it == header.end()) throw ParseError(std::string("grid: missing header key ") + key);
        return it->second;
    };
    double ncols_d = require("ncols");
    double nrows_d = require("nrows");
    if (ncols_d < 1 || nrows_d < 1 || ncols_d != std::floor(ncols_d) ||
        nrows_d != std::floor(nrows_d))
        throw ParseError("grid: ncols/nrows must be positive integers");
    grid.ncols = static_cast<std::size_t>(ncols_d);
    grid.nrows = static_cast<std::size_t>(nrows_d);
    grid.xll = require("xllcorner");
    grid.yll = require("yllcorner");
    grid.cellsize = require("cellsize");
    if (!(grid.cellsize > 0.0)) throw ParseError("grid: cellsize must be > 0");
    if (auto it = header.find("nodata_value"); it != header.end()) grid.nodata = it->second;

    // Data: one line per row, north row first, exactly ncols values each.
    grid.values.reserve(grid.ncols * grid.nrows);
    std::size_t row = 0;
    bool have_line = true;  // `line` already holds the first data row
    while (have_line || std::getline(in, line)) {
        have_line = false;
        if (trim(line).empty()) continue;
        if (row >= grid.nrows) throw ParseError("grid: more data rows than nrows");
        std::istringstream ls{line};
        std::string tok;
        std::size_t col = 0;
        double v;
        while (ls >> tok) {
            if (!parse_double(tok, v))
                throw ParseError("grid: bad value '" + tok + "' in data row " +
                                 std::to_string(row + 1));
            if (col >= grid.ncols)
                throw ParseError("grid: data row " + std::to_string(row + 1) + " has more than " +
                                 std::to_string(grid.ncols) + " values");
            grid.values.push_back(v);
            ++col;
        }
        if (col != grid.ncols)
            throw ParseError("grid: data row " + std::to_string(row + 1) + " has " +
                             std::to_string(col) + " values, expected " +
                             std::to_string(grid.ncols));
        ++row;
    }
    if (row != grid.nrows)
        throw ParseError("grid: got " + std::to_string(row) + " data rows, expected " +
                         std::to_string(grid.nrows));
    grid.validate();
    return grid;
}

RasterGrid load_grid(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    try {
        return parse_grid(in);
    } catch (const Error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

void write_grid(std::ostream& out, const RasterGrid& grid, int sig_digits) {
    grid.validate();
    out << "ncols " << grid.ncols << '\n'
        << "nrows " << grid.nrows << '\n'
        << "xllcorner " << format_g(grid.xll, sig_digits) << '\n'
        << "yllcorner " << format_g(grid.yll, sig_digits) << '\n'
        << "cellsize " << format_g(grid.cellsize, sig_digits) << '\n'
        << "NODATA_value " << format_g(grid.nodata, sig_digits) << '\n';
    for (std::size_t r = 0; r < grid.nrows; ++r) {
        for (std::size_t c = 0; c < grid.ncols; ++c) {
            if (c) out << ' ';
            out << format_g(grid.at(r, c), sig_digits);
        }
        out << '\n';
    }
}

void save_grid(const std::filesystem::path& path, const RasterGrid& grid, int sig_digits) {
    std::ostringstream ss;
    write_grid(ss, grid, sig_digits);
    write_file_atomic(path, ss.str());
}

}  // namespace vlmtie
