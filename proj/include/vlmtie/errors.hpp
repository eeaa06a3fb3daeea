#pragma once

#include <stdexcept>
#include <string>

namespace vlmtie {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// File could not be opened, read, or written.
struct IoError : Error {
    using Error::Error;
};

/// Malformed input text (message carries the offending row/line).
struct ParseError : Error {
    using Error::Error;
};

/// A domain invariant was violated (range, finiteness, uniqueness, ...).
struct ValueError : Error {
    using Error::Error;
};

/// No InSAR pixel could be resolved against the global model grid.
struct EmptyOverlapError : Error {
    using Error::Error;
};

/// Design matrix is rank deficient (condition number above the limit).
struct RankDeficiencyError : Error {
    using Error::Error;
};

/// No GNSS station collocated with any InSAR pixel.
struct EmptyCollocationError : Error {
    using Error::Error;
};

/// Point field has a degenerate (zero-extent) bounding box.
struct DegenerateExtentError : Error {
    using Error::Error;
};

}  // namespace vlmtie
