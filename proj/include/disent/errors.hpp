#ifndef DISENT_ERRORS_HPP
#define DISENT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace disent {

// Base class for everything thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Shape/length mismatch between operands. Message names both shapes.
struct DimError : Error {
    using Error::Error;
};

// Underlying I/O failed (open, read, write, decompress).
struct IoError : Error {
    using Error::Error;
};

// File content is readable but malformed: bad magic, bad version,
// truncation, inconsistent headers.
struct FormatError : Error {
    using Error::Error;
};

// A computation produced NaN/Inf or otherwise left its numeric domain.
struct NumericError : Error {
    using Error::Error;
};

}  // namespace disent

#endif
