#pragma once

#include <stdexcept>
#include <string>

namespace denseries {

//! Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

//! Invalid parameters or run configuration (CLI exit code 2).
struct ConfigError : Error {
    using Error::Error;
};

//! Malformed or inadmissible input data (CLI exit code 3).
struct DataError : Error {
    using Error::Error;
};

//! Numeric failure during computation (CLI exit code 4): degenerate
//! samples, empty kernel neighborhoods, mismatched grids, domain errors.
struct NumericError : Error {
    using Error::Error;
};

} // namespace denseries
