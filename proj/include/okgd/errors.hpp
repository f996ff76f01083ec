#pragma once

#include <stdexcept>
#include <string>

namespace okgd {

/// Malformed or inconsistent input data (streams, graphs, coordinates).
struct DataError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

/// Invalid configuration values or combinations.
struct ConfigError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

} // namespace okgd
