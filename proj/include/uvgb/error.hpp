#pragma once

#include <stdexcept>
#include <string>

namespace uvgb {

// Bad input data: malformed files, values out of range, degenerate fits.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid arguments or parameter combinations supplied by the caller.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// An inference backend could not be created or failed while running.
class BackendError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace uvgb
