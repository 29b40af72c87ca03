#pragma once

#include <stdexcept>
#include <string>

namespace spdc {

// Thrown for user-facing configuration problems (bad file, unknown key,
// out-of-range value).  The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Thrown when a numerical routine cannot deliver its contract (non-finite
// kernel values, SVD failure, degenerate fit).  CLI exit code 3.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace spdc
