#pragma once

#include <stdexcept>
#include <string>

namespace halc {

// Error taxonomy. The CLI maps ConfigError/UsageError to exit code 2 and
// everything else to 3.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TrainingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace halc
