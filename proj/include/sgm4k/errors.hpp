#pragma once

#include <stdexcept>
#include <string>

namespace sgm4k {

// Invalid argument or configuration. CLI maps this to exit code 1.
struct param_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Filesystem or OS failure. CLI maps this to exit code 2.
struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed file contents. Messages name the offending field. Exit code 3.
struct format_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace sgm4k
