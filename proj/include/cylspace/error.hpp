#pragma once

#include <stdexcept>
#include <string>

namespace cyl {

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised when an index budget, point limit or search guard is exceeded.
struct resource_error : error {
    using error::error;
};

struct parse_error : error {
    int line, column;
    parse_error(const std::string& msg, int l, int c)
        : error(std::to_string(l) + ":" + std::to_string(c) + ": " + msg), line(l), column(c) {}
};

}  // namespace cyl
