#pragma once
#include <stdexcept>
#include <string>

namespace gwf {

// Thrown when a domain-type invariant fails (CLI maps these to exit code 2).
struct invariant_violation : std::runtime_error {
    explicit invariant_violation(const std::string& what) : std::runtime_error(what) {}
};

struct dimension_error : std::invalid_argument {
    explicit dimension_error(const std::string& what) : std::invalid_argument(what) {}
};

struct not_positive_error : std::runtime_error {
    explicit not_positive_error(const std::string& what) : std::runtime_error(what) {}
};

struct window_error : std::invalid_argument {
    explicit window_error(const std::string& what) : std::invalid_argument(what) {}
};

struct resolution_error : std::invalid_argument {
    explicit resolution_error(const std::string& what) : std::invalid_argument(what) {}
};

} // namespace gwf
