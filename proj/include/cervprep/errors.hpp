#pragma once

#include <stdexcept>
#include <string>

namespace cervprep {

/// File could not be read, decoded, or written.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Input is valid but carries no usable structure (e.g. a uniform image
/// collapses k=2 clustering onto a single cluster).
class DegenerateInput : public std::runtime_error {
public:
    explicit DegenerateInput(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace cervprep
