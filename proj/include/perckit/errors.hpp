#pragma once

#include <stdexcept>
#include <string>

namespace perckit {

// Malformed input documents, bad CSV rows, unparsable flag values.
// The CLI maps these to exit code 2.
class FormatError : public std::runtime_error {
public:
    explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

// Inputs that parse fine but cannot be acted on (insufficient depth data,
// oracle instance too large, too few samples). CLI exit code 1.
class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace perckit
