#pragma once

#include <stdexcept>
#include <string>

namespace a0c {

/// Raised when a loss, gradient or parameter turns non-finite. The message
/// names the offending term or tensor.
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace a0c
