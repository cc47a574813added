#pragma once

#include <stdexcept>
#include <string>

namespace shellfh {

/// Violated call contract: an uncertified or underpowered rule, a bad input
/// file, a point off the shell. Maps to CLI exit code 2.
class precondition_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An iterative numerical procedure failed to converge. CLI exit code 3.
class numerical_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace shellfh
