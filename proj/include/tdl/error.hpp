#pragma once

#include <stdexcept>
#include <string>

namespace tdl {

// Unreadable or malformed input files. The CLI maps this to exit code 2.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A module precondition or numerical failure (zero totals, too few points,
// singular designs, ...). The CLI maps this to exit code 3.
class ComputationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid configuration or arguments. The CLI maps this to exit code 1.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace tdl
