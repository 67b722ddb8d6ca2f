#pragma once

#include <stdexcept>
#include <string>

namespace rankcred {

// Invalid or inconsistent input data (bad CSV, violated dataset invariants).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A numeric routine could not produce a valid result for the given input.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace rankcred
