#pragma once

#include <stdexcept>
#include <string>

namespace leocrlb {

class DegenerateGeometryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace leocrlb
