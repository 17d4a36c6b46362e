#pragma once

#include <stdexcept>
#include <string>

namespace upbkit {

// Bad input: wrong dimensions, out-of-range parameters, malformed configs.
class InvalidArgument : public std::invalid_argument {
public:
    explicit InvalidArgument(const std::string& what) : std::invalid_argument(what) {}
};

// A numerical guard tripped: eigensolver non-convergence, positivity violation,
// non-monotone seesaw.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Unextendibility could not be certified (an almost-product vector was found).
class CertificationError : public std::runtime_error {
public:
    explicit CertificationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace upbkit
