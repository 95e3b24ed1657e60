#pragma once

#include <stdexcept>
#include <string>

namespace twoit {

// Bad inputs: domain violations, malformed hypotheses, improper priors.
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

// An algorithm failed to produce a result at the required accuracy
// (iteration cap hit, degenerate posterior, ...).
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace twoit
