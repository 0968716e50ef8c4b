#pragma once

#include <stdexcept>
#include <string>

namespace pgcubic {

/// Input polynomial is not of degree three (leading coefficient vanishes).
struct DegenerateDegreeError : std::domain_error {
    explicit DegenerateDegreeError(const std::string& what) : std::domain_error(what) {}
};

/// A denominator of the moment parametrization fell below the configured floor.
struct SingularParametrizationError : std::domain_error {
    explicit SingularParametrizationError(const std::string& what) : std::domain_error(what) {}
};

/// Operation called on data of the wrong trichotomy class.
struct ClassificationError : std::domain_error {
    explicit ClassificationError(const std::string& what) : std::domain_error(what) {}
};

/// A stated precondition was violated by the caller.
struct PreconditionError : std::invalid_argument {
    explicit PreconditionError(const std::string& what) : std::invalid_argument(what) {}
};

/// A bracketing or refinement step failed; indicates a bug or invalid data.
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace pgcubic
