#pragma once

#include <stdexcept>
#include <string>

namespace ccfd {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// scheme_core
struct SingularClosure : Error { using Error::Error; };
struct InvalidParamCount : Error { using Error::Error; };
struct GridTooSmall : Error { using Error::Error; };

// operator
struct SingularA : Error { using Error::Error; };
struct LengthMismatch : Error { using Error::Error; };
struct ShapeMismatch : Error { using Error::Error; };

// analysis
struct DenominatorVanishes : Error { using Error::Error; };
struct NoCrossing : Error { using Error::Error; };

// optimizer
struct NoFeasiblePoint : Error { using Error::Error; };

// pde_solvers
struct NonFiniteState : Error { using Error::Error; };
struct NegativePressure : Error { using Error::Error; };
struct DegenerateErrors : Error { using Error::Error; };

// io
struct SchemeFileError : Error { using Error::Error; };

} // namespace ccfd
