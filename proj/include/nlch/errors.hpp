#ifndef NLCH_ERRORS_HPP
#define NLCH_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace nlch {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// model
struct NonPositiveCoefficient : Error { using Error::Error; };
struct InvalidSpec : Error { using Error::Error; };
struct OutOfDomain : Error { using Error::Error; };
struct DegeneratePotential : Error { using Error::Error; };

// grid / elliptic
struct GridMismatch : Error { using Error::Error; };
struct NonZeroMean : Error { using Error::Error; };
struct NoConvergence : Error { using Error::Error; };

// stepper
struct NewtonDiverged : Error { using Error::Error; };
struct BarrierViolation : Error { using Error::Error; };
struct DtUnderflow : Error { using Error::Error; };

// diagnostics
struct InsufficientData : Error { using Error::Error; };

// io
struct ParseError : Error { using Error::Error; };
struct ValidationError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };
struct FormatError : Error { using Error::Error; };

}  // namespace nlch

#endif
