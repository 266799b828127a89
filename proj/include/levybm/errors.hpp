#pragma once

#include <stdexcept>
#include <string>

namespace levybm {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Triplet construction / validation problems.
struct InvalidTriplet : Error { using Error::Error; };

// Numerical integration of a density-backed measure did not converge.
struct QuadratureFailure : Error { using Error::Error; };

// Requested an operation that is undefined at a degenerate frequency
// (Re psi(theta) vanishes, or the whole exponent vanishes).
struct DegenerateTheta : Error { using Error::Error; };

// Sampling errors.
struct UnsampleableFamily : Error { using Error::Error; };
struct StepTooCoarse : Error { using Error::Error; };

// Integration / grid errors.
struct HorizonTooShort : Error { using Error::Error; };
struct GridMismatch : Error { using Error::Error; };

// Multi-frequency admissibility violated; message names the failing condition.
struct AdmissibilityFailure : Error { using Error::Error; };

// Statistical verification preconditions.
struct PartitionTooFine : Error { using Error::Error; };
struct TooFewSamples : Error { using Error::Error; };

// Config / IO.
struct ParseError : Error { using Error::Error; };
struct ValidationError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

}  // namespace levybm
