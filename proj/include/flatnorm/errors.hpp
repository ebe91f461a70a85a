#pragma once

#include <stdexcept>
#include <string>

namespace flatnorm {

// Base class for every error raised by the library. The CLI maps these to
// exit codes, so each kind keeps its own type.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DegenerateInput : Error { using Error::Error; };
struct EmptyInput : Error { using Error::Error; };
struct InputError : Error { using Error::Error; };
struct TriangulationFailure : Error { using Error::Error; };
struct ChainEmbeddingError : Error { using Error::Error; };
struct IntegralityViolation : Error { using Error::Error; };
struct Unbounded : Error { using Error::Error; };
struct TooLarge : Error { using Error::Error; };
struct CycleRequired : Error { using Error::Error; };
struct NegativeCycle : Error { using Error::Error; };
struct CertificationFailure : Error { using Error::Error; };
struct SamplingExhausted : Error { using Error::Error; };
struct RegionEmpty : Error { using Error::Error; };
struct AssumptionUnsatisfiable : Error { using Error::Error; };

}  // namespace flatnorm
