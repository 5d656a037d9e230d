#pragma once

#include <stdexcept>
#include <string>

namespace hml {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidModuliError : Error { using Error::Error; };
struct NonPositiveCError : Error { using Error::Error; };
struct ComplexRootsError : Error { using Error::Error; };
struct MultipleRootError : Error { using Error::Error; };
struct DegenerateRootError : Error { using Error::Error; };
struct NegativeRadicandError : Error { using Error::Error; };
struct IdentityViolationError : Error { using Error::Error; };
struct NoOscillationError : Error { using Error::Error; };
struct QuadratureNonConvergence : Error { using Error::Error; };
struct ZeroVectorError : Error { using Error::Error; };
struct RationalOverflowError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };

} // namespace hml
