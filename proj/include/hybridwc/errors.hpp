#pragma once

#include <stdexcept>
#include <string>

namespace hybridwc {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DivisionByZero : Error { using Error::Error; };
struct InvalidPole : Error { using Error::Error; };
struct OutsideCompactType : Error { using Error::Error; };
struct NoNonequivariantLimit : Error { using Error::Error; };
struct InvalidEdge : Error { using Error::Error; };
struct InvalidDegree : Error { using Error::Error; };
struct ContainsStableVertex : Error { using Error::Error; };
struct InternalInvariantViolation : Error { using Error::Error; };

}  // namespace hybridwc
