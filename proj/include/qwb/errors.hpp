#pragma once

#include <stdexcept>
#include <string>

namespace qwb {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Structural validation failures when building a map.
struct NotInvolutionError : Error { using Error::Error; };
struct NotPermutationError : Error { using Error::Error; };
struct DisconnectedError : Error { using Error::Error; };
struct NonPlanarError : Error { using Error::Error; };
struct UnknownVertexError : Error { using Error::Error; };

// Guard rails on unbounded work.
struct ResourceCapError : Error { using Error::Error; };
struct TooLargeError : Error { using Error::Error; };
struct NotConvergedError : Error { using Error::Error; };

// Parameter / precondition problems.
struct ZOutOfRangeError : Error { using Error::Error; };
struct TailUnresolvedError : Error { using Error::Error; };
struct InvalidLocatorError : Error { using Error::Error; };
struct PerimeterMismatchError : Error { using Error::Error; };
struct NotSimpleError : Error { using Error::Error; };
struct FormatError : Error { using Error::Error; };

} // namespace qwb
