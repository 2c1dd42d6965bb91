#pragma once

#include <stdexcept>
#include <string>

namespace geoloop {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Lattice basis with |det| below the rank tolerance.
struct SingularBasis : Error {
    using Error::Error;
};

// Witness search invoked with vol(B_r) <= m * covolume.
struct HypothesisNotMet : Error {
    using Error::Error;
};

// Witness grid refinement ran out of depth without reaching the
// requested multiplicity.
struct SearchExhausted : Error {
    using Error::Error;
};

struct EmptyWord : Error {
    using Error::Error;
};

struct NotFreeGroup : Error {
    using Error::Error;
};

struct GeometryMismatch : Error {
    using Error::Error;
};

struct NonpositiveValue : Error {
    using Error::Error;
};

struct BadCurvatureOrder : Error {
    using Error::Error;
};

struct ParseError : Error {
    using Error::Error;
};

} // namespace geoloop
