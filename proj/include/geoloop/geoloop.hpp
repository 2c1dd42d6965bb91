#pragma once

// Geodesic-loop counting on constant-curvature models: flat tori from
// lattices and hyperbolic surfaces from Fuchsian groups, with pigeonhole
// lower bounds and volume-entropy estimators.

#include "bounds.hpp"
#include "common.hpp"
#include "errors.hpp"
#include "hyperbolic.hpp"
#include "io.hpp"
#include "lattice.hpp"
#include "orbit.hpp"
#include "words.hpp"
