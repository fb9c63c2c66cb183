#pragma once

// Discrete Malliavin-Stein toolkit for functionals of Rademacher sequences:
// sparse symmetric kernels and star contractions, Walsh chaos decompositions,
// the gradient / divergence / Ornstein-Uhlenbeck operators, explicit
// normal-approximation bounds, and the enumeration engine that verifies each
// bound against the measured distance.

#include "radstein/chaos.hpp"
#include "radstein/contraction.hpp"
#include "radstein/engine.hpp"
#include "radstein/errors.hpp"
#include "radstein/kernel.hpp"
#include "radstein/malliavin.hpp"
#include "radstein/quadrature.hpp"
#include "radstein/rational.hpp"
#include "radstein/rng.hpp"
#include "radstein/sparse.hpp"
#include "radstein/stein.hpp"
#include "radstein/test_function.hpp"
#include "radstein/weights.hpp"

namespace radstein {
inline constexpr const char* version_string = "0.1.0";
}
