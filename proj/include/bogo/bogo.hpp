#pragma once

// Umbrella header. Pulls in io.hpp and with it the vendored JSON parser;
// include the individual headers instead when that dependency is unwanted.

#include "algebra.hpp"
#include "diagonalize.hpp"
#include "fock.hpp"
#include "implementability.hpp"
#include "io.hpp"
#include "mode_decomp.hpp"
#include "models.hpp"
#include "renorm.hpp"
#include "types.hpp"
