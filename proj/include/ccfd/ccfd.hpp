#pragma once

// Globally conservative fourth-order compact finite-difference schemes:
// coefficient construction, resolution/stability analysis, optimization, and
// hyperbolic benchmark solvers.

#include "ccfd/analysis.hpp"
#include "ccfd/banded.hpp"
#include "ccfd/errors.hpp"
#include "ccfd/grid.hpp"
#include "ccfd/matrices.hpp"
#include "ccfd/operator.hpp"
#include "ccfd/optimize.hpp"
#include "ccfd/scheme.hpp"
#include "ccfd/scheme_io.hpp"
#include "ccfd/solvers.hpp"
#include "ccfd/tables.hpp"
