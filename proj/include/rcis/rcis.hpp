#pragma once
// Umbrella header: robust controlled invariant sets for monotone control
// systems under lower-closed safety constraints.

#include "dynamics.hpp"
#include "feasibility.hpp"
#include "io.hpp"
#include "models.hpp"
#include "monotonicity.hpp"
#include "order.hpp"
#include "sampling.hpp"
#include "solver.hpp"
