#pragma once

// Push/pull SIS dynamics on arbitrary graphs: master-equation integration,
// spectral stability thresholds, per-node infection bounds, mean-field
// stationary rates, and localized monitoring estimators.

#include "analysis.hpp"
#include "degree.hpp"
#include "dynamics.hpp"
#include "generators.hpp"
#include "graph.hpp"
#include "io.hpp"
#include "meanfield.hpp"
#include "monitoring.hpp"
#include "monte_carlo.hpp"
#include "rng.hpp"
#include "spectral.hpp"
