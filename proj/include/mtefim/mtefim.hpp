#pragma once

// Convenience umbrella: the whole library.

#include "mtefim/baselines.hpp"
#include "mtefim/bench.hpp"
#include "mtefim/diffusion.hpp"
#include "mtefim/evo.hpp"
#include "mtefim/graph.hpp"
#include "mtefim/proxy.hpp"
#include "mtefim/rng.hpp"
#include "mtefim/solver.hpp"
#include "mtefim/stats.hpp"
