#pragma once

// Umbrella header for the open-quantum-systems workbench.

#include "oqbench/common.hpp"
#include "oqbench/rng.hpp"
#include "oqbench/state.hpp"
#include "oqbench/linalg.hpp"
#include "oqbench/random.hpp"
#include "oqbench/serialize.hpp"
#include "oqbench/interferometer.hpp"
#include "oqbench/evolution.hpp"
#include "oqbench/diagnostics.hpp"
#include "oqbench/influence.hpp"
#include "oqbench/circuits.hpp"
#include "oqbench/compensation.hpp"
#include "oqbench/radical_pair.hpp"
#include "oqbench/stats.hpp"
#include "oqbench/csv.hpp"
