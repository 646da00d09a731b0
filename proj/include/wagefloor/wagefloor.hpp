#pragma once

// Umbrella header: the whole library.

#include "wagefloor/cli.hpp"
#include "wagefloor/csv.hpp"
#include "wagefloor/distribution.hpp"
#include "wagefloor/equilibrium.hpp"
#include "wagefloor/errors.hpp"
#include "wagefloor/experiments.hpp"
#include "wagefloor/firm.hpp"
#include "wagefloor/format.hpp"
#include "wagefloor/grids.hpp"
#include "wagefloor/household.hpp"
#include "wagefloor/markov.hpp"
#include "wagefloor/matching.hpp"
#include "wagefloor/params.hpp"
#include "wagefloor/simulation.hpp"
