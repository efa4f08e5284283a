#pragma once

#include "potfp/batch.hpp"
#include "potfp/config.hpp"
#include "potfp/equilibria.hpp"
#include "potfp/errors.hpp"
#include "potfp/game.hpp"
#include "potfp/json_io.hpp"
#include "potfp/potential.hpp"
#include "potfp/rate.hpp"
#include "potfp/rng.hpp"
#include "potfp/simulate.hpp"
