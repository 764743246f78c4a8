#pragma once

#include "errors.hpp"
#include "timegrid.hpp"
#include "gaussians.hpp"
#include "pathsets.hpp"
#include "setspec.hpp"
#include "alpha_engine.hpp"
#include "rng.hpp"
#include "parallel.hpp"
#include "mc_oracle.hpp"
#include "measure_engine.hpp"
#include "oracles.hpp"
#include "verify.hpp"
