#pragma once

#include "zzcm/operator_core.hpp"
#include "zzcm/quadrature.hpp"
#include "zzcm/pulse.hpp"
#include "zzcm/lattice.hpp"
#include "zzcm/frame.hpp"
#include "zzcm/cumulant.hpp"
#include "zzcm/propagator.hpp"
#include "zzcm/scenario.hpp"
#include "zzcm/sweep.hpp"
#include "zzcm/config.hpp"
