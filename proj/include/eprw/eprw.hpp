// eprw.hpp
// Umbrella header.

#pragma once

#include "eprw/baselines.hpp"
#include "eprw/config.hpp"
#include "eprw/constants.hpp"
#include "eprw/covariance.hpp"
#include "eprw/epr_measure.hpp"
#include "eprw/fock_state.hpp"
#include "eprw/noise.hpp"
#include "eprw/optimize.hpp"
#include "eprw/phase_space.hpp"
#include "eprw/pm_channel.hpp"
#include "eprw/quadrature.hpp"
#include "eprw/rng.hpp"
#include "eprw/special_functions.hpp"
#include "eprw/state_catalog.hpp"
#include "eprw/sweeps.hpp"
#include "eprw/teleport.hpp"
#include "eprw/transforms.hpp"
#include "eprw/witness_bounds.hpp"
