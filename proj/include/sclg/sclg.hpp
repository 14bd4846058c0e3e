#pragma once

// Umbrella header for the sclg library.

#include "sclg/special_functions.hpp"
#include "sclg/modes.hpp"
#include "sclg/wigner.hpp"
#include "sclg/operator_core.hpp"
#include "sclg/hamilton_flow.hpp"
#include "sclg/harness.hpp"
#include "sclg/grid_io.hpp"
#include "sclg/svg.hpp"
#include "sclg/cli.hpp"
