#pragma once

// Umbrella header for the skycell simulator library.

#include "skycell/cells.hpp"
#include "skycell/coverage.hpp"
#include "skycell/dqn.hpp"
#include "skycell/env_config.hpp"
#include "skycell/geometry.hpp"
#include "skycell/harness.hpp"
#include "skycell/link_budget.hpp"
#include "skycell/messages.hpp"
#include "skycell/mlp.hpp"
#include "skycell/policies.hpp"
#include "skycell/propagation.hpp"
#include "skycell/replay_buffer.hpp"
#include "skycell/ric_bus.hpp"
#include "skycell/rng.hpp"
#include "skycell/terrain.hpp"
#include "skycell/traffic.hpp"
#include "skycell/ues.hpp"
#include "skycell/world.hpp"

namespace skycell {
inline constexpr const char* kVersion = "1.0.0";
}
