#pragma once

#include "agents.hpp"
#include "dda.hpp"
#include "errors.hpp"
#include "features.hpp"
#include "geometry.hpp"
#include "harness.hpp"
#include "settings.hpp"
#include "telemetry.hpp"
#include "world.hpp"
#include "world_config.hpp"
