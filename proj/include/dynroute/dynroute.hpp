#pragma once

#include "dynroute/error.hpp"
#include "dynroute/fundamental_diagram.hpp"
#include "dynroute/graph.hpp"
#include "dynroute/harness.hpp"
#include "dynroute/io.hpp"
#include "dynroute/network.hpp"
#include "dynroute/prediction.hpp"
#include "dynroute/report.hpp"
#include "dynroute/routing.hpp"
#include "dynroute/simulation.hpp"
#include "dynroute/scenarios.hpp"
#include "dynroute/timeline.hpp"
#include "dynroute/types.hpp"
