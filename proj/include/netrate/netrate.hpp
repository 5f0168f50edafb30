#pragma once

#include "netrate/cascade.hpp"
#include "netrate/errors.hpp"
#include "netrate/graph_synthesis.hpp"
#include "netrate/io.hpp"
#include "netrate/likelihood.hpp"
#include "netrate/metrics.hpp"
#include "netrate/network.hpp"
#include "netrate/parallel.hpp"
#include "netrate/random.hpp"
#include "netrate/simulator.hpp"
#include "netrate/solver.hpp"
#include "netrate/sweep.hpp"
#include "netrate/transmission.hpp"

namespace netrate {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace netrate
