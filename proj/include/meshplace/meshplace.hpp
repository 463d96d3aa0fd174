#ifndef MESHPLACE_MESHPLACE_HPP
#define MESHPLACE_MESHPLACE_HPP

#include "baselines.hpp"
#include "common.hpp"
#include "geocluster.hpp"
#include "graph_io.hpp"
#include "harness.hpp"
#include "netgraph.hpp"
#include "netstats.hpp"
#include "placement.hpp"
#include "synthgen.hpp"

#endif // MESHPLACE_MESHPLACE_HPP
