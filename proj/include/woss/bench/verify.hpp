#pragma once

#include <string>
#include <vector>

#include "woss/bench/cluster.hpp"
#include "woss/wf/dag.hpp"
#include "woss/wf/engine.hpp"

namespace woss::bench {

// Post-run invariant checks over the intermediate store:
//  - the `location` attribute equals the block map's replica union,
//  - served-read counters add up to the reads clients issued,
//  - node capacity spent equals the bytes of chunks placed on it.
// Returns human-readable violations; empty means all held.
std::vector<std::string> verify_run(SimCluster& cluster, const wf::ExecutionTrace& trace,
                                    const wf::WorkflowDag& dag);

}  // namespace woss::bench
