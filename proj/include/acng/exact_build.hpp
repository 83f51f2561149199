#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "acng/dataset.hpp"
#include "acng/graph.hpp"
#include "acng/pruning.hpp"

namespace acng {

// Quadratic reference construction: every point is pruned against the
// entire dataset. Guarded by max_n.
struct ExactBuildParams {
    PruneRule rule;
    uint32_t max_n = 20000;
};

// For every p, out-neighbors = shortcut set of p on P \ {p}, no cap.
// Entry point is the point nearest the centroid; max_degree is the
// observed maximum.
ProximityGraph build_exact(const Dataset& data, const ExactBuildParams& params,
                           int threads = 0);

// Point minimizing distance to the centroid, brute force, ties by id.
uint32_t medoid(const Dataset& data);

struct Violation {
    uint32_t query;   // query index, or source vertex for pair checks
    uint32_t vertex;  // offending vertex p (or target z)
    std::string what;
};

// Checks, for every query q with NN v* and every vertex p != v*, that p
// either links straight to v* or has an out-neighbor p' with
// d(p', q) <= d(p, q) / alpha (relative tolerance 1e-6). Queries must
// satisfy d(q, v*) <= tau or a UsageError is raised.
std::vector<Violation> verify_alpha_reducible(const ProximityGraph& graph,
                                              const Dataset& data,
                                              const Dataset& queries,
                                              double tau, double alpha,
                                              int threads = 0);

// Checks, for every ordered non-edge (p, z), that some out-neighbor p' of
// p satisfies d(p', z) <= d(p, z) / alpha (relative tolerance 1e-6).
std::vector<Violation> verify_shortcut_reachable(const ProximityGraph& graph,
                                                 const Dataset& data,
                                                 double alpha,
                                                 int threads = 0);

}  // namespace acng
