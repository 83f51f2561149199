#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "acng/common.hpp"
#include "acng/dataset.hpp"
#include "acng/graph.hpp"

namespace acng {

struct SearchParams {
    uint32_t L = 1;                      // queue size, >= k
    uint32_t k = 1;                      // results requested
    std::optional<uint32_t> entry = {};  // default: graph entry point

    void validate(const ProximityGraph& g) const;
};

// Per-query counters. Each vertex's distance is computed at most once, so
// ndc == visited; hops counts explored hop vertices.
struct SearchStats {
    uint64_t ndc = 0;
    uint64_t hops = 0;
    uint64_t visited = 0;
};

// Beam search: keep a queue of the L closest visited vertices, repeatedly
// explore the closest unexplored one. Returns the k closest of the final
// queue, ascending by (distance, id). With touched != nullptr, every
// vertex whose distance was computed is appended to it.
std::vector<Candidate> beam_search(const ProximityGraph& graph,
                                   const Dataset& data,
                                   std::span<const float> query,
                                   const SearchParams& params,
                                   SearchStats* stats = nullptr,
                                   std::vector<Candidate>* touched = nullptr);

struct GreedyRoute {
    uint32_t terminal = 0;
    std::vector<uint32_t> path;  // hop vertices, entry first
    SearchStats stats;
};

// Beam search with L = 1; hop distances to the query strictly decrease.
GreedyRoute greedy_route(const ProximityGraph& graph, const Dataset& data,
                         std::span<const float> query,
                         std::optional<uint32_t> entry = {});

}  // namespace acng
