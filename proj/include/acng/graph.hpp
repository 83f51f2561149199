#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "acng/common.hpp"

namespace acng {

// Bounded-out-degree directed graph over dataset ids. Adjacency lists are
// sorted by (distance to owner, id) ascending; no self-loops, no duplicates.
struct ProximityGraph {
    uint32_t max_degree = 0;
    uint32_t entry_point = 0;
    std::vector<std::vector<uint32_t>> adjacency;

    uint32_t size() const { return static_cast<uint32_t>(adjacency.size()); }
    const std::vector<uint32_t>& neighbors(uint32_t v) const {
        return adjacency[v];
    }

    uint32_t observed_max_degree() const;
    uint64_t edge_count() const;

    // All vertices reachable from entry_point (directed DFS).
    std::vector<uint8_t> reachable_from(uint32_t start) const;

    friend bool operator==(const ProximityGraph& a,
                           const ProximityGraph& b) = default;
};

// ACNG file format, little-endian:
//   "ACNG" | version u32 | n u64 | max_degree u32 | entry_point u64 |
//   per vertex: degree u32, degree x u32 neighbor ids
void save_graph(const ProximityGraph& g, const std::string& path);
ProximityGraph load_graph(const std::string& path);

}  // namespace acng
