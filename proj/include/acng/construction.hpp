#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "acng/dataset.hpp"
#include "acng/graph.hpp"
#include "acng/knn_graph.hpp"
#include "acng/pruning.hpp"
#include "acng/search.hpp"

namespace acng {

struct CngParams {
    KnnParams knn;
    uint32_t M = 70;  // max out-degree
    uint32_t L = 60;  // construction queue size
    uint32_t C = 500; // candidate set size
    AdaptiveSchedule sched;  // sched.M is overridden by M during the build
    double tau = 0.0;
    // Single-alpha variant: phases 2/3 run one pruning pass at this alpha.
    std::optional<double> fixed_alpha;
    // Swap in a baseline rule (keeps the rest of the pipeline identical).
    std::optional<PruneRule> rule_override;
    uint64_t seed = 0;

    void validate(uint32_t n) const;
};

struct BuildReport {
    double phase_secs[4] = {};
    uint64_t phase_ndc[4] = {};
    uint32_t navigating_node = 0;
    uint32_t repaired_vertices = 0;
    uint64_t adaptive_prune_calls = 0;  // phases 2 + 3
    uint64_t phase3_prune_calls = 0;
    uint64_t alpha_exhausted_prunes = 0;

    std::string to_json() const;  // stable key order
};

// Phase 1 helper: beam-search the base graph for the point nearest the
// dataset centroid, starting from a seed-chosen random vertex.
uint32_t select_navigating_node(const ProximityGraph& base,
                                const Dataset& data, uint32_t L,
                                uint64_t seed, SearchStats* stats = nullptr);

// Phase 2 helper: beam-search the base graph with p's vector as the query
// and collect every point whose distance to p was computed; returns the C
// closest (p excluded), ascending by (distance, id).
std::vector<Candidate> generate_candidates(const ProximityGraph& base,
                                           const Dataset& data, uint32_t p,
                                           uint32_t entry, uint32_t L,
                                           uint32_t C,
                                           SearchStats* stats = nullptr);

// Phase 4 helper: attach every vertex unreachable from s to its nearest
// reachable neighborhood, evicting the farthest edge of a full vertex only
// when the new edge is shorter. Returns the number of repaired vertices.
uint32_t repair_connectivity(ProximityGraph& graph, const Dataset& data,
                             uint32_t s, uint32_t L, uint64_t* ndc = nullptr);

// The full four-phase pipeline. Resulting graph: out-degree <= M, entry
// point = navigating node, every vertex reachable from it.
std::pair<ProximityGraph, BuildReport> build_cng(const Dataset& data,
                                                 const CngParams& params,
                                                 int threads = 0);

// Variant reusing a prebuilt base K-NN graph (it is not modified). Used
// when several builds share phase 1, e.g. tau grid search.
std::pair<ProximityGraph, BuildReport> build_cng_on_base(
    const Dataset& data, const CngParams& params, const ProximityGraph& base,
    int threads = 0);

}  // namespace acng
