#pragma once

#include <cstdint>
#include <vector>

#include "acng/dataset.hpp"
#include "acng/graph.hpp"

namespace acng {

struct KnnParams {
    uint32_t K = 200;
    uint32_t iters = 10;
    double sample_rate = 0.5;       // fraction of join lists examined per round
    uint64_t seed = 0;
    uint32_t exact_threshold = 10000;  // brute force at or below this n

    void validate(uint32_t n) const;
};

// Per-round refinement trace, mainly for tests.
struct KnnBuildLog {
    std::vector<double> kth_distance_sum;  // after each round
    std::vector<uint64_t> changed_entries;
    uint64_t ndc = 0;
    bool used_exact = false;
};

// Exact K-NN graph for n <= exact_threshold, NN-descent refinement above.
// Every vertex ends with exactly K out-neighbors sorted by (distance, id).
// Deterministic for fixed (data, params), independent of thread count.
ProximityGraph build_knn_graph(const Dataset& data, const KnnParams& params,
                               int threads = 0, KnnBuildLog* log = nullptr);

}  // namespace acng
