#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "acng/dataset.hpp"
#include "acng/graph.hpp"
#include "acng/search.hpp"

namespace acng {

// Per query: the exact k nearest ids, ascending by (distance, id).
using GroundTruth = std::vector<std::vector<uint32_t>>;

GroundTruth compute_ground_truth(const Dataset& data, const Dataset& queries,
                                 uint32_t k, Metric metric = {},
                                 int threads = 0);

void save_ground_truth(const GroundTruth& gt, const std::string& path);
GroundTruth load_ground_truth(const std::string& path);

double recall_at_k(std::span<const uint32_t> result,
                   std::span<const uint32_t> truth);

struct EvalRecord {
    uint32_t L = 0;
    double recall_at_k = 0.0;
    double mean_ndc = 0.0;
    double mean_hops = 0.0;
};

// One record per L, averaged over all queries.
std::vector<EvalRecord> sweep(const ProximityGraph& graph,
                              const Dataset& data, const Dataset& queries,
                              const GroundTruth& truth, uint32_t k,
                              std::span<const uint32_t> L_list,
                              int threads = 0);

// CSV with header L,recall_at_k,mean_ndc,mean_hops, rows ascending by L.
std::string to_csv(std::span<const EvalRecord> records);
void save_csv(std::span<const EvalRecord> records, const std::string& path);

struct TuneResult {
    double tau = 0.0;
    bool target_reached = false;  // false: fell back to best-recall ranking

    struct Row {
        double tau;
        bool reached;
        double ndc;     // mean NDC at the first L meeting the target
        double recall;  // best recall seen (used by the fallback)
        bool refined;   // produced by the refinement stage
    };
    std::vector<Row> rows;
};

struct TuneOptions {
    uint32_t k = 100;
    double target_recall = 0.90;
    std::vector<uint32_t> L_grid = {100, 150, 200, 300, 400, 500};
    std::vector<double> coarse = {10.0, 1.0, 0.1, 0.01, 0.001};
    int threads = 0;
};

using BuildFn = std::function<ProximityGraph(double tau)>;

// Grid search for tau: evaluate tau = 0 and the coarse grid, pick the tau
// minimizing mean NDC at the target recall (ties keep the earlier, so an
// all-tie grid returns 0), then refine with 3 evenly spaced values around
// the winner's decade. Falls back to best-recall ranking when no build
// reaches the target at any L in the grid.
TuneResult tune_tau(const Dataset& data, const Dataset& queries_dev,
                    const BuildFn& build_fn, const TuneOptions& opts = {});

}  // namespace acng
