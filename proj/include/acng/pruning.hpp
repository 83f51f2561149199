#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "acng/common.hpp"
#include "acng/dataset.hpp"

namespace acng {

// The four edge pruning rules. A candidate u (at distance d_pu from the
// owner p) is pruned by an already-selected neighbor v when the rule's
// inequality holds; d_uv is the candidate-to-neighbor distance.
//
//   ShiftedScaled:  d_pu > alpha * d_uv + (alpha + 1) * tau
//   Triangle:       d_pu > d_uv
//   Scaled:         d_pu > alpha * d_uv
//   Shifted:        d_pu - 3 * tau > d_uv
struct PruneRule {
    enum class Kind { ShiftedScaled, Triangle, Scaled, Shifted };
    Kind kind = Kind::ShiftedScaled;
    double alpha = 1.0;
    double tau = 0.0;

    static PruneRule shifted_scaled(double alpha, double tau);
    static PruneRule triangle();
    static PruneRule scaled(double alpha);
    static PruneRule shifted(double tau);
};

bool prunes(const PruneRule& rule, double d_pu, double d_uv);

// Per-point alpha schedule for adaptive pruning.
struct AdaptiveSchedule {
    double alpha0 = 0.9;
    double alpha_max = 1.6;
    double d_alpha = 0.05;
    uint32_t M = 70;

    void validate() const;
};

using PairDistanceFn = std::function<double(uint32_t, uint32_t)>;

// Memoizes alpha_bar(u, v) = (d_pu - tau) / (d_uv + tau) per candidate
// pair. Scoped to one adaptive_prune call (one owner p).
class PruneCache {
public:
    // d_uv() is only invoked on a cache miss.
    double alpha_bar(uint32_t u, uint32_t v, double d_pu,
                     const std::function<double()>& d_uv, double tau);

    uint64_t pair_evals() const { return pair_evals_; }
    size_t entries() const { return table_.size(); }

private:
    std::unordered_map<uint64_t, double> table_;
    uint64_t pair_evals_ = 0;
};

// Memoized form of prunes(ShiftedScaled(alpha, tau), d_pu, d_uv): true iff
// alpha_bar(u, v) > alpha. Computes d_uv at most once per pair.
bool cached_prunes(PruneCache& cache, uint32_t u, uint32_t v, double d_pu,
                   const std::function<double()>& d_uv, double tau,
                   double alpha);

struct PruneCounters {
    uint64_t pair_distance_evals = 0;  // candidate-candidate distances
    uint32_t rounds = 0;               // pruning passes executed
    bool alpha_exhausted = false;      // loop ended with |S| < floor(M/2)
};

// Algorithm: scan candidates ascending by (distance, id); u joins S iff no
// v in S prunes it. With cap set, scanning stops once |S| == cap.
std::vector<Candidate> prune_candidates(std::span<const Candidate> cands,
                                        const PruneRule& rule,
                                        const PairDistanceFn& pair_dist,
                                        std::optional<uint32_t> cap = {},
                                        uint64_t* pair_evals = nullptr);

// Convenience overload: pair distances from the dataset.
std::vector<Candidate> prune_candidates(const Dataset& data, uint32_t p,
                                        std::span<const Candidate> cands,
                                        const PruneRule& rule,
                                        std::optional<uint32_t> cap = {});

// Adaptive local pruning: ramp alpha from alpha0 by d_alpha while the
// shortcut set is smaller than floor(M/2) and alpha <= alpha_max, then
// return the M closest members of the final set. The last possible round
// terminates its scan early at M members. With use_cache the shifted-
// scaled test goes through a PruneCache; otherwise every round recomputes
// pair distances (same predicate, so outputs are identical).
std::vector<Candidate> adaptive_prune(std::span<const Candidate> cands,
                                      const AdaptiveSchedule& sched,
                                      double tau,
                                      const PairDistanceFn& pair_dist,
                                      bool use_cache = true,
                                      PruneCounters* counters = nullptr);

std::vector<Candidate> adaptive_prune(const Dataset& data, uint32_t p,
                                      std::span<const Candidate> cands,
                                      const AdaptiveSchedule& sched,
                                      double tau,
                                      PruneCounters* counters = nullptr);

}  // namespace acng
