#include "acng/pruning.hpp"

#include <algorithm>
#include <cmath>

namespace acng {

PruneRule PruneRule::shifted_scaled(double alpha, double tau) {
    if (alpha <= 0.0) throw UsageError("ShiftedScaled requires alpha > 0");
    if (tau < 0.0) throw UsageError("ShiftedScaled requires tau >= 0");
    return {Kind::ShiftedScaled, alpha, tau};
}

PruneRule PruneRule::triangle() { return {Kind::Triangle, 1.0, 0.0}; }

PruneRule PruneRule::scaled(double alpha) {
    if (alpha <= 0.0) throw UsageError("Scaled requires alpha > 0");
    return {Kind::Scaled, alpha, 0.0};
}

PruneRule PruneRule::shifted(double tau) {
    if (tau < 0.0) throw UsageError("Shifted requires tau >= 0");
    return {Kind::Shifted, 1.0, tau};
}

// All boundaries are strict: an exactly-boundary candidate is kept.
bool prunes(const PruneRule& rule, double d_pu, double d_uv) {
    switch (rule.kind) {
        case PruneRule::Kind::ShiftedScaled:
            return d_pu > rule.alpha * d_uv + (rule.alpha + 1.0) * rule.tau;
        case PruneRule::Kind::Triangle:
            return d_pu > d_uv;
        case PruneRule::Kind::Scaled:
            return d_pu > rule.alpha * d_uv;
        case PruneRule::Kind::Shifted:
            return d_pu - 3.0 * rule.tau > d_uv;
    }
    return false;
}

void AdaptiveSchedule::validate() const {
    if (alpha0 > alpha_max)
        throw UsageError("adaptive schedule: alpha0 > alpha_max");
    if (d_alpha <= 0.0) throw UsageError("adaptive schedule: d_alpha <= 0");
    if (M < 2) throw UsageError("adaptive schedule: M < 2");
}

double PruneCache::alpha_bar(uint32_t u, uint32_t v, double d_pu,
                             const std::function<double()>& d_uv,
                             double tau) {
    // ordered key: u is the candidate, v the potential pruner
    uint64_t key = (static_cast<uint64_t>(u) << 32) | v;
    auto it = table_.find(key);
    if (it != table_.end()) return it->second;
    ++pair_evals_;
    double ab = (d_pu - tau) / (d_uv() + tau);
    table_.emplace(key, ab);
    return ab;
}

bool cached_prunes(PruneCache& cache, uint32_t u, uint32_t v, double d_pu,
                   const std::function<double()>& d_uv, double tau,
                   double alpha) {
    return cache.alpha_bar(u, v, d_pu, d_uv, tau) > alpha;
}

namespace {

std::vector<Candidate> sorted_copy(std::span<const Candidate> cands) {
    std::vector<Candidate> out(cands.begin(), cands.end());
    std::sort(out.begin(), out.end());
    return out;
}

// One pruning pass over pre-sorted candidates. check(u, v) decides whether
// the selected neighbor v prunes candidate u.
template <typename PruneCheck>
std::vector<Candidate> prune_scan(const std::vector<Candidate>& sorted,
                                  std::optional<uint32_t> cap,
                                  PruneCheck&& check) {
    std::vector<Candidate> shortcut;
    for (const Candidate& u : sorted) {
        bool pruned = false;
        for (const Candidate& v : shortcut) {
            if (check(u, v)) {
                pruned = true;
                break;
            }
        }
        if (!pruned) {
            shortcut.push_back(u);
            if (cap && shortcut.size() >= *cap) break;
        }
    }
    return shortcut;
}

constexpr double kAlphaGridEps = 1e-9;

}  // namespace

std::vector<Candidate> prune_candidates(std::span<const Candidate> cands,
                                        const PruneRule& rule,
                                        const PairDistanceFn& pair_dist,
                                        std::optional<uint32_t> cap,
                                        uint64_t* pair_evals) {
    auto sorted = sorted_copy(cands);
    uint64_t evals = 0;
    auto shortcut = prune_scan(sorted, cap, [&](const Candidate& u,
                                                const Candidate& v) {
        ++evals;
        return prunes(rule, u.dist, pair_dist(u.id, v.id));
    });
    if (pair_evals) *pair_evals += evals;
    return shortcut;
}

std::vector<Candidate> prune_candidates(const Dataset& data, uint32_t p,
                                        std::span<const Candidate> cands,
                                        const PruneRule& rule,
                                        std::optional<uint32_t> cap) {
    (void)p;
    return prune_candidates(
        cands, rule,
        [&data](uint32_t u, uint32_t v) { return distance(data, u, v); },
        cap);
}

std::vector<Candidate> adaptive_prune(std::span<const Candidate> cands,
                                      const AdaptiveSchedule& sched,
                                      double tau,
                                      const PairDistanceFn& pair_dist,
                                      bool use_cache,
                                      PruneCounters* counters) {
    sched.validate();
    if (tau < 0.0) throw UsageError("adaptive_prune: tau < 0");

    auto sorted = sorted_copy(cands);
    const uint32_t half = sched.M / 2;

    PruneCache cache;
    uint64_t naive_evals = 0;
    std::vector<Candidate> shortcut;
    uint32_t rounds = 0;

    for (uint32_t k = 0;; ++k) {
        double alpha = sched.alpha0 + k * sched.d_alpha;
        if (shortcut.size() >= half || alpha > sched.alpha_max + kAlphaGridEps)
            break;
        // The scan may stop at M only when no further round can follow.
        bool last_possible =
            sched.alpha0 + (k + 1) * sched.d_alpha > sched.alpha_max + kAlphaGridEps;
        std::optional<uint32_t> cap =
            last_possible ? std::optional<uint32_t>(sched.M) : std::nullopt;

        if (use_cache) {
            shortcut = prune_scan(sorted, cap, [&](const Candidate& u,
                                                   const Candidate& v) {
                return cached_prunes(
                    cache, u.id, v.id, u.dist,
                    [&] { return pair_dist(u.id, v.id); }, tau, alpha);
            });
        } else {
            shortcut = prune_scan(sorted, cap, [&](const Candidate& u,
                                                   const Candidate& v) {
                ++naive_evals;
                double ab = (u.dist - tau) / (pair_dist(u.id, v.id) + tau);
                return ab > alpha;
            });
        }
        ++rounds;
    }

    if (counters) {
        counters->pair_distance_evals +=
            use_cache ? cache.pair_evals() : naive_evals;
        counters->rounds += rounds;
        if (shortcut.size() < half) counters->alpha_exhausted = true;
    }

    if (shortcut.size() > sched.M) shortcut.resize(sched.M);
    return shortcut;
}

std::vector<Candidate> adaptive_prune(const Dataset& data, uint32_t p,
                                      std::span<const Candidate> cands,
                                      const AdaptiveSchedule& sched,
                                      double tau, PruneCounters* counters) {
    (void)p;
    return adaptive_prune(
        cands, sched, tau,
        [&data](uint32_t u, uint32_t v) { return distance(data, u, v); },
        /*use_cache=*/true, counters);
}

}  // namespace acng
