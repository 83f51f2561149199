#include "acng/construction.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <random>

#include "json.hpp"

namespace acng {

void CngParams::validate(uint32_t n) const {
    if (M < 2) throw UsageError("cng: M must be >= 2");
    if (C < M) throw UsageError("cng: C must be >= M");
    if (L < 1) throw UsageError("cng: L must be >= 1");
    if (tau < 0.0) throw UsageError("cng: tau must be >= 0");
    if (fixed_alpha && *fixed_alpha <= 0.0)
        throw UsageError("cng: fixed_alpha must be > 0");
    knn.validate(n);
    AdaptiveSchedule s = sched;
    s.M = M;
    s.validate();
}

std::string BuildReport::to_json() const {
    nlohmann::ordered_json j;
    j["phases"] = nlohmann::ordered_json::array();
    const char* names[4] = {"base_graph", "candidate_pruning",
                            "backward_edges", "connectivity"};
    for (int i = 0; i < 4; ++i) {
        nlohmann::ordered_json p;
        p["name"] = names[i];
        p["seconds"] = phase_secs[i];
        p["distance_computations"] = phase_ndc[i];
        j["phases"].push_back(p);
    }
    j["navigating_node"] = navigating_node;
    j["repaired_vertices"] = repaired_vertices;
    j["adaptive_prune_calls"] = adaptive_prune_calls;
    j["phase3_prune_calls"] = phase3_prune_calls;
    j["alpha_exhausted_prunes"] = alpha_exhausted_prunes;
    return j.dump(2);
}

uint32_t select_navigating_node(const ProximityGraph& base,
                                const Dataset& data, uint32_t L,
                                uint64_t seed, SearchStats* stats) {
    std::mt19937_64 rng(seed);
    uint32_t entry = static_cast<uint32_t>(rng() % data.size());
    std::vector<float> c = data.centroid();
    SearchParams p{std::max<uint32_t>(L, 1), 1, entry};
    auto res = beam_search(base, data, c, p, stats);
    return res.front().id;
}

std::vector<Candidate> generate_candidates(const ProximityGraph& base,
                                           const Dataset& data, uint32_t p,
                                           uint32_t entry, uint32_t L,
                                           uint32_t C, SearchStats* stats) {
    std::vector<Candidate> touched;
    SearchParams sp{std::max<uint32_t>(L, 1), 1, entry};
    beam_search(base, data, data.row(p), sp, stats, &touched);

    std::erase_if(touched, [p](const Candidate& c) { return c.id == p; });
    if (touched.size() > C) {
        std::nth_element(touched.begin(), touched.begin() + C - 1,
                         touched.end());
        touched.resize(C);
    }
    std::sort(touched.begin(), touched.end());
    return touched;
}

namespace {

using Clock = std::chrono::steady_clock;

double secs_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Phase 2/3 neighbor selection: adaptive pruning by default, a single
// capped pass for the fixed-alpha variant or a swapped-in rule.
struct Pruner {
    const Dataset& data;
    const CngParams& params;
    AdaptiveSchedule sched;

    explicit Pruner(const Dataset& d, const CngParams& p)
        : data(d), params(p), sched(p.sched) {
        sched.M = p.M;
    }

    std::vector<Candidate> select(uint32_t p,
                                  std::span<const Candidate> cands,
                                  uint64_t& ndc, uint64_t& adaptive_calls,
                                  uint64_t& exhausted) const {
        if (params.rule_override || params.fixed_alpha) {
            PruneRule rule = params.rule_override
                                 ? *params.rule_override
                                 : PruneRule::shifted_scaled(
                                       *params.fixed_alpha, params.tau);
            uint64_t evals = 0;
            auto out = prune_candidates(
                cands, rule,
                [this](uint32_t a, uint32_t b) {
                    return distance(data, a, b);
                },
                params.M, &evals);
            ndc += evals;
            return out;
        }
        PruneCounters pc;
        auto out = adaptive_prune(data, p, cands, sched, params.tau, &pc);
        ndc += pc.pair_distance_evals;
        ++adaptive_calls;
        if (pc.alpha_exhausted) ++exhausted;
        return out;
    }
};

}  // namespace

uint32_t repair_connectivity(ProximityGraph& graph, const Dataset& data,
                             uint32_t s, uint32_t L, uint64_t* ndc) {
    const uint32_t n = graph.size();
    const uint32_t M = graph.max_degree;
    uint32_t repaired = 0;
    uint64_t dist_evals = 0;

    for (uint32_t round = 0; round <= n; ++round) {
        auto reach = graph.reachable_from(s);
        bool all = true;
        for (uint32_t p = 0; p < n; ++p) all = all && reach[p];
        if (all) {
            if (ndc) *ndc += dist_evals;
            return repaired;
        }
        if (round == n)
            throw ConstructionError(
                "connectivity repair did not converge");

        for (uint32_t p = 0; p < n; ++p) {
            if (reach[p]) continue;

            auto try_attach = [&](const std::vector<Candidate>& touched,
                                  bool force) {
                for (const Candidate& t : touched) {
                    if (t.id == p) continue;
                    auto& nb = graph.adjacency[t.id];
                    double d_tp = t.dist;
                    if (nb.size() >= M) {
                        double d_far = distance(data, t.id, nb.back());
                        ++dist_evals;
                        if (!force && !(d_tp < d_far)) continue;
                        nb.pop_back();
                    }
                    // keep the list sorted by (distance to t, id)
                    auto pos = std::lower_bound(
                        nb.begin(), nb.end(), Candidate{p, d_tp},
                        [&](uint32_t a, const Candidate& c) {
                            double da = distance(data, t.id, a);
                            ++dist_evals;
                            return Candidate{a, da} < c;
                        });
                    nb.insert(pos, p);
                    return true;
                }
                return false;
            };

            SearchStats st;
            std::vector<Candidate> touched;
            SearchParams sp{std::max<uint32_t>(L, 1), 1, s};
            beam_search(graph, data, data.row(p), sp, &st, &touched);
            dist_evals += st.ndc;
            std::sort(touched.begin(), touched.end());
            bool attached = try_attach(touched, false);

            if (!attached) {
                // the beam saw no vertex that can take the edge without
                // displacing a closer neighbor; scan every currently
                // reachable vertex, then force the eviction at the nearest
                std::vector<Candidate> all;
                all.reserve(n);
                for (uint32_t t = 0; t < n; ++t) {
                    if (t == p || !reach[t]) continue;
                    all.push_back({t, distance(data, t, p)});
                    ++dist_evals;
                }
                std::sort(all.begin(), all.end());
                attached = try_attach(all, false) || try_attach(all, true);
            }
            if (!attached)
                throw ConstructionError("unrepairable vertex " +
                                        std::to_string(p));
            ++repaired;

            // mark p's subtree reachable
            std::vector<uint32_t> stack{p};
            reach[p] = 1;
            while (!stack.empty()) {
                uint32_t u = stack.back();
                stack.pop_back();
                for (uint32_t v : graph.adjacency[u]) {
                    if (!reach[v]) {
                        reach[v] = 1;
                        stack.push_back(v);
                    }
                }
            }
        }
    }
    if (ndc) *ndc += dist_evals;
    return repaired;
}

std::pair<ProximityGraph, BuildReport> build_cng_on_base(
    const Dataset& data, const CngParams& params, const ProximityGraph& base,
    int threads) {
    const uint32_t n = data.size();
    params.validate(n);
    if (base.size() != n)
        throw UsageError("build_cng: base graph size mismatch");

    BuildReport report;
    const int nt = resolve_threads(threads);
    Pruner pruner(data, params);

    // Phase 1 (navigating node only; the base graph is given)
    auto t0 = Clock::now();
    SearchStats nav_stats;
    uint32_t s = select_navigating_node(base, data, params.L, params.seed,
                                        &nav_stats);
    report.navigating_node = s;
    report.phase_ndc[0] += nav_stats.ndc;
    report.phase_secs[0] = secs_since(t0);

    // Phase 2: candidate generation + pruning, parallel over points
    t0 = Clock::now();
    std::vector<std::vector<Candidate>> adj(n);
    uint64_t p2_ndc = 0, p2_calls = 0, p2_exhausted = 0;
#pragma omp parallel for schedule(dynamic, 16) num_threads(nt) \
    reduction(+ : p2_ndc, p2_calls, p2_exhausted)
    for (uint32_t p = 0; p < n; ++p) {
        SearchStats st;
        auto cands = generate_candidates(base, data, p, s, params.L,
                                         params.C, &st);
        p2_ndc += st.ndc;
        adj[p] = pruner.select(p, cands, p2_ndc, p2_calls, p2_exhausted);
    }
    report.phase_ndc[1] = p2_ndc;
    report.adaptive_prune_calls += p2_calls;
    report.alpha_exhausted_prunes += p2_exhausted;
    report.phase_secs[1] = secs_since(t0);

    // Phase 3: backward edges, then one lazy pruning pass per node
    t0 = Clock::now();
    std::vector<std::vector<Candidate>> incoming(n);
    for (uint32_t u = 0; u < n; ++u)
        for (const Candidate& c : adj[u]) incoming[c.id].push_back({u, c.dist});

    uint64_t p3_ndc = 0, p3_calls = 0, p3_exhausted = 0;
#pragma omp parallel for schedule(dynamic, 16) num_threads(nt) \
    reduction(+ : p3_ndc, p3_calls, p3_exhausted)
    for (uint32_t p = 0; p < n; ++p) {
        if (incoming[p].empty()) continue;
        std::vector<Candidate> merged = adj[p];
        merged.insert(merged.end(), incoming[p].begin(), incoming[p].end());
        std::sort(merged.begin(), merged.end());
        merged.erase(std::unique(merged.begin(), merged.end(),
                                 [](const Candidate& a, const Candidate& b) {
                                     return a.id == b.id;
                                 }),
                     merged.end());
        if (merged.size() > params.M) {
            adj[p] = pruner.select(p, merged, p3_ndc, p3_calls, p3_exhausted);
        } else {
            adj[p] = std::move(merged);
        }
    }
    report.phase_ndc[2] = p3_ndc;
    report.adaptive_prune_calls += p3_calls;
    report.phase3_prune_calls = p3_calls;
    report.alpha_exhausted_prunes += p3_exhausted;
    report.phase_secs[2] = secs_since(t0);

    // Phase 4: DFS connectivity repair (sequential; mutates shared state)
    t0 = Clock::now();
    ProximityGraph g;
    g.max_degree = params.M;
    g.entry_point = s;
    g.adjacency.resize(n);
    for (uint32_t p = 0; p < n; ++p) {
        g.adjacency[p].reserve(adj[p].size());
        for (const Candidate& c : adj[p]) g.adjacency[p].push_back(c.id);
    }
    uint64_t p4_ndc = 0;
    report.repaired_vertices = repair_connectivity(g, data, s, params.L,
                                                   &p4_ndc);
    report.phase_ndc[3] = p4_ndc;
    report.phase_secs[3] = secs_since(t0);

    return {std::move(g), report};
}

std::pair<ProximityGraph, BuildReport> build_cng(const Dataset& data,
                                                 const CngParams& params,
                                                 int threads) {
    params.validate(data.size());

    auto t0 = Clock::now();
    KnnBuildLog knn_log;
    ProximityGraph base = build_knn_graph(data, params.knn, threads, &knn_log);
    double base_secs = secs_since(t0);

    auto [g, report] = build_cng_on_base(data, params, base, threads);
    report.phase_secs[0] += base_secs;
    report.phase_ndc[0] += knn_log.ndc;
    return {std::move(g), report};
}

}  // namespace acng
