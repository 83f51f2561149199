#include "acng/knn_graph.hpp"

#include <omp.h>

#include <algorithm>
#include <random>

namespace acng {

void KnnParams::validate(uint32_t n) const {
    if (K < 1) throw UsageError("knn: K must be >= 1");
    if (K >= n) throw UsageError("knn: K must be < n");
    if (iters < 1) throw UsageError("knn: iters must be >= 1");
    if (sample_rate <= 0.0 || sample_rate > 1.0)
        throw UsageError("knn: sample_rate must be in (0, 1]");
}

namespace {

uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Per-(seed, round, vertex) stream so results do not depend on threads.
std::mt19937_64 stream_rng(uint64_t seed, uint64_t round, uint64_t v) {
    return std::mt19937_64(
        splitmix64(seed ^ splitmix64(round ^ splitmix64(v + 0x51ed2701))));
}

ProximityGraph exact_knn(const Dataset& data, const KnnParams& params,
                         int threads, KnnBuildLog* log) {
    const uint32_t n = data.size();
    ProximityGraph g;
    g.adjacency.assign(n, {});
    g.max_degree = params.K;

#pragma omp parallel num_threads(resolve_threads(threads))
    {
        std::vector<Candidate> all(n - 1);
#pragma omp for schedule(dynamic, 16)
        for (uint32_t p = 0; p < n; ++p) {
            size_t m = 0;
            for (uint32_t u = 0; u < n; ++u) {
                if (u == p) continue;
                all[m++] = {u, distance(data, p, u)};
            }
            std::nth_element(all.begin(), all.begin() + params.K - 1,
                             all.end());
            std::sort(all.begin(), all.begin() + params.K);
            auto& nb = g.adjacency[p];
            nb.resize(params.K);
            for (uint32_t i = 0; i < params.K; ++i) nb[i] = all[i].id;
        }
    }

    if (log) {
        log->used_exact = true;
        log->ndc += static_cast<uint64_t>(n) * (n - 1);
    }
    return g;
}

struct Pools {
    std::vector<std::vector<Candidate>> pool;  // sorted, exactly K entries

    bool contains(uint32_t v, uint32_t id) const {
        for (const auto& c : pool[v])
            if (c.id == id) return true;
        return false;
    }
};

}  // namespace

ProximityGraph build_knn_graph(const Dataset& data, const KnnParams& params,
                               int threads, KnnBuildLog* log) {
    const uint32_t n = data.size();
    params.validate(n);

    if (n <= params.exact_threshold) return exact_knn(data, params, threads, log);

    const uint32_t K = params.K;
    const int nt = resolve_threads(threads);
    Pools st;
    st.pool.resize(n);
    uint64_t total_ndc = 0;

    // random initialization
#pragma omp parallel for schedule(static) num_threads(nt) reduction(+ : total_ndc)
    for (uint32_t v = 0; v < n; ++v) {
        auto rng = stream_rng(params.seed, 0, v);
        std::vector<uint32_t> picked;
        picked.reserve(K);
        while (picked.size() < K) {
            uint32_t c = static_cast<uint32_t>(rng() % n);
            if (c == v) continue;
            bool dup = false;
            for (uint32_t x : picked)
                if (x == c) dup = true;
            if (!dup) picked.push_back(c);
        }
        auto& pool = st.pool[v];
        pool.reserve(K);
        for (uint32_t c : picked) {
            pool.push_back({c, distance(data, v, c)});
            ++total_ndc;
        }
        std::sort(pool.begin(), pool.end());
    }

    std::vector<std::vector<uint32_t>> joins(n);
    std::vector<std::vector<uint32_t>> reverse(n);

    for (uint32_t round = 1; round <= params.iters; ++round) {
        // snapshot join lists: sampled forward + sampled reverse neighbors
        for (auto& r : reverse) r.clear();
        for (uint32_t v = 0; v < n; ++v)
            for (const auto& c : st.pool[v]) reverse[c.id].push_back(v);

#pragma omp parallel for schedule(static) num_threads(nt)
        for (uint32_t v = 0; v < n; ++v) {
            auto rng = stream_rng(params.seed, round, v);
            auto& j = joins[v];
            j.clear();
            for (const auto& c : st.pool[v]) j.push_back(c.id);
            for (uint32_t r : reverse[v]) j.push_back(r);
            std::sort(j.begin(), j.end());
            j.erase(std::unique(j.begin(), j.end()), j.end());
            std::shuffle(j.begin(), j.end(), rng);
            size_t keep = static_cast<size_t>(
                std::max<double>(1.0, params.sample_rate * j.size()));
            if (j.size() > keep) j.resize(keep);
        }

        // gather pass: propose join-of-join vertices, keep the best K
        std::vector<std::vector<Candidate>> next(n);
        uint64_t round_ndc = 0;
        uint64_t changed = 0;
#pragma omp parallel for schedule(dynamic, 64) num_threads(nt) \
    reduction(+ : round_ndc, changed)
        for (uint32_t u = 0; u < n; ++u) {
            std::vector<uint32_t> props;
            for (uint32_t v : joins[u]) {
                props.push_back(v);
                for (uint32_t w : joins[v]) props.push_back(w);
            }
            std::sort(props.begin(), props.end());
            props.erase(std::unique(props.begin(), props.end()), props.end());

            std::vector<Candidate> merged = st.pool[u];
            for (uint32_t w : props) {
                if (w == u || st.contains(u, w)) continue;
                merged.push_back({w, distance(data, u, w)});
                ++round_ndc;
            }
            std::sort(merged.begin(), merged.end());
            merged.resize(K);
            for (const auto& c : merged)
                if (!st.contains(u, c.id)) ++changed;
            next[u] = std::move(merged);
        }
        st.pool.swap(next);
        total_ndc += round_ndc;

        if (log) {
            double s = 0.0;
            for (uint32_t v = 0; v < n; ++v) s += st.pool[v].back().dist;
            log->kth_distance_sum.push_back(s);
            log->changed_entries.push_back(changed);
        }
        if (changed < static_cast<uint64_t>(0.001 * n * K)) break;
    }

    ProximityGraph g;
    g.adjacency.resize(n);
    g.max_degree = K;
    for (uint32_t v = 0; v < n; ++v) {
        auto& nb = g.adjacency[v];
        nb.resize(K);
        for (uint32_t i = 0; i < K; ++i) nb[i] = st.pool[v][i].id;
    }
    if (log) log->ndc += total_ndc;
    return g;
}

}  // namespace acng
