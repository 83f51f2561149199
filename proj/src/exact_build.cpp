#include "acng/exact_build.hpp"

#include <omp.h>

#include <algorithm>
#include <limits>

namespace acng {

uint32_t medoid(const Dataset& data) {
    std::vector<float> c = data.centroid();
    uint32_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (uint32_t i = 0; i < data.size(); ++i) {
        double d = l2_distance(std::span<const float>(c), data.row(i));
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

ProximityGraph build_exact(const Dataset& data, const ExactBuildParams& params,
                           int threads) {
    const uint32_t n = data.size();
    if (n < 2) throw UsageError("build_exact requires n >= 2");
    if (n > params.max_n)
        throw UsageError("build_exact: n = " + std::to_string(n) +
                         " exceeds the quadratic-build cap max_n = " +
                         std::to_string(params.max_n));

    ProximityGraph g;
    g.adjacency.resize(n);

#pragma omp parallel num_threads(resolve_threads(threads))
    {
        std::vector<Candidate> cands(n - 1);
#pragma omp for schedule(dynamic, 8)
        for (uint32_t p = 0; p < n; ++p) {
            size_t m = 0;
            for (uint32_t u = 0; u < n; ++u) {
                if (u == p) continue;
                cands[m++] = {u, distance(data, p, u)};
            }
            auto shortcut = prune_candidates(data, p, cands, params.rule);
            auto& nb = g.adjacency[p];
            nb.resize(shortcut.size());
            for (size_t i = 0; i < shortcut.size(); ++i)
                nb[i] = shortcut[i].id;
        }
    }

    g.max_degree = g.observed_max_degree();
    g.entry_point = medoid(data);
    return g;
}

namespace {

constexpr double kLemmaTol = 1e-6;  // relative; the lemmas are exact in reals

}  // namespace

std::vector<Violation> verify_alpha_reducible(const ProximityGraph& graph,
                                              const Dataset& data,
                                              const Dataset& queries,
                                              double tau, double alpha,
                                              int threads) {
    const uint32_t n = data.size();
    const uint32_t nq = queries.size();
    if (graph.size() != n)
        throw UsageError("verify_alpha_reducible: graph/data size mismatch");
    if (queries.dim() != data.dim())
        throw UsageError("verify_alpha_reducible: query dimension mismatch");

    std::vector<Violation> violations;
    uint32_t bad_query = nq;  // first query violating the tau hypothesis
    double bad_dist = 0.0;

#pragma omp parallel num_threads(resolve_threads(threads))
    {
        std::vector<double> qd(n);
        std::vector<Violation> local;
        uint32_t bq = nq;
        double bd = 0.0;
#pragma omp for schedule(dynamic, 1)
        for (uint32_t qi = 0; qi < nq; ++qi) {
            auto q = queries.row(qi);
            uint32_t vstar = 0;
            double dstar = std::numeric_limits<double>::infinity();
            for (uint32_t i = 0; i < n; ++i) {
                qd[i] = l2_distance(q, data.row(i));
                if (qd[i] < dstar) {
                    dstar = qd[i];
                    vstar = i;
                }
            }
            if (dstar > tau) {
                if (qi < bq) {
                    bq = qi;
                    bd = dstar;
                }
                continue;
            }
            for (uint32_t p = 0; p < n; ++p) {
                if (p == vstar) continue;
                double bound = qd[p] / alpha + kLemmaTol * qd[p];
                bool ok = false;
                for (uint32_t nb : graph.neighbors(p)) {
                    // A direct shortcut to the exact NN satisfies the
                    // lemma's conclusion for routing even when the
                    // alpha-factor bound cannot hold (near-ties).
                    if (nb == vstar || qd[nb] <= bound) {
                        ok = true;
                        break;
                    }
                }
                if (!ok)
                    local.push_back({qi, p,
                                     "no out-neighbor of " + std::to_string(p) +
                                         " reduces the distance by 1/alpha"});
            }
        }
#pragma omp critical
        {
            violations.insert(violations.end(), local.begin(), local.end());
            if (bq < bad_query) {
                bad_query = bq;
                bad_dist = bd;
            }
        }
    }

    if (bad_query < nq)
        throw UsageError("verify_alpha_reducible: query " +
                         std::to_string(bad_query) + " has NN distance " +
                         std::to_string(bad_dist) + " > tau = " +
                         std::to_string(tau) + "; lemma hypothesis fails");

    std::sort(violations.begin(), violations.end(),
              [](const Violation& a, const Violation& b) {
                  return std::tie(a.query, a.vertex) <
                         std::tie(b.query, b.vertex);
              });
    return violations;
}

std::vector<Violation> verify_shortcut_reachable(const ProximityGraph& graph,
                                                 const Dataset& data,
                                                 double alpha, int threads) {
    const uint32_t n = data.size();
    if (graph.size() != n)
        throw UsageError("verify_shortcut_reachable: graph/data size mismatch");

    std::vector<Violation> violations;

#pragma omp parallel num_threads(resolve_threads(threads))
    {
        std::vector<double> pd(n);
        std::vector<uint8_t> is_neighbor(n, 0);
        std::vector<Violation> local;
#pragma omp for schedule(dynamic, 4)
        for (uint32_t p = 0; p < n; ++p) {
            for (uint32_t z = 0; z < n; ++z) pd[z] = distance(data, p, z);
            for (uint32_t nb : graph.neighbors(p)) is_neighbor[nb] = 1;
            for (uint32_t z = 0; z < n; ++z) {
                if (z == p || is_neighbor[z]) continue;
                double bound = pd[z] / alpha + kLemmaTol * pd[z];
                bool ok = false;
                for (uint32_t nb : graph.neighbors(p)) {
                    if (distance(data, nb, z) <= bound) {
                        ok = true;
                        break;
                    }
                }
                if (!ok)
                    local.push_back({p, z, "non-edge with no 1/alpha shortcut"});
            }
            for (uint32_t nb : graph.neighbors(p)) is_neighbor[nb] = 0;
        }
#pragma omp critical
        violations.insert(violations.end(), local.begin(), local.end());
    }

    std::sort(violations.begin(), violations.end(),
              [](const Violation& a, const Violation& b) {
                  return std::tie(a.query, a.vertex) <
                         std::tie(b.query, b.vertex);
              });
    return violations;
}

}  // namespace acng
