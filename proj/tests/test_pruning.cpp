#include <algorithm>
#include <cmath>
#include <random>

#include "acng/pruning.hpp"
#include "doctest.h"
#include "ref.hpp"
#include "test_util.hpp"

using namespace acng;

namespace {

// Random candidate set drawn from a shared pool dataset.
std::vector<Candidate> random_cands(const Dataset& pool, uint32_t p,
                                    size_t count, std::mt19937_64& rng) {
    std::vector<uint32_t> ids;
    for (uint32_t u = 0; u < pool.size(); ++u)
        if (u != p) ids.push_back(u);
    std::shuffle(ids.begin(), ids.end(), rng);
    ids.resize(std::min(count, ids.size()));
    return testutil::id_candidates(pool, p, ids);
}

PairDistanceFn dist_fn(const Dataset& d) {
    return [&d](uint32_t a, uint32_t b) { return distance(d, a, b); };
}

}  // namespace

TEST_CASE("prunes: direct substitutions") {
    // 1.5 > 2 * 0.5 + 3 * 0.1
    CHECK(prunes(PruneRule::shifted_scaled(2.0, 0.1), 1.5, 0.5));
    CHECK_FALSE(prunes(PruneRule::shifted_scaled(2.0, 0.1), 1.2, 0.5));

    // boundary is strict for every rule
    CHECK_FALSE(prunes(PruneRule::triangle(), 1.0, 1.0));
    CHECK_FALSE(prunes(PruneRule::scaled(1.0), 1.0, 1.0));
    CHECK_FALSE(prunes(PruneRule::shifted(0.0), 1.0, 1.0));
    CHECK_FALSE(prunes(PruneRule::shifted_scaled(1.0, 0.0), 1.0, 1.0));

    // shifted rule radius is d_pu - 3*tau
    CHECK(prunes(PruneRule::shifted(0.1), 1.0, 0.6));
    CHECK_FALSE(prunes(PruneRule::shifted(0.2), 1.0, 0.6));
}

TEST_CASE("prunes: ShiftedScaled with tau=0 reduces to Scaled") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.0, 10.0);
    for (int t = 0; t < 10000; ++t) {
        double alpha = 0.5 + u(rng) / 5.0, d_pu = u(rng), d_uv = u(rng);
        CHECK(prunes(PruneRule::shifted_scaled(alpha, 0.0), d_pu, d_uv) ==
              prunes(PruneRule::scaled(alpha), d_pu, d_uv));
    }
}

TEST_CASE("prune_candidates: trivial inputs") {
    auto data = testutil::random_dataset(10, 4, 5);
    auto rule = PruneRule::shifted_scaled(1.2, 0.0);
    CHECK(prune_candidates(data, 0, {}, rule).empty());

    auto single = testutil::id_candidates(data, 0, {3});
    auto s = prune_candidates(data, 0, single, rule);
    REQUIRE(s.size() == 1);
    CHECK(s[0].id == 3);
}

TEST_CASE("prune_candidates: 1-D worked example") {
    // p = 0, candidates at 1, 1.5, 10: 1.5 is pruned by 1, 10 survives
    Dataset data(1, {0.0f, 1.0f, 1.5f, 10.0f});
    auto cands = testutil::id_candidates(data, 0, {1, 2, 3});
    auto s = prune_candidates(data, 0, cands,
                              PruneRule::shifted_scaled(2.0, 0.1));
    CHECK(testutil::ids_of(s) == std::vector<uint32_t>{1, 3});
}

TEST_CASE("prune_candidates matches the independent scan oracle") {
    auto pool = testutil::random_dataset(400, 8, 31);
    std::mt19937_64 rng(77);
    for (int t = 0; t < 50; ++t) {
        uint32_t p = rng() % pool.size();
        auto cands = random_cands(pool, p, 1 + rng() % 300, rng);
        for (auto rule :
             {PruneRule::shifted_scaled(1.2, 0.05), PruneRule::triangle(),
              PruneRule::scaled(1.3), PruneRule::shifted(0.02)}) {
            std::vector<std::pair<uint32_t, double>> rc;
            for (const auto& c : cands) rc.push_back({c.id, c.dist});
            ref::Rule rr = rule.kind == PruneRule::Kind::ShiftedScaled
                               ? ref::Rule::ShiftedScaled
                           : rule.kind == PruneRule::Kind::Triangle
                               ? ref::Rule::Triangle
                           : rule.kind == PruneRule::Kind::Scaled
                               ? ref::Rule::Scaled
                               : ref::Rule::Shifted;
            auto want = ref::shortcut_set(pool, rc, rr, rule.alpha, rule.tau);
            auto got = prune_candidates(pool, p, cands, rule);
            CHECK(testutil::ids_of(got) == want);

            // repeated runs are identical
            CHECK(prune_candidates(pool, p, cands, rule) == got);
        }
    }
}

TEST_CASE("shortcut set mutual exclusion: no survivor prunes another") {
    auto pool = testutil::random_dataset(300, 8, 41);
    std::mt19937_64 rng(13);
    auto rule = PruneRule::shifted_scaled(1.1, 0.02);
    for (int t = 0; t < 25; ++t) {
        uint32_t p = rng() % pool.size();
        auto cands = random_cands(pool, p, 200, rng);
        auto s = prune_candidates(pool, p, cands, rule);
        for (size_t i = 0; i < s.size(); ++i)
            for (size_t j = i + 1; j < s.size(); ++j)
                CHECK_FALSE(prunes(rule, s[j].dist,
                                   distance(pool, s[i].id, s[j].id)));
    }
}

TEST_CASE("|S(alpha)| is non-decreasing in alpha at fixed tau") {
    auto pool = testutil::random_dataset(300, 8, 51);
    std::mt19937_64 rng(19);
    for (int t = 0; t < 10; ++t) {
        uint32_t p = rng() % pool.size();
        auto cands = random_cands(pool, p, 250, rng);
        size_t prev = 0;
        for (double alpha = 0.8; alpha <= 2.0; alpha += 0.1) {
            auto s = prune_candidates(pool, p, cands,
                                      PruneRule::shifted_scaled(alpha, 0.05));
            CHECK(s.size() >= prev);
            prev = s.size();
        }
    }
}

TEST_CASE("cap truncates the scan to a prefix") {
    auto pool = testutil::random_dataset(300, 8, 61);
    std::mt19937_64 rng(23);
    uint32_t p = 7;
    auto cands = random_cands(pool, p, 250, rng);
    auto rule = PruneRule::shifted_scaled(1.5, 0.1);
    auto full = prune_candidates(pool, p, cands, rule);
    for (uint32_t cap : {1u, 5u, 20u}) {
        auto capped = prune_candidates(pool, p, cands, rule, cap);
        size_t want = std::min<size_t>(cap, full.size());
        REQUIRE(capped.size() == want);
        for (size_t i = 0; i < want; ++i) CHECK(capped[i] == full[i]);
    }
}

TEST_CASE("cached_prunes: memoization and direct evaluation") {
    PruneCache cache;
    int evals = 0;
    auto d_uv = [&evals] {
        ++evals;
        return 1.0;
    };
    // tau=0, d_pu=2, d_uv=1: alpha_bar = 2
    CHECK(cached_prunes(cache, 5, 9, 2.0, d_uv, 0.0, 1.9));
    CHECK_FALSE(cached_prunes(cache, 5, 9, 2.0, d_uv, 0.0, 2.1));
    CHECK(evals == 1);  // second call is a pure comparison
    CHECK(cache.pair_evals() == 1);
}

TEST_CASE("cached_prunes agrees with the rule form away from the boundary") {
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> u(0.01, 5.0);
    for (int t = 0; t < 20000; ++t) {
        double d_pu = u(rng), d_uv = u(rng), tau = u(rng) / 10.0,
               alpha = 0.5 + u(rng) / 4.0;
        PruneCache cache;
        bool via_cache = cached_prunes(
            cache, 0, 1, d_pu, [&] { return d_uv; }, tau, alpha);
        double alpha_bar = (d_pu - tau) / (d_uv + tau);
        if (std::abs(alpha_bar - alpha) < 1e-6) continue;  // boundary band
        CHECK(via_cache ==
              prunes(PruneRule::shifted_scaled(alpha, tau), d_pu, d_uv));
    }
}

TEST_CASE("adaptive_prune: small candidate sets run the schedule out") {
    auto pool = testutil::random_dataset(50, 4, 71);
    AdaptiveSchedule sched{0.9, 1.6, 0.05, 10};  // floor(M/2) = 5
    auto cands = testutil::id_candidates(pool, 0, {1, 2, 3});
    PruneCounters pc;
    auto out = adaptive_prune(pool, 0, cands, sched, 0.0, &pc);
    CHECK(out.size() <= 3);
    CHECK(pc.rounds == 15);  // 0.9, 0.95, ..., 1.6
    CHECK(pc.alpha_exhausted);
}

TEST_CASE("adaptive_prune: one round when alpha0 already fills M/2") {
    // two far-apart points never prune each other at alpha0
    Dataset data(2, {0.0f, 0.0f, 10.0f, 0.0f, 0.0f, 10.0f});
    AdaptiveSchedule sched{0.9, 1.6, 0.05, 4};  // floor(M/2) = 2
    auto cands = testutil::id_candidates(data, 0, {1, 2});
    PruneCounters pc;
    auto out = adaptive_prune(data, 0, cands, sched, 0.0, &pc);
    CHECK(out.size() == 2);
    CHECK(pc.rounds == 1);
    CHECK_FALSE(pc.alpha_exhausted);
}

TEST_CASE("adaptive_prune: cache and naive recomputation agree exactly") {
    auto pool = testutil::random_dataset(500, 8, 81);
    std::mt19937_64 rng(37);
    AdaptiveSchedule sched{0.9, 1.6, 0.05, 16};
    for (int t = 0; t < 200; ++t) {
        uint32_t p = rng() % pool.size();
        auto cands = random_cands(pool, p, 2 + rng() % 200, rng);
        double tau = (t % 3) * 0.05;
        PruneCounters cached_pc, naive_pc;
        auto with_cache = adaptive_prune(cands, sched, tau, dist_fn(pool),
                                         true, &cached_pc);
        auto without = adaptive_prune(cands, sched, tau, dist_fn(pool),
                                      false, &naive_pc);
        CHECK(with_cache == without);
        CHECK(cached_pc.pair_distance_evals <= naive_pc.pair_distance_evals);
        if (cached_pc.rounds >= 2)
            CHECK(cached_pc.pair_distance_evals <
                  naive_pc.pair_distance_evals);
    }
}

TEST_CASE("adaptive_prune returns at most M, the closest members") {
    auto pool = testutil::random_dataset(300, 6, 91);
    std::mt19937_64 rng(43);
    AdaptiveSchedule sched{0.9, 1.6, 0.05, 8};
    for (int t = 0; t < 30; ++t) {
        uint32_t p = rng() % pool.size();
        auto cands = random_cands(pool, p, 150, rng);
        auto out = adaptive_prune(pool, p, cands, sched, 0.01);
        CHECK(out.size() <= 8);
        CHECK(std::is_sorted(out.begin(), out.end()));
    }
}

TEST_CASE("figure-3 geometry: the two farthest shortcut edges are dropped") {
    // g plus six spread-out candidates; at alpha0 all six survive, so the
    // adaptive pass stops immediately and M=4 keeps only a, b, c, d.
    const uint32_t dim = 6;
    std::vector<float> rows{
        0.0f, 0.0f, 0.0f, 0.0f,    0.0f,    0.0f,  // g (id 0)
        1.3f, 0.0f, 0.0f, 0.0f,    0.0f,    0.0f,  // a
        0.0f, 1.35f, 0.0f, 0.0f,   0.0f,    0.0f,  // b
        0.0f, 0.0f, 1.4f, 0.0f,    0.0f,    0.0f,  // c
        0.0f, 0.0f, 0.0f, 1.71198f, 0.5562f, 0.0f, // d
        0.0f, 0.0f, 0.0f, 0.0f,    2.0f,    0.0f,  // e
        0.0f, 0.0f, 0.0f, 0.0f,    0.0f,    2.05f, // f
    };
    Dataset data(dim, std::move(rows));
    auto cands = testutil::id_candidates(data, 0, {1, 2, 3, 4, 5, 6});
    AdaptiveSchedule sched{0.9, 1.6, 0.05, 4};
    PruneCounters pc;
    auto out = adaptive_prune(data, 0, cands, sched, 0.0, &pc);
    CHECK(pc.rounds == 1);
    CHECK(testutil::ids_of(out) == std::vector<uint32_t>{1, 2, 3, 4});
}

TEST_CASE("prune_candidates: ShiftedScaled(alpha, 0) equals Scaled(alpha)") {
    auto pool = testutil::random_dataset(400, 8, 101);
    std::mt19937_64 rng(47);
    for (int t = 0; t < 60; ++t) {
        uint32_t p = rng() % pool.size();
        auto cands = random_cands(pool, p, 1 + rng() % 350, rng);
        for (double alpha : {1.0, 1.2, 2.0}) {
            auto a = prune_candidates(pool, p, cands,
                                      PruneRule::shifted_scaled(alpha, 0.0));
            auto b =
                prune_candidates(pool, p, cands, PruneRule::scaled(alpha));
            CHECK(a == b);
        }
    }
}
