// Compares the OpenMP kernels against the serial reference implementations
// on synthetic data. Not a ctest target; run manually:
//   ./bench/bench_kernels [n] [dim] [threads]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <vector>

#include "acng/dataset.hpp"
#include "acng/exact_build.hpp"
#include "acng/knn_graph.hpp"
#include "ref.hpp"

using Clock = std::chrono::steady_clock;

namespace {

double secs(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

acng::Dataset make_data(uint32_t n, uint32_t dim) {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<float> u(0.0f, 1.0f);
    std::vector<float> v(static_cast<size_t>(n) * dim);
    for (auto& x : v) x = u(rng);
    return acng::Dataset(dim, std::move(v));
}

}  // namespace

int main(int argc, char** argv) {
    uint32_t n = argc > 1 ? std::atoi(argv[1]) : 2000;
    uint32_t dim = argc > 2 ? std::atoi(argv[2]) : 32;
    int threads = argc > 3 ? std::atoi(argv[3]) : 0;

    auto data = make_data(n, dim);
    std::printf("n=%u dim=%u threads=%d\n", n, dim,
                acng::resolve_threads(threads));
    std::printf("%-28s %10s %10s %8s\n", "kernel", "serial[s]", "openmp[s]",
                "speedup");

    {
        auto t0 = Clock::now();
        auto want = ref::stats(data);
        double ts = secs(t0);
        t0 = Clock::now();
        auto got = acng::compute_stats(data, {}, threads);
        double tp = secs(t0);
        bool ok = std::abs(got.diameter - want.diameter) < 1e-9;
        std::printf("%-28s %10.3f %10.3f %7.2fx%s\n", "pairwise stats", ts,
                    tp, ts / tp, ok ? "" : "  MISMATCH");
    }
    {
        uint32_t K = 16;
        auto t0 = Clock::now();
        auto want = ref::knn_rows(data, K);
        double ts = secs(t0);
        acng::KnnParams p;
        p.K = K;
        p.exact_threshold = n;  // exact path on both sides
        t0 = Clock::now();
        auto got = acng::build_knn_graph(data, p, threads);
        double tp = secs(t0);
        bool ok = got.adjacency == want;
        std::printf("%-28s %10.3f %10.3f %7.2fx%s\n", "exact knn (K=16)", ts,
                    tp, ts / tp, ok ? "" : "  MISMATCH");
    }
    {
        double alpha = 1.2, tau = 0.01;
        auto t0 = Clock::now();
        std::vector<std::vector<uint32_t>> want(n);
        for (uint32_t p = 0; p < n; ++p) {
            std::vector<std::pair<uint32_t, double>> cands;
            cands.reserve(n - 1);
            for (uint32_t u = 0; u < n; ++u)
                if (u != p) cands.push_back({u, ref::l2(data, p, u)});
            want[p] = ref::shortcut_set(data, cands, ref::Rule::ShiftedScaled,
                                        alpha, tau);
        }
        double ts = secs(t0);
        t0 = Clock::now();
        auto got = acng::build_exact(
            data, {acng::PruneRule::shifted_scaled(alpha, tau)}, threads);
        double tp = secs(t0);
        bool ok = got.adjacency == want;
        std::printf("%-28s %10.3f %10.3f %7.2fx%s\n", "exact alpha-CG build",
                    ts, tp, ts / tp, ok ? "" : "  MISMATCH");
    }
    return 0;
}
