#include "acng/eval.hpp"

#include <omp.h>

#include <algorithm>
#include <fstream>
#include <sstream>

namespace acng {

GroundTruth compute_ground_truth(const Dataset& data, const Dataset& queries,
                                 uint32_t k, Metric metric, int threads) {
    const uint32_t n = data.size();
    if (k < 1 || k > n)
        throw UsageError("ground truth: k must be in [1, n]");
    if (queries.dim() != data.dim())
        throw UsageError("ground truth: query dimension mismatch");

    GroundTruth gt(queries.size());
#pragma omp parallel num_threads(resolve_threads(threads))
    {
        std::vector<Candidate> all(n);
#pragma omp for schedule(dynamic, 4)
        for (uint32_t qi = 0; qi < queries.size(); ++qi) {
            auto q = queries.row(qi);
            for (uint32_t i = 0; i < n; ++i)
                all[i] = {i, distance(q, data.row(i), metric)};
            std::nth_element(all.begin(), all.begin() + k - 1, all.end());
            std::sort(all.begin(), all.begin() + k);
            gt[qi].resize(k);
            for (uint32_t i = 0; i < k; ++i) gt[qi][i] = all[i].id;
        }
    }
    return gt;
}

void save_ground_truth(const GroundTruth& gt, const std::string& path) {
    std::vector<std::vector<int32_t>> rows(gt.size());
    for (size_t i = 0; i < gt.size(); ++i)
        rows[i].assign(gt[i].begin(), gt[i].end());
    save_ivecs(rows, path);
}

GroundTruth load_ground_truth(const std::string& path) {
    auto rows = load_ivecs(path);
    GroundTruth gt(rows.size());
    for (size_t i = 0; i < rows.size(); ++i) {
        gt[i].reserve(rows[i].size());
        for (int32_t v : rows[i]) {
            if (v < 0) throw DataError(path + ": negative id in ground truth");
            gt[i].push_back(static_cast<uint32_t>(v));
        }
    }
    return gt;
}

double recall_at_k(std::span<const uint32_t> result,
                   std::span<const uint32_t> truth) {
    if (truth.empty()) throw UsageError("recall_at_k: empty truth");
    std::vector<uint32_t> t(truth.begin(), truth.end());
    std::sort(t.begin(), t.end());
    size_t hit = 0;
    for (uint32_t id : result)
        if (std::binary_search(t.begin(), t.end(), id)) ++hit;
    return static_cast<double>(hit) / static_cast<double>(truth.size());
}

std::vector<EvalRecord> sweep(const ProximityGraph& graph,
                              const Dataset& data, const Dataset& queries,
                              const GroundTruth& truth, uint32_t k,
                              std::span<const uint32_t> L_list,
                              int threads) {
    if (truth.size() != queries.size())
        throw UsageError("sweep: ground truth / query count mismatch");
    for (uint32_t L : L_list)
        if (L < k) throw UsageError("sweep: every L must be >= k");

    const uint32_t nq = queries.size();
    std::vector<EvalRecord> records;
    records.reserve(L_list.size());

    std::vector<double> recall(nq), ndc(nq), hops(nq);
    for (uint32_t L : L_list) {
#pragma omp parallel for schedule(dynamic, 1) num_threads(resolve_threads(threads))
        for (uint32_t qi = 0; qi < nq; ++qi) {
            SearchStats st;
            SearchParams sp{L, k, {}};
            auto res = beam_search(graph, data, queries.row(qi), sp, &st);
            std::vector<uint32_t> ids(res.size());
            for (size_t i = 0; i < res.size(); ++i) ids[i] = res[i].id;
            recall[qi] = recall_at_k(ids, truth[qi]);
            ndc[qi] = static_cast<double>(st.ndc);
            hops[qi] = static_cast<double>(st.hops);
        }
        EvalRecord rec;
        rec.L = L;
        for (uint32_t qi = 0; qi < nq; ++qi) {  // serial sum: reproducible
            rec.recall_at_k += recall[qi];
            rec.mean_ndc += ndc[qi];
            rec.mean_hops += hops[qi];
        }
        rec.recall_at_k /= nq;
        rec.mean_ndc /= nq;
        rec.mean_hops /= nq;
        records.push_back(rec);
    }

    std::sort(records.begin(), records.end(),
              [](const EvalRecord& a, const EvalRecord& b) { return a.L < b.L; });
    return records;
}

std::string to_csv(std::span<const EvalRecord> records) {
    std::ostringstream out;
    out << "L,recall_at_k,mean_ndc,mean_hops\n";
    out.precision(17);
    for (const auto& r : records)
        out << r.L << ',' << r.recall_at_k << ',' << r.mean_ndc << ','
            << r.mean_hops << '\n';
    return out.str();
}

void save_csv(std::span<const EvalRecord> records, const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw DataError("cannot write " + path);
    out << to_csv(records);
}

namespace {

// Smallest-L operating point meeting the recall target.
TuneResult::Row evaluate_tau(double tau, const ProximityGraph& g,
                             const Dataset& data, const Dataset& queries,
                             const GroundTruth& gt, const TuneOptions& opts,
                             bool refined) {
    auto records = sweep(g, data, queries, gt, opts.k, opts.L_grid,
                         opts.threads);
    TuneResult::Row row{tau, false, 0.0, 0.0, refined};
    for (const auto& r : records) {
        row.recall = std::max(row.recall, r.recall_at_k);
        if (!row.reached && r.recall_at_k >= opts.target_recall) {
            row.reached = true;
            row.ndc = r.mean_ndc;
        }
    }
    return row;
}

// true when `b` strictly improves on `a`
bool improves(const TuneResult::Row& b, const TuneResult::Row& a) {
    if (b.reached != a.reached) return b.reached;
    if (b.reached) return b.ndc < a.ndc;
    return b.recall > a.recall;
}

}  // namespace

TuneResult tune_tau(const Dataset& data, const Dataset& queries_dev,
                    const BuildFn& build_fn, const TuneOptions& opts) {
    if (queries_dev.size() == 0)
        throw UsageError("tune_tau: empty dev query set");
    GroundTruth gt = compute_ground_truth(data, queries_dev, opts.k, {},
                                          opts.threads);

    TuneResult result;
    auto try_tau = [&](double tau, bool refined) {
        ProximityGraph g = build_fn(tau);
        result.rows.push_back(
            evaluate_tau(tau, g, data, queries_dev, gt, opts, refined));
        return result.rows.back();
    };

    // tau = 0 first, so an all-tie grid settles on the simplest choice
    TuneResult::Row best = try_tau(0.0, false);
    for (double tau : opts.coarse) {
        auto row = try_tau(tau, false);
        if (improves(row, best)) best = row;
    }

    // refine inside the winner's decade: 3 evenly spaced points spanning
    // [w/2, 5w], the midpoints toward the adjacent coarse candidates
    if (best.tau > 0.0) {
        double lo = best.tau / 2.0, hi = best.tau * 5.0;
        for (double tau : {lo, (lo + hi) / 2.0, hi}) {
            auto row = try_tau(tau, true);
            if (improves(row, best)) best = row;
        }
    }

    result.tau = best.tau;
    result.target_reached = best.reached;
    return result;
}

}  // namespace acng
