// Command-line surface for the alpha-convergent graph toolkit:
//   build   fvecs -> ACNG graph file (+ JSON build report)
//   gt      exact ground truth -> ivecs
//   search  L-sweep over a graph -> CSV (L,recall_at_k,mean_ndc,mean_hops)
//   stats   dataset diameter / min distance / aspect ratio as JSON
//   verify  structural lemma checks on exact graphs
//
// Exit codes: 0 success, 1 usage error, 2 data format error,
// 3 verification failure.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "acng/construction.hpp"
#include "acng/dataset.hpp"
#include "acng/eval.hpp"
#include "acng/exact_build.hpp"
#include "acng/graph.hpp"
#include "acng/knn_graph.hpp"
#include "acng/pruning.hpp"
#include "acng/search.hpp"

namespace {

struct BuildArgs {
    std::string data_path, out_path, report_path;
    uint32_t K = 200, M = 70, L = 60, C = 500;
    double tau = 0.0;
    double alpha0 = 0.9, alpha_max = 1.6, d_alpha = 0.05;
    double alpha = 1.2;  // rule parameter for --rule / --exact builds
    double fixed_alpha = 0.0;
    std::string rule;
    bool exact = false;
    uint32_t max_n = 20000;
    uint64_t seed = 0;
    int threads = 0;
};

acng::PruneRule make_rule(const std::string& name, double alpha, double tau) {
    if (name == "alpha") return acng::PruneRule::shifted_scaled(alpha, tau);
    if (name == "triangle") return acng::PruneRule::triangle();
    if (name == "scaled") return acng::PruneRule::scaled(alpha);
    if (name == "shifted") return acng::PruneRule::shifted(tau);
    throw acng::UsageError("unknown rule '" + name +
                           "' (expected alpha|triangle|scaled|shifted)");
}

int cmd_build(const BuildArgs& a) {
    acng::Dataset data = acng::load_fvecs(a.data_path);

    if (a.exact) {
        acng::ExactBuildParams params;
        params.rule = make_rule(a.rule.empty() ? "alpha" : a.rule, a.alpha,
                                a.tau);
        params.max_n = a.max_n;
        acng::ProximityGraph g = acng::build_exact(data, params, a.threads);
        acng::save_graph(g, a.out_path);
        std::cout << "exact graph: n=" << g.size()
                  << " max_degree=" << g.observed_max_degree()
                  << " entry=" << g.entry_point << "\n";
        return 0;
    }

    acng::CngParams params;
    params.knn.K = a.K;
    params.knn.seed = a.seed;
    params.M = a.M;
    params.L = a.L;
    params.C = a.C;
    params.sched = {a.alpha0, a.alpha_max, a.d_alpha, a.M};
    params.tau = a.tau;
    params.seed = a.seed;
    if (a.fixed_alpha > 0.0) params.fixed_alpha = a.fixed_alpha;
    if (!a.rule.empty() && a.rule != "alpha")
        params.rule_override = make_rule(a.rule, a.alpha, a.tau);

    auto [g, report] = acng::build_cng(data, params, a.threads);
    acng::save_graph(g, a.out_path);

    std::string report_path =
        a.report_path.empty() ? a.out_path + ".report.json" : a.report_path;
    std::ofstream rep(report_path, std::ios::trunc);
    rep << report.to_json() << "\n";
    std::cout << report.to_json() << "\n";
    return 0;
}

std::vector<uint32_t> parse_u32_list(const std::string& csv) {
    std::vector<uint32_t> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(static_cast<uint32_t>(std::stoul(item)));
    if (out.empty()) throw acng::UsageError("empty L list");
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"alpha-convergent proximity graphs: build, search, verify"};
    app.require_subcommand(1);

    BuildArgs b;
    auto* build = app.add_subcommand("build", "construct a graph from fvecs");
    build->add_option("--data", b.data_path, "input fvecs")->required();
    build->add_option("--out", b.out_path, "output graph file")->required();
    build->add_option("--report", b.report_path, "build report JSON path");
    build->add_option("--K", b.K, "base K-NN graph degree");
    build->add_option("--M", b.M, "max out-degree");
    build->add_option("--L", b.L, "construction queue size");
    build->add_option("--C", b.C, "candidate set size");
    build->add_option("--tau", b.tau, "pruning shift parameter");
    build->add_option("--alpha0", b.alpha0, "adaptive schedule start");
    build->add_option("--alpha-max", b.alpha_max, "adaptive schedule ceiling");
    build->add_option("--dalpha", b.d_alpha, "adaptive schedule step");
    build->add_option("--alpha", b.alpha, "alpha for --rule / --exact builds");
    build->add_option("--fixed-alpha", b.fixed_alpha,
                      "single-alpha variant (skips the adaptive schedule)");
    build->add_option("--rule", b.rule,
                      "pruning rule: alpha|triangle|scaled|shifted");
    build->add_flag("--exact", b.exact, "quadratic reference construction");
    build->add_option("--max-n", b.max_n, "size cap for --exact");
    build->add_option("--seed", b.seed, "RNG seed");
    build->add_option("--threads", b.threads, "worker threads (0 = all)");

    std::string gt_data, gt_queries, gt_out;
    uint32_t gt_k = 100;
    int gt_threads = 0;
    auto* gt = app.add_subcommand("gt", "exact ground truth to ivecs");
    gt->add_option("--data", gt_data)->required();
    gt->add_option("--queries", gt_queries)->required();
    gt->add_option("--k", gt_k);
    gt->add_option("--out", gt_out)->required();
    gt->add_option("--threads", gt_threads);

    std::string se_graph, se_data, se_queries, se_gt, se_out, se_list = "100";
    uint32_t se_k = 100;
    int se_threads = 0;
    auto* se = app.add_subcommand("search", "L-sweep, writes the eval CSV");
    se->add_option("--graph", se_graph)->required();
    se->add_option("--data", se_data)->required();
    se->add_option("--queries", se_queries)->required();
    se->add_option("--gt", se_gt)->required();
    se->add_option("--k", se_k);
    se->add_option("--L-list", se_list, "comma-separated queue sizes");
    se->add_option("--out", se_out)->required();
    se->add_option("--threads", se_threads);

    std::string st_data;
    int st_threads = 0;
    auto* st = app.add_subcommand("stats", "dataset stats as JSON");
    st->add_option("--data", st_data)->required();
    st->add_option("--threads", st_threads);

    std::string ve_graph, ve_data, ve_queries, ve_check = "reducible";
    double ve_alpha = 1.1, ve_tau = 0.0;
    int ve_threads = 0;
    auto* ve = app.add_subcommand("verify", "lemma checks on exact graphs");
    ve->add_option("--graph", ve_graph)->required();
    ve->add_option("--data", ve_data)->required();
    ve->add_option("--queries", ve_queries,
                   "required for --check reducible");
    ve->add_option("--check", ve_check, "reducible|shortcut");
    ve->add_option("--alpha", ve_alpha)->required();
    ve->add_option("--tau", ve_tau);
    ve->add_option("--threads", ve_threads);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (build->parsed()) return cmd_build(b);

        if (gt->parsed()) {
            auto data = acng::load_fvecs(gt_data);
            auto queries =
                acng::load_fvecs(gt_queries, acng::DuplicatePolicy::Allow);
            auto truth =
                acng::compute_ground_truth(data, queries, gt_k, {}, gt_threads);
            acng::save_ground_truth(truth, gt_out);
            return 0;
        }

        if (se->parsed()) {
            auto graph = acng::load_graph(se_graph);
            auto data = acng::load_fvecs(se_data);
            auto queries =
                acng::load_fvecs(se_queries, acng::DuplicatePolicy::Allow);
            auto truth = acng::load_ground_truth(se_gt);
            auto records = acng::sweep(graph, data, queries, truth, se_k,
                                       parse_u32_list(se_list), se_threads);
            acng::save_csv(records, se_out);
            return 0;
        }

        if (st->parsed()) {
            auto data = acng::load_fvecs(st_data);
            auto stats = acng::compute_stats(data, {}, st_threads);
            nlohmann::ordered_json j;
            j["n"] = data.size();
            j["dim"] = data.dim();
            j["diameter"] = stats.diameter;
            j["min_dist"] = stats.min_dist;
            j["aspect_ratio"] = stats.aspect_ratio;
            std::cout << j.dump(2) << "\n";
            return 0;
        }

        if (ve->parsed()) {
            auto graph = acng::load_graph(ve_graph);
            auto data = acng::load_fvecs(ve_data);
            std::vector<acng::Violation> violations;
            if (ve_check == "reducible") {
                if (ve_queries.empty())
                    throw acng::UsageError(
                        "--check reducible requires --queries");
                auto queries =
                    acng::load_fvecs(ve_queries, acng::DuplicatePolicy::Allow);
                violations = acng::verify_alpha_reducible(
                    graph, data, queries, ve_tau, ve_alpha, ve_threads);
            } else if (ve_check == "shortcut") {
                violations = acng::verify_shortcut_reachable(
                    graph, data, ve_alpha, ve_threads);
            } else {
                throw acng::UsageError("unknown check '" + ve_check + "'");
            }
            if (!violations.empty()) {
                const auto& v = violations.front();
                std::cerr << "verification failed: " << violations.size()
                          << " violation(s); first: query/source " << v.query
                          << ", vertex " << v.vertex << ": " << v.what
                          << "\n";
                return 3;
            }
            std::cout << "verification passed\n";
            return 0;
        }
    } catch (const acng::UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const acng::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const acng::ConstructionError& e) {
        std::cerr << "construction error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
