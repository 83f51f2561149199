// End-to-end checks of the acng binary: flag surface, exit codes, file
// formats, determinism. The binary path comes in via ACNG_CLI_PATH.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "acng/dataset.hpp"
#include "acng/graph.hpp"
#include "doctest.h"
#include "json.hpp"
#include "test_util.hpp"

namespace fs = std::filesystem;
using namespace acng;

namespace {

struct Workdir {
    fs::path dir;
    Workdir() {
        dir = fs::temp_directory_path() / "acng_cli_tests";
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    std::string operator/(const std::string& name) const {
        return (dir / name).string();
    }
};

int run(const std::string& args) {
    std::string cmd = std::string(ACNG_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string run_capture(const std::string& args, const std::string& out_file) {
    std::string cmd = std::string(ACNG_CLI_PATH) + " " + args + " >" +
                      out_file + " 2>&1";
    std::system(cmd.c_str());
    std::ifstream in(out_file);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string file_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)), {});
}

}  // namespace

TEST_CASE("cli: stats on the hand-enumerable line fixture") {
    Workdir wd;
    Dataset line(1, {0.0f, 1.0f, 3.0f});
    save_fvecs(line, wd / "line.fvecs");

    auto out = run_capture("stats --data " + (wd / "line.fvecs"),
                           wd / "stats.out");
    auto j = nlohmann::json::parse(out);
    CHECK(j["aspect_ratio"].get<double>() == doctest::Approx(3.0));
    CHECK(j["diameter"].get<double>() == doctest::Approx(3.0));
    CHECK(j["min_dist"].get<double>() == doctest::Approx(1.0));
}

TEST_CASE("cli: exact build routes through the requested rule") {
    Workdir wd;
    auto data = testutil::random_dataset(1000, 8, 3);
    save_fvecs(data, wd / "data.fvecs");

    CHECK(run("build --exact --rule scaled --alpha 1.2 --data " +
              (wd / "data.fvecs") + " --out " + (wd / "vamana.acng")) == 0);
    auto g = load_graph(wd / "vamana.acng");
    CHECK(g.size() == 1000);

    // the slow-Vamana reference graph passes the shortcut-reachable check
    CHECK(run("verify --check shortcut --alpha 1.2 --graph " +
              (wd / "vamana.acng") + " --data " + (wd / "data.fvecs")) == 0);
}

TEST_CASE("cli: build / gt / search pipeline with byte-identical reruns") {
    Workdir wd;
    auto data = testutil::random_dataset(600, 12, 5);
    auto queries = testutil::random_dataset(40, 12, 6);
    save_fvecs(data, wd / "data.fvecs");
    save_fvecs(queries, wd / "q.fvecs");
    std::string input_before = file_bytes(wd / "data.fvecs");

    std::string build_flags = " --data " + (wd / "data.fvecs") +
                              " --K 10 --M 8 --L 16 --C 32 --tau 0.02"
                              " --seed 9";
    CHECK(run("build" + build_flags + " --out " + (wd / "a.acng")) == 0);
    CHECK(run("build" + build_flags + " --out " + (wd / "b.acng")) == 0);
    CHECK(run("build" + build_flags + " --threads 1 --out " +
              (wd / "c.acng")) == 0);
    CHECK(file_bytes(wd / "a.acng") == file_bytes(wd / "b.acng"));
    CHECK(file_bytes(wd / "a.acng") == file_bytes(wd / "c.acng"));

    CHECK(run("gt --data " + (wd / "data.fvecs") + " --queries " +
              (wd / "q.fvecs") + " --k 10 --out " + (wd / "gt.ivecs")) == 0);

    std::string search_flags = " --graph " + (wd / "a.acng") + " --data " +
                               (wd / "data.fvecs") + " --queries " +
                               (wd / "q.fvecs") + " --gt " + (wd / "gt.ivecs") +
                               " --k 10 --L-list 10,20,40";
    CHECK(run("search" + search_flags + " --out " + (wd / "r1.csv")) == 0);
    CHECK(run("search" + search_flags + " --threads 1 --out " +
              (wd / "r2.csv")) == 0);
    CHECK(file_bytes(wd / "r1.csv") == file_bytes(wd / "r2.csv"));

    std::ifstream csv(wd / "r1.csv");
    std::string header;
    std::getline(csv, header);
    CHECK(header == "L,recall_at_k,mean_ndc,mean_hops");
    int rows = 0;
    for (std::string line; std::getline(csv, line);) ++rows;
    CHECK(rows == 3);

    // no command mutated its input
    CHECK(file_bytes(wd / "data.fvecs") == input_before);

    // build report exists and parses with stable keys
    auto rep = nlohmann::json::parse(file_bytes(wd / "a.acng.report.json"));
    CHECK(rep.contains("phases"));
    CHECK(rep.contains("repaired_vertices"));
}

TEST_CASE("cli: exit codes") {
    Workdir wd;

    SUBCASE("malformed fvecs is a data error (2)") {
        std::ofstream bad(wd / "bad.fvecs", std::ios::binary);
        int32_t dim = 8;
        bad.write(reinterpret_cast<char*>(&dim), 4);
        float v = 1.0f;
        bad.write(reinterpret_cast<char*>(&v), 4);  // truncated
        bad.close();
        CHECK(run("stats --data " + (wd / "bad.fvecs")) == 2);
    }

    SUBCASE("parameter violations are usage errors (1)") {
        auto data = testutil::random_dataset(50, 4, 7);
        save_fvecs(data, wd / "d.fvecs");
        // C < M violates the construction invariant
        CHECK(run("build --data " + (wd / "d.fvecs") + " --out " +
                  (wd / "x.acng") + " --K 8 --M 16 --C 8") == 1);
        // missing required flag
        CHECK(run("build --data " + (wd / "d.fvecs")) == 1);
    }

    SUBCASE("a verification violation exits 3") {
        // hand-built graph on a line: 8's only neighbor barely helps, so
        // alpha = 2 shortcut reachability must fail
        Dataset line(1, {0.0f, 1.0f, 2.0f, 4.0f, 8.0f});
        save_fvecs(line, wd / "line.fvecs");
        ProximityGraph g;
        g.max_degree = 1;
        g.entry_point = 0;
        g.adjacency = {{1}, {0}, {0}, {0}, {0}};
        save_graph(g, wd / "line.acng");
        CHECK(run("verify --check shortcut --alpha 2.0 --graph " +
                  (wd / "line.acng") + " --data " + (wd / "line.fvecs")) == 3);
    }

    SUBCASE("reducible check without queries is a usage error") {
        auto data = testutil::random_dataset(20, 4, 8);
        save_fvecs(data, wd / "d.fvecs");
        CHECK(run("build --exact --data " + (wd / "d.fvecs") + " --out " +
                  (wd / "g.acng")) == 0);
        CHECK(run("verify --check reducible --alpha 1.1 --graph " +
                  (wd / "g.acng") + " --data " + (wd / "d.fvecs")) == 1);
    }
}
