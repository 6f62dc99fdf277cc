#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output;  // stdout + stderr
};

RunResult run_cli(const std::string& args) {
    std::string cmd = std::string(ROA_CLI_PATH) + " " + args + " 2>&1";
    RunResult r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf;
    while (size_t got = fread(buf.data(), 1, buf.size(), pipe)) r.output.append(buf.data(), got);
    int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string fixture(const char* name) {
    return std::string(ROA_TEST_DATA_DIR) + "/" + name;
}

std::string tmp_path(const char* name) {
    return std::string("/tmp/roa_cli_test_") + name;
}

}  // namespace

TEST_CASE("analyze example 1") {
    auto out = tmp_path("ex1.json");
    auto r = run_cli("analyze " + fixture("example1.json") + " --out " + out);
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("best driver node: 1") != std::string::npos);
    CHECK(r.output.find("0.812") != std::string::npos);

    std::ifstream in(out);
    REQUIRE(in.good());
    nlohmann::json j = nlohmann::json::parse(in);
    CHECK(j["schema"] == 1);
    CHECK(j["best_candidate"] == 1);
    CHECK(j["mode"] == "full-antistable");
    CHECK(j["candidates"].size() == 2);
}

TEST_CASE("analyze example 2 ranks 4,1,3,2") {
    auto out = tmp_path("ex2.json");
    auto r = run_cli("analyze " + fixture("example2.json") + " --out " + out);
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("best driver node: 4") != std::string::npos);
    std::ifstream in(out);
    nlohmann::json j = nlohmann::json::parse(in);
    CHECK(j["mode"] == "subsystem");
    CHECK(j["best_candidate"] == 4);
    // table rows come out ranked: node column order 4, 1, 3, 2
    std::istringstream is(r.output);
    std::vector<int> order;
    for (std::string line; std::getline(is, line);) {
        std::istringstream ls(line);
        int node;
        if (ls >> node && node >= 1 && node <= 4) order.push_back(node);
    }
    CHECK(order == std::vector<int>{4, 1, 3, 2});
}

TEST_CASE("analyze stable network") {
    auto r = run_cli("analyze " + fixture("stable.json"));
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("globally stabilizable") != std::string::npos);
}

TEST_CASE("analyze output is deterministic") {
    auto o1 = tmp_path("det1.json");
    auto o2 = tmp_path("det2.json");
    run_cli("analyze " + fixture("example2.json") + " --out " + o1);
    run_cli("analyze " + fixture("example2.json") + " --out " + o2);
    std::ifstream f1(o1), f2(o2);
    std::stringstream s1, s2;
    s1 << f1.rdbuf();
    s2 << f2.rdbuf();
    CHECK(s1.str() == s2.str());
}

TEST_CASE("analyze invalid document exits 2") {
    auto bad = tmp_path("bad.json");
    std::ofstream(bad) << R"({"nodes":2,"adjacency":[[1,0],[0,1]],"drivers":[9]})";
    auto r = run_cli("analyze " + bad);
    CHECK(r.exit_code == 2);
}

TEST_CASE("analyze center spectrum exits 3") {
    auto doc = tmp_path("center.json");
    std::ofstream(doc) << R"({"nodes":2,"adjacency":[[0,1],[-1,0]],"drivers":[1]})";
    auto r = run_cli("analyze " + doc);
    CHECK(r.exit_code == 3);
    CHECK(r.output.find("imaginary axis") != std::string::npos);
}

TEST_CASE("ellipse export") {
    SUBCASE("example 1 closed curve") {
        auto out = tmp_path("e1.csv");
        auto r = run_cli("ellipse " + fixture("example1.json") + " --node 1 --points 360 --out " + out);
        CHECK(r.exit_code == 0);
        std::ifstream in(out);
        std::string header;
        std::getline(in, header);
        CHECK(header == "x1,x2");
        int rows = 0;
        for (std::string line; std::getline(in, line);) ++rows;
        CHECK(rows == 360);
    }
    SUBCASE("example 2 subsystem coordinates") {
        auto out = tmp_path("e2.csv");
        auto r = run_cli("ellipse " + fixture("example2.json") + " --node 4 --out " + out);
        CHECK(r.exit_code == 0);
        std::ifstream in(out);
        std::string comment, header;
        std::getline(in, comment);
        std::getline(in, header);
        CHECK(comment.find("subsystem") != std::string::npos);
        CHECK(header == "z1,z2");
    }
    SUBCASE("--points 3 emits exactly 3 rows") {
        auto r = run_cli("ellipse " + fixture("example1.json") + " --node 1 --points 3");
        CHECK(r.exit_code == 0);
        int rows = 0;
        std::istringstream is(r.output);
        for (std::string line; std::getline(is, line);) ++rows;
        CHECK(rows == 4);  // header + 3 points
    }
    SUBCASE("wrong dimension exits 4") {
        auto doc = tmp_path("dim3.json");
        std::ofstream(doc)
            << R"({"nodes":3,"adjacency":[[1,1,0],[0,2,1],[0,0,3]],"drivers":[3]})";
        auto r = run_cli("ellipse " + doc + " --node 3");
        CHECK(r.exit_code == 4);
    }
}

TEST_CASE("verify") {
    SUBCASE("example 1 all nodes pass") {
        auto r = run_cli("verify " + fixture("example1.json") + " --samples 8");
        CHECK(r.exit_code == 0);
        CHECK(r.output.find("FAIL") == std::string::npos);
    }
    SUBCASE("inflated radius fails") {
        auto r = run_cli("verify " + fixture("example1.json") + " --samples 8 --scale-delta 4.0");
        CHECK(r.exit_code == 1);
        CHECK(r.output.find("FAIL") != std::string::npos);
    }
    SUBCASE("near-origin samples pass trivially") {
        auto r = run_cli("verify " + fixture("example1.json") +
                         " --samples 4 --boundary-scale 1e-6");
        CHECK(r.exit_code == 0);
    }
}

TEST_CASE("simulate") {
    SUBCASE("zero start is flat") {
        auto out = tmp_path("traj0.csv");
        auto r = run_cli("simulate " + fixture("example1.json") +
                         " --node 1 --x0 0,0 --horizon 0.5 --out " + out);
        CHECK(r.exit_code == 0);
        CHECK(r.output.find("converged: true") != std::string::npos);
    }
    SUBCASE("interior start converges") {
        auto r = run_cli("simulate " + fixture("example1.json") +
                         " --node 1 --x0 0.05,0.05 --out /tmp/roa_cli_test_traj1.csv");
        CHECK(r.exit_code == 0);
        CHECK(r.output.find("converged: true") != std::string::npos);
    }
    SUBCASE("x0 length mismatch exits 2") {
        auto r = run_cli("simulate " + fixture("example1.json") + " --node 1 --x0 1,2,3");
        CHECK(r.exit_code == 2);
    }
}
