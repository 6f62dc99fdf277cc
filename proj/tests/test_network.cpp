#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "roasel/network.hpp"

using namespace roasel;

namespace {

std::string read_fixture(const char* name) {
    std::ifstream in(std::string(ROA_TEST_DATA_DIR) + "/" + name);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace

TEST_CASE("parse_network fixtures") {
    SUBCASE("example 1") {
        auto doc = parse_network(read_fixture("example1.json"));
        CHECK(doc.net.node_count == 2);
        CHECK(doc.net.candidates.size() == 2);
        CHECK(doc.net.adjacency(0, 0) == doctest::Approx(2.0));
    }
    SUBCASE("example 2") {
        auto doc = parse_network(read_fixture("example2.json"));
        CHECK(doc.net.node_count == 4);
        CHECK(doc.net.candidates.size() == 4);
    }
    SUBCASE("candidate index 0 rejected") {
        CHECK_THROWS_WITH_AS(
            parse_network(R"({"nodes":2,"adjacency":[[1,0],[0,1]],"drivers":[0]})"),
            "drivers[0]: index out of range", ParseError);
    }
    SUBCASE("duplicate candidate rejected") {
        CHECK_THROWS_AS(parse_network(R"({"nodes":2,"adjacency":[[1,0],[0,1]],"drivers":[1,1]})"),
                        ParseError);
    }
    SUBCASE("non-square adjacency rejected") {
        CHECK_THROWS_AS(parse_network(R"({"nodes":2,"adjacency":[[1,0,0],[0,1,0]],"drivers":[1]})"),
                        ParseError);
    }
    SUBCASE("malformed json rejected") {
        CHECK_THROWS_AS(parse_network("{nope"), ParseError);
    }
    SUBCASE("indefinite Q rejected") {
        CHECK_THROWS_AS(
            parse_network(
                R"({"nodes":2,"adjacency":[[1,0],[0,1]],"drivers":[1],"config":{"Q":[[-1,0],[0,1]]}})"),
            ParseError);
    }
}

TEST_CASE("input_matrix") {
    auto doc = parse_network(read_fixture("example1.json"));
    DenseMatrix b1 = input_matrix(doc.net, 0);
    CHECK(b1(0, 0) == doctest::Approx(1.0));
    CHECK(b1(1, 0) == doctest::Approx(0.0));

    auto doc2 = parse_network(read_fixture("example2.json"));
    DenseMatrix b3 = input_matrix(doc2.net, 2);
    for (int i = 0; i < 4; ++i) CHECK(b3(i, 0) == doctest::Approx(i == 2 ? 1.0 : 0.0));

    NetworkSpec weighted;
    weighted.node_count = 3;
    weighted.adjacency = DenseMatrix::identity(3);
    weighted.candidates = {2};
    weighted.input_weights = {2.0};
    DenseMatrix bw = input_matrix(weighted, 0);
    CHECK(bw(1, 0) == doctest::Approx(2.0));
    CHECK_THROWS_AS(input_matrix(weighted, 5), DimensionError);
}

TEST_CASE("is_controllable") {
    DenseMatrix a1{{2, 1}, {1, 1}};
    CHECK(is_controllable(a1, DenseMatrix{{1}, {0}}, 1e-9));
    // repeated eigenvalue, single input
    CHECK_FALSE(is_controllable(DenseMatrix::identity(2), DenseMatrix{{1}, {0}}, 1e-9));

    auto doc2 = parse_network(read_fixture("example2.json"));
    for (int i = 0; i < 4; ++i)
        CHECK(is_controllable(doc2.net.adjacency, input_matrix(doc2.net, i), 1e-9));
}

TEST_CASE("is_controllable is invariant to positive input rescaling") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::uniform_real_distribution<double> sdist(0.01, 100.0);
    for (int trial = 0; trial < 100; ++trial) {
        int n = 2 + static_cast<int>(rng() % 4);
        DenseMatrix a(n, n);
        DenseMatrix b(n, 1);
        for (int i = 0; i < n; ++i) {
            b(i, 0) = dist(rng);
            for (int j = 0; j < n; ++j) a(i, j) = dist(rng);
        }
        DenseMatrix bs = b;
        bs *= sdist(rng);
        CHECK(is_controllable(a, b, 1e-9) == is_controllable(a, bs, 1e-9));
    }
}

TEST_CASE("validate_candidates") {
    AnalysisConfig cfg;
    SUBCASE("example 1: both controllable") {
        auto doc = parse_network(read_fixture("example1.json"));
        auto checks = validate_candidates(doc.net, doc.config);
        REQUIRE(checks.size() == 2);
        for (const auto& c : checks) {
            CHECK(c.controllable);
            CHECK(c.subsystem_controllable);
        }
    }
    SUBCASE("example 2: all four controllable") {
        auto doc = parse_network(read_fixture("example2.json"));
        auto checks = validate_candidates(doc.net, doc.config);
        REQUIRE(checks.size() == 4);
        for (const auto& c : checks) {
            CHECK(c.controllable);
            CHECK(c.subsystem_controllable);
        }
    }
    SUBCASE("diag network with single driver is uncontrollable") {
        NetworkSpec net;
        net.node_count = 2;
        net.adjacency = DenseMatrix{{1, 0}, {0, 2}};
        net.candidates = {1};
        auto checks = validate_candidates(net, cfg);
        REQUIRE(checks.size() == 1);
        CHECK(checks[0].node == 1);
        CHECK_FALSE(checks[0].controllable);
    }
}

TEST_CASE("serialize/parse round trip") {
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    for (int trial = 0; trial < 20; ++trial) {
        NetworkDocument doc;
        int n = 2 + static_cast<int>(rng() % 5);
        doc.net.node_count = n;
        doc.net.adjacency = DenseMatrix(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) doc.net.adjacency(i, j) = dist(rng);
        doc.net.candidates = {1, n};
        if (n == 1) doc.net.candidates = {1};
        doc.net.input_weights = {1.5, 2.5};
        doc.config.input_cost = 2.0;
        doc.config.saturation_limit = 3.0;

        NetworkDocument back = parse_network(serialize_network(doc));
        CHECK(back.net.node_count == doc.net.node_count);
        CHECK(back.net.candidates == doc.net.candidates);
        CHECK(back.net.input_weights == doc.net.input_weights);
        CHECK((back.net.adjacency - doc.net.adjacency).frobenius_norm() == 0.0);
        CHECK(back.config.input_cost == doc.config.input_cost);
        CHECK(back.config.saturation_limit == doc.config.saturation_limit);
    }
}
