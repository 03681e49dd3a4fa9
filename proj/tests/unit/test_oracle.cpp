#include <doctest.h>

#include "mmbid/errors.hpp"
#include "mmbid/oracle.hpp"
#include "mmbid/solver.hpp"
#include "support/reference.hpp"

#include <cmath>
#include <numeric>

using namespace mmbid;

TEST_CASE("build_game examples") {
    const auto p = build_game(ValueDistribution::point(1.0), 1, std::vector<double>{0.0, 0.5});
    REQUIRE(p.values.size() == 1);
    CHECK(p.values[0] == 1.0);
    CHECK(p.weights[0] == 1.0);
    CHECK(p.benchmark == std::vector<double>{1.0, 0.5});

    const auto u = build_game(ValueDistribution::uniform(0.0, 1.0), 4, 5);
    CHECK(u.values == std::vector<double>{0.125, 0.375, 0.625, 0.875});
    for (double w : u.weights) CHECK(w == 0.25);
    CHECK(u.bids == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});

    const auto m = build_game(make_distribution("mix 0.5 point 0 + 0.5 point 1"), 2, 3);
    CHECK(m.values == std::vector<double>{0.0, 1.0});
    CHECK(m.weights == std::vector<double>{0.5, 0.5});
}

TEST_CASE("build_game invariants") {
    for (const char* spec : {"uniform 0 1", "beta 2 2", "mix 0.3 point 0 + 0.7 uniform 0 1", "point 0.7"}) {
        INFO(std::string(spec));
        const auto g = build_game(make_distribution(spec), 37, 23);
        CHECK(std::abs(std::accumulate(g.weights.begin(), g.weights.end(), 0.0) - 1.0) <= 1e-12);
        CHECK(std::is_sorted(g.values.begin(), g.values.end()));
        CHECK(std::is_sorted(g.bids.begin(), g.bids.end()));
        CHECK(g.highest_bids().size() == g.bids.size());
        for (std::size_t k = 1; k < g.benchmark.size(); ++k) CHECK(g.benchmark[k] <= g.benchmark[k - 1]);
    }
}

TEST_CASE("build_game errors") {
    const auto u = ValueDistribution::uniform(0.0, 1.0);
    CHECK_THROWS_AS(build_game(u, 0, 10), SpecError);
    CHECK_THROWS_AS(build_game(u, 10, 1), SpecError);
    CHECK_THROWS_AS(build_game(u, 10, std::vector<double>{0.5, 0.2}), SpecError);
    CHECK_THROWS_AS(build_game(u, 10, std::vector<double>{0.0, 0.0, 1.0}), SpecError);
    CHECK_THROWS_AS(build_game(u, 10, std::vector<double>{0.0, 1.5}), SpecError);
}

TEST_CASE("two-bid hand case") {
    const auto g = build_game(ValueDistribution::point(1.0), 1, std::vector<double>{0.0, 0.5});
    const auto r = solve_game(g, 100000, 1e-3);
    CHECK(r.converged);
    CHECK(std::abs(r.value - 0.25) <= 1e-3);
    CHECK(r.gap <= 1e-3);
    CHECK(r.buyer_policy[0][0] == doctest::Approx(0.5).epsilon(1e-2));
}

TEST_CASE("three-bid hand case against exhaustive search") {
    const double bids[3] = {0.0, 0.25, 0.5};
    const double exhaustive = reference::three_bid_game_value(1.0, bids, 1e-3);
    CHECK(std::abs(exhaustive - 7.0 / 24.0) <= 1e-3);
    const auto g = build_game(ValueDistribution::point(1.0), 1, std::vector<double>{0.0, 0.25, 0.5});
    const auto r = solve_game(g, 1000000, 1e-5);
    CHECK(r.converged);
    CHECK(std::abs(r.value - 7.0 / 24.0) <= 1e-5);
}

TEST_CASE("grid of two on point(1)") {
    const auto r = solve_game(build_game(ValueDistribution::point(1.0), 2, 2), 1000, 1e-6);
    CHECK(r.converged);
    CHECK(r.value == 0.0);
}

TEST_CASE("oracle at grid 200 on point(1)") {
    const auto r = solve_game(build_game(ValueDistribution::point(1.0), 200, 200), 1000000, 1e-3);
    CHECK(r.converged);
    CHECK(std::abs(r.value - std::exp(-1.0)) <= 5e-3);
}

TEST_CASE("equal values share one policy row") {
    const auto g = build_game(make_distribution("mix 0.5 point 0.4 + 0.5 point 0.9"), 6, 11);
    const auto r = solve_game(g, 100000, 1e-3);
    REQUIRE(r.buyer_policy.size() == 6);
    CHECK(r.buyer_policy[0] == r.buyer_policy[2]);
    CHECK(r.buyer_policy[3] == r.buyer_policy[5]);
}

TEST_CASE("sandwich and policy shape") {
    const auto g = build_game(ValueDistribution::uniform(0.0, 1.0), 20, 20);
    const auto r = solve_game(g, 200000, 1e-4);
    CHECK(r.converged);
    CHECK(r.lower <= r.value);
    CHECK(r.gap == doctest::Approx(r.value - r.lower));
    CHECK(r.gap <= 1e-4);
    REQUIRE(r.buyer_policy.size() == 20);
    for (const auto& row : r.buyer_policy) {
        CHECK(row.size() == 20);
        CHECK(std::accumulate(row.begin(), row.end(), 0.0) == doctest::Approx(1.0));
    }
    CHECK(std::accumulate(r.nature_mixture.begin(), r.nature_mixture.end(), 0.0) == doctest::Approx(1.0));
}

TEST_CASE("non-convergence is reported") {
    const auto g = build_game(ValueDistribution::uniform(0.0, 1.0), 50, 50);
    const auto r = solve_game(g, 10, 1e-9);
    CHECK_FALSE(r.converged);
    CHECK(r.iterations == 10);
    CHECK(r.gap > 1e-9);
    CHECK_THROWS_AS(solve_game(g, 10, 0.0), SpecError);
}

TEST_CASE("grid consistency") {
    for (const char* spec : {"uniform 0 1", "point 1", "beta 2 2"}) {
        INFO(std::string(spec));
        const auto f = make_distribution(spec);
        const std::size_t m = 20;
        const auto coarse = solve_game(build_game(f, m, m), 1000000, 1e-4);
        const auto fine = solve_game(build_game(f, 2 * m, 2 * m), 1000000, 1e-4);
        CHECK(std::abs(fine.value - coarse.value) <= 2.0 / m);
    }
}

TEST_CASE("oracle approaches the ODE value as the grid refines") {
    const auto f = ValueDistribution::uniform(0.0, 1.0);
    const double target = solve_minimax(f).regret;
    const double e25 = std::abs(solve_game(build_game(f, 25, 25), 1000000, 1e-5).value - target);
    const double e100 = std::abs(solve_game(build_game(f, 100, 100), 1000000, 1e-5).value - target);
    CHECK(e100 < e25);
}

TEST_CASE("oracle csv") {
    OracleResult r;
    r.value = 0.25;
    r.gap = 5e-4;
    r.iterations = 1234;
    CHECK(oracle_csv_header() == "grid,value,gap,iters");
    CHECK(oracle_csv_row(200, r) == "200,0.250000000,0.000500000000,1234");
}
