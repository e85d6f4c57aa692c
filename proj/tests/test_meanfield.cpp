#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include <pushpull/generators.hpp>
#include <pushpull/meanfield.hpp>

using namespace pushpull;

TEST_CASE("degree stationarity equation at closed-form points", "[meanfield]") {
    SECTION("degenerate parameters are rejected") {
        REQUIRE_THROWS_AS(solve_degree_rate(5, EpidemicParams{0.0, 0.0, 0.3}),
                          std::domain_error);
        REQUIRE_THROWS_AS(solve_global_rate(6.0, EpidemicParams{0.0, 0.0, 0.3}),
                          std::domain_error);
        REQUIRE_THROWS_AS(solve_degree_rate(-1, EpidemicParams{0.1, 0.1, 0.1}),
                          std::invalid_argument);
        REQUIRE_THROWS_AS(solve_degree_rate(5, EpidemicParams{0.1, 0.1, 0.1}, 0.0),
                          std::invalid_argument);
    }
    SECTION("isolated nodes settle at the pull equilibrium") {
        auto sol = solve_degree_rate(0, EpidemicParams{0.4, 0.6, 0.9});
        REQUIRE(sol.rate == Catch::Approx(0.4).margin(1e-12));
        REQUIRE(sol.roots_found == 1);
        REQUIRE(sol.residual <= 1e-9);
    }
    SECTION("pull-free equations keep the zero root and report the other") {
        // k=1, gamma=1: f(x) = x(1-x) - beta x with roots 0 and 1-beta
        auto sol = solve_degree_rate(1, EpidemicParams{0.0, 0.5, 1.0});
        REQUIRE(sol.rate == 0.0);
        REQUIRE(sol.roots_found == 2);
        // supercritical pull-free case: zero root plus an interior crossing
        auto super = solve_degree_rate(6, EpidemicParams{0.0, 0.2, 0.5});
        REQUIRE(super.rate == 0.0);
        REQUIRE(super.roots_found == 2);
    }
    SECTION("a root landing exactly on a grid point is counted once") {
        auto sol = solve_degree_rate(1, EpidemicParams{0.0, 0.5, 1.0}, 1e-3);
        REQUIRE(sol.roots_found == 2);  // 0 and 0.5, the latter on the grid
    }
    SECTION("rate grows with degree when a push channel exists") {
        EpidemicParams p{0.4, 0.6, 0.004};
        double prev = -1.0;
        for (std::int64_t k : {0, 3, 6, 20, 200, 1000000}) {
            const double rate = solve_degree_rate(k, p).rate;
            REQUIRE(rate >= prev - 1e-12);
            prev = rate;
        }
    }
    SECTION("unbounded degree approaches 1/(1+beta)") {
        EpidemicParams p{0.4, 0.6, 0.004};
        REQUIRE(limiting_rate(p) == Catch::Approx(0.625));
        auto sol = solve_degree_rate(1000000, p);
        REQUIRE(sol.rate == Catch::Approx(0.625).margin(1e-3));
    }
}

TEST_CASE("stationary rates solve their equations to tolerance", "[meanfield]") {
    SplitMix64 rng(4242);
    for (int trial = 0; trial < 200; ++trial) {
        EpidemicParams p{rng.next_double(), rng.next_double(), rng.next_double()};
        if (p.alpha == 0.0 && p.beta == 0.0)
            continue;
        const auto k = static_cast<std::int64_t>(rng.next_below(300));
        auto sol = solve_degree_rate(k, p);
        REQUIRE(sol.rate >= 0.0);
        REQUIRE(sol.rate <= 1.0);
        REQUIRE(sol.roots_found >= 1);
        REQUIRE(sol.residual <= 1e-9);
        // recompute the defect independently in extended precision
        const long double x = sol.rate;
        const long double s = std::pow(1.0L - static_cast<long double>(p.gamma) * x,
                                       static_cast<long double>(k));
        const long double f =
            (1.0L - (1.0L - p.alpha) * s) * (1.0L - x) - static_cast<long double>(p.beta) * x;
        REQUIRE(std::abs(static_cast<double>(f)) <= 1e-9);
    }
}

TEST_CASE("degree solver matches graph fixed points on regular topologies", "[meanfield]") {
    // On a d-regular graph the exact dynamics preserve uniform profiles, so the
    // graph equilibrium and the scalar degree equation must land on the same
    // value through entirely different solvers (fixed-point iteration vs
    // grid scan plus bisection).
    struct Case {
        std::int32_t n;
        std::int32_t d;
        EpidemicParams p;
    };
    for (const Case& c : {Case{200, 6, {0.4, 0.6, 0.004}}, Case{100, 8, {0.2, 0.3, 0.2}},
                          Case{150, 4, {0.05, 0.9, 0.7}}}) {
        Graph g = generate_regular(c.n, c.d, 977 + c.n);
        auto eq = find_equilibrium(g, c.p, InfectionProfile::uniform(c.n, 0.5));
        REQUIRE(eq.converged);
        double lo = 1.0, hi = 0.0;
        for (double v : eq.i_star) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        REQUIRE(hi - lo < 1e-12);  // uniformity is preserved exactly
        auto sol = solve_degree_rate(c.d, c.p);
        REQUIRE(sol.roots_found == 1);
        REQUIRE(sol.rate == Catch::Approx(eq.mean()).margin(1e-8));
    }
}

TEST_CASE("whole-graph equation tracks the degree equation when gamma k is small",
          "[meanfield]") {
    EpidemicParams p{0.4, 0.6, 0.004};
    auto global = solve_global_rate(6.0, p);
    auto local = solve_degree_rate(6, p);
    REQUIRE(std::abs(global.rate - local.rate) < 1e-3);
    REQUIRE(global.residual <= 1e-9);
    REQUIRE(linearization_size(0.004, 6.0) == Catch::Approx(0.024));

    SECTION("zero average degree reduces to the pull equilibrium") {
        auto sol = solve_global_rate(0.0, EpidemicParams{0.3, 0.7, 0.5});
        REQUIRE(sol.rate == Catch::Approx(0.3).margin(1e-12));
    }
    SECTION("monotone in alpha") {
        double prev = -1.0;
        for (double alpha : {0.1, 0.3, 0.5, 0.7, 0.9}) {
            auto sol = solve_global_rate(6.0, EpidemicParams{alpha, 0.4, 0.004});
            REQUIRE(sol.rate > prev);
            prev = sol.rate;
        }
    }
}

TEST_CASE("degree profile covers exactly the degrees present", "[meanfield]") {
    Graph g(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}}, false);  // star: degrees 1 and 4
    EpidemicParams p{0.4, 0.6, 0.1};
    auto profile = degree_rate_profile(g, p);
    REQUIRE(profile.by_degree.size() == 2);
    REQUIRE(profile.by_degree.count(1) == 1);
    REQUIRE(profile.by_degree.count(4) == 1);
    REQUIRE(profile.by_degree.at(1).rate == Catch::Approx(solve_degree_rate(1, p).rate));
    REQUIRE(profile.by_degree.at(4).rate == Catch::Approx(solve_degree_rate(4, p).rate));
    REQUIRE(profile.by_degree.at(4).rate > profile.by_degree.at(1).rate);
}
