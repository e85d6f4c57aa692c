#include <catch2/catch_amalgamated.hpp>

#include <pushpull/dynamics.hpp>
#include <pushpull/generators.hpp>
#include <pushpull/graph.hpp>
#include <pushpull/spectral.hpp>

#include "oracles.hpp"

using namespace pushpull;

TEST_CASE("regular structures have known spectral radii", "[spectral]") {
    SECTION("d-regular graphs give exactly d") {
        for (auto [n, d] : std::vector<std::pair<NodeId, NodeId>>{{20, 2}, {100, 4}, {300, 6}}) {
            Graph g = generate_regular(n, d, 31);
            auto est = spectral_radius(g);
            REQUIRE(est.converged);
            REQUIRE(est.value == Catch::Approx(static_cast<double>(d)).margin(1e-8));
        }
    }
    SECTION("complete graph gives n-1") {
        std::vector<std::pair<NodeId, NodeId>> edges;
        for (NodeId u = 0; u < 12; ++u)
            for (NodeId v = u + 1; v < 12; ++v)
                edges.emplace_back(u, v);
        auto est = spectral_radius(Graph(12, edges, false));
        REQUIRE(est.value == Catch::Approx(11.0).margin(1e-8));
    }
    SECTION("star K_{1,4} gives 2") {
        Graph g(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}}, false);
        auto est = spectral_radius(g);
        REQUIRE(est.value == Catch::Approx(2.0).margin(1e-8));
    }
    SECTION("directed cycle gives 1, uniform start is already stationary") {
        Graph g(6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 0}}, true);
        auto est = spectral_radius(g);
        REQUIRE(est.converged);
        REQUIRE(est.value == Catch::Approx(1.0).margin(1e-9));
    }
}

TEST_CASE("spectral radius matches the dense eigensolver", "[spectral]") {
    int checked = 0;
    for (std::uint64_t seed = 500; seed < 540; ++seed) {
        Graph g = oracle::random_graph(seed, 35, seed % 2 == 0);
        auto est = spectral_radius(g, 1e-12, 50000);
        if (!est.converged)
            continue;  // defective spectra (e.g. nilpotent parts) converge too slowly
        ++checked;
        REQUIRE(est.value == Catch::Approx(oracle::dense_spectral_radius(g)).margin(1e-6));
    }
    REQUIRE(checked >= 25);
}

TEST_CASE("spectral radius is monotone under edge insertion", "[spectral]") {
    for (std::uint64_t seed = 600; seed < 615; ++seed) {
        Graph g = oracle::random_graph(seed, 25, false);
        std::vector<std::pair<NodeId, NodeId>> edges;
        for (NodeId v = 0; v < g.num_nodes(); ++v)
            for (NodeId u : g.out_neighbors(v))
                if (v < u)
                    edges.emplace_back(v, u);
        // locate a missing pair to insert
        std::pair<NodeId, NodeId> extra{-1, -1};
        for (NodeId u = 0; u < g.num_nodes() && extra.first < 0; ++u)
            for (NodeId v = u + 1; v < g.num_nodes() && extra.first < 0; ++v)
                if (!g.has_arc(u, v))
                    extra = {u, v};
        if (extra.first < 0)
            continue;
        const double before = spectral_radius(g, 1e-12, 50000).value;
        edges.push_back(extra);
        const double after =
            spectral_radius(Graph(g.num_nodes(), edges, false), 1e-12, 50000).value;
        REQUIRE(after >= before - 1e-9);
    }
}

TEST_CASE("disconnected graphs are flagged and still estimated", "[spectral]") {
    // triangle plus an isolated node
    Graph g(4, {{0, 1}, {1, 2}, {0, 2}}, false);
    auto est = spectral_radius(g);
    REQUIRE(est.value == Catch::Approx(2.0).margin(1e-8));
    REQUIRE(!est.note.empty());

    Graph connected(3, {{0, 1}, {1, 2}, {0, 2}}, false);
    REQUIRE(spectral_radius(connected).note.empty());
}

TEST_CASE("slowly mixing spectra report non-convergence honestly", "[spectral]") {
    // directed path: nilpotent adjacency, radius 0, defective Jordan block
    Graph g(3, {{0, 1}, {1, 2}}, true);
    auto est = spectral_radius(g, 1e-10, 10000);
    REQUIRE(!est.converged);
    REQUIRE(est.value < 1e-3);
    REQUIRE(est.iterations == 10000);
}

TEST_CASE("spectral parameter validation", "[spectral]") {
    Graph g(3, {{0, 1}, {1, 2}}, false);
    REQUIRE_THROWS_AS(spectral_radius(g, 0.0, 100), std::invalid_argument);
    REQUIRE_THROWS_AS(spectral_radius(g, 1e-10, 0), std::invalid_argument);
}

TEST_CASE("stability matrix radius reduces to (1-beta) + gamma lambda1 at zero",
          "[spectral]") {
    Graph g = generate_regular(200, 6, 77);
    EpidemicParams p{0.0, 0.4, 0.01};
    auto eq = find_equilibrium(g, p, InfectionProfile::uniform(200, 0.0));
    REQUIRE(eq.converged);
    auto est = stability_matrix_radius(g, p, eq);
    REQUIRE(est.converged);
    REQUIRE(est.value == Catch::Approx(0.6 + 0.01 * 6.0).margin(1e-8));
}

TEST_CASE("stability matrix radius matches the dense eigensolver", "[spectral]") {
    int checked = 0;
    for (std::uint64_t seed = 700; seed < 720; ++seed) {
        Graph g = oracle::random_graph(seed, 30, seed % 3 == 0);
        EpidemicParams p{0.3 + 0.01 * static_cast<double>(seed % 5), 0.5, 0.05};
        auto eq = find_equilibrium(g, p, InfectionProfile::uniform(g.num_nodes(), 0.5));
        REQUIRE(eq.converged);
        auto est = stability_matrix_radius(g, p, eq, 1e-12, 50000);
        if (!est.converged)
            continue;
        ++checked;
        REQUIRE(est.value ==
                Catch::Approx(oracle::dense_stability_radius(g, p, eq.i_star)).margin(1e-6));
    }
    REQUIRE(checked >= 15);
}

TEST_CASE("stability analysis rejects unconverged equilibria", "[spectral]") {
    Graph g(2, {{0, 1}}, false);
    EpidemicParams p{0.4, 0.6, 0.004};
    Equilibrium eq;
    eq.i_star = {0.1, 0.1};
    eq.converged = false;
    REQUIRE_THROWS_AS(stability_matrix_radius(g, p, eq), std::invalid_argument);
    eq.i_star = {0.1, 0.1, 0.1};
    eq.converged = true;
    REQUIRE_THROWS_AS(stability_matrix_radius(g, p, eq), std::invalid_argument);
}
