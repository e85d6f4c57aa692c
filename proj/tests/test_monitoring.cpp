#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <vector>

#include <pushpull/generators.hpp>
#include <pushpull/monitoring.hpp>

using namespace pushpull;

namespace {

NodeSeries series_from_rows(std::int32_t n, const std::vector<std::vector<double>>& rows) {
    NodeSeries s;
    s.n = n;
    for (const auto& row : rows)
        s.append(row);
    return s;
}

}  // namespace

TEST_CASE("panel selection on hand-checked topologies", "[monitoring]") {
    SECTION("regular graph: every node qualifies, ids break the tie") {
        Graph g = generate_regular(50, 6, 11);
        auto panel = select_panel(g, 4);
        REQUIRE(panel.k_hat == 6);
        REQUIRE(panel.target_2deg == Catch::Approx(30.0));  // 6*6 - 6
        REQUIRE(panel.nodes == std::vector<NodeId>{0, 1, 2, 3});
        REQUIRE(panel.requested == 4);
        for (double d : panel.distances)
            REQUIRE(d == 0.0);
    }
    SECTION("star: rounded class is empty and widens to the leaves") {
        Graph g(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}}, false);
        auto panel = select_panel(g, 2);
        REQUIRE(panel.k_hat == 1);  // avg 1.6 rounds to 2, nearest present is 1
        REQUIRE(panel.target_2deg == Catch::Approx(3.0));
        REQUIRE(panel.nodes == std::vector<NodeId>{1, 2});

        auto all = select_panel(g, 10);
        REQUIRE(all.nodes == std::vector<NodeId>{1, 2, 3, 4});  // class smaller than asked
        REQUIRE(all.requested == 10);
    }
    SECTION("distance ranking beats id order") {
        // 6-cycle + chord 0-3 + pendants 6 on 0 and 7 on 1. Average degree
        // 18/8 rounds to 2; the degree-2 class is {2,4,5} with 2deg 4, 3, 4
        // and target 11/3, so ranking is 2, 5 (tied, id order), then 4.
        Graph g(8,
                {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 0}, {0, 3}, {0, 6}, {1, 7}},
                false);
        auto panel = select_panel(g, 3);
        REQUIRE(panel.k_hat == 2);
        REQUIRE(panel.target_2deg == Catch::Approx(11.0 / 3.0));
        REQUIRE(panel.nodes == std::vector<NodeId>{2, 5, 4});
        REQUIRE(panel.distances[0] == Catch::Approx(1.0 / 3.0));
        REQUIRE(panel.distances[1] == Catch::Approx(1.0 / 3.0));
        REQUIRE(panel.distances[2] == Catch::Approx(2.0 / 3.0));

        REQUIRE(select_panel(g, 2).nodes == std::vector<NodeId>{2, 5});
    }
    SECTION("size must be positive") {
        Graph g(3, {{0, 1}, {1, 2}}, false);
        REQUIRE_THROWS_AS(select_panel(g, 0), std::invalid_argument);
    }
}

TEST_CASE("panels nest and distances are sorted", "[monitoring]") {
    Graph g = generate(GraphModel::erdos_renyi, 400, 0.015, 2024);
    auto stats = degree_statistics(g);
    MonitorPanel prev;
    for (std::int64_t size : {1, 2, 4, 8, 16, 32, 64}) {
        auto panel = select_panel(stats, size);
        REQUIRE(panel.nodes.size() <= static_cast<std::size_t>(size));
        for (std::size_t j = 0; j < panel.nodes.size(); ++j)
            REQUIRE(stats.degree[static_cast<std::size_t>(panel.nodes[j])] == panel.k_hat);
        for (std::size_t j = 0; j + 1 < panel.distances.size(); ++j)
            REQUIRE(panel.distances[j] <= panel.distances[j + 1]);
        // prefix property
        for (std::size_t j = 0; j < prev.nodes.size(); ++j)
            REQUIRE(panel.nodes[j] == prev.nodes[j]);
        prev = panel;
    }
    // the graph overload is the same computation
    auto direct = select_panel(g, 16);
    REQUIRE(direct.nodes == select_panel(stats, 16).nodes);
}

TEST_CASE("panel estimator on hand series", "[monitoring]") {
    auto series = series_from_rows(2, {{0.0, 1.0}, {0.5, 0.5}, {1.0, 0.0}});
    MonitorPanel first;
    first.nodes = {0};
    MonitorPanel both;
    both.nodes = {0, 1};

    REQUIRE(panel_estimate(series, first, 0, 2) == Catch::Approx(0.5));
    REQUIRE(panel_estimate(series, first, 1, 2) == Catch::Approx(0.75));
    REQUIRE(panel_estimate(series, first, 2, 2) == 1.0);
    REQUIRE(panel_estimate(series, both, 0, 2) == Catch::Approx(0.5));

    auto running = running_estimate(series, first, 0);
    REQUIRE(running.size() == 3);
    REQUIRE(running[0] == 0.0);
    REQUIRE(running[1] == Catch::Approx(0.25));
    REQUIRE(running[2] == panel_estimate(series, first, 0, 2));

    SECTION("window and panel validation") {
        REQUIRE_THROWS_AS(panel_estimate(series, first, 2, 1), std::invalid_argument);
        REQUIRE_THROWS_AS(panel_estimate(series, first, 0, 3), std::invalid_argument);
        REQUIRE_THROWS_AS(panel_estimate(series, first, -1, 2), std::invalid_argument);
        MonitorPanel empty;
        REQUIRE_THROWS_AS(panel_estimate(series, empty, 0, 2), std::invalid_argument);
        MonitorPanel stray;
        stray.nodes = {5};
        REQUIRE_THROWS_AS(panel_estimate(series, stray, 0, 2), std::invalid_argument);
        REQUIRE_THROWS_AS(running_estimate(series, stray, 0), std::invalid_argument);
    }
}

TEST_CASE("full panel reproduces the population average", "[monitoring]") {
    Graph g = generate(GraphModel::erdos_renyi, 120, 0.05, 7);
    EpidemicParams p{0.3, 0.4, 0.05};
    auto traj = integrate(g, p, InfectionProfile::seeded_fraction(120, 0.2, 9), 30,
                          IntegrateOptions{true});
    MonitorPanel all;
    for (NodeId v = 0; v < 120; ++v)
        all.nodes.push_back(v);

    double direct = 0.0;
    for (std::int64_t t = 5; t <= 30; ++t)
        direct += traj.ibar[static_cast<std::size_t>(t)];
    direct /= 26.0;
    REQUIRE(panel_estimate(traj.profiles, all, 5, 30) == Catch::Approx(direct).margin(1e-13));
}

TEST_CASE("uniform regular dynamics make every panel exact", "[monitoring]") {
    Graph g = generate_regular(60, 4, 3);
    EpidemicParams p{0.2, 0.5, 0.1};
    auto traj = integrate(g, p, InfectionProfile::uniform(60, 0.3), 25, IntegrateOptions{true});
    auto panel = select_panel(g, 5);
    REQUIRE(panel.nodes.size() == 5);
    double direct = 0.0;
    for (std::int64_t t = 10; t <= 25; ++t)
        direct += traj.ibar[static_cast<std::size_t>(t)];
    direct /= 16.0;
    REQUIRE(panel_estimate(traj.profiles, panel, 10, 25) ==
            Catch::Approx(direct).margin(1e-13));
}

TEST_CASE("small panel tracks the average on a sparse random graph", "[monitoring]") {
    // deterministic counterpart of the sampled-monitoring setup: moderate
    // coupling, panel of 16 from the average-degree class
    Graph g = generate(GraphModel::erdos_renyi, 300, 0.02, 501);
    EpidemicParams p{0.4, 0.4, 0.001};
    auto traj = integrate(g, p, InfectionProfile::seeded_fraction(300, 0.2, 77), 200,
                          IntegrateOptions{true});
    auto panel = select_panel(g, 16);
    REQUIRE(panel.nodes.size() == 16);
    double direct = 0.0;
    for (std::int64_t t = 10; t <= 190; ++t)
        direct += traj.ibar[static_cast<std::size_t>(t)];
    direct /= 181.0;
    REQUIRE(std::abs(panel_estimate(traj.profiles, panel, 10, 190) - direct) < 1e-2);
}

TEST_CASE("degree class window means", "[monitoring]") {
    Graph g(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}}, false);
    auto series = series_from_rows(
        5, {{0.4, 0.1, 0.1, 0.1, 0.1}, {0.2, 0.3, 0.3, 0.3, 0.3}});
    auto means = degree_class_window_means(g, series, 0, 1);
    REQUIRE(means.size() == 2);
    REQUIRE(means.at(4) == Catch::Approx(0.3));
    REQUIRE(means.at(1) == Catch::Approx(0.2));

    REQUIRE_THROWS_AS(degree_class_window_means(g, series, 0, 2), std::invalid_argument);
    REQUIRE_THROWS_AS(degree_class_window_means(g, series, 1, 0), std::invalid_argument);
    auto wrong = series_from_rows(3, {{0.0, 0.0, 0.0}});
    REQUIRE_THROWS_AS(degree_class_window_means(g, wrong, 0, 0), std::invalid_argument);
}
