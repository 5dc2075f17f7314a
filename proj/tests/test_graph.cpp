#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "skelxai/errors.hpp"
#include "skelxai/graph.hpp"

using namespace skelxai;

TEST_CASE("NTU graph has 25 nodes and 24 edges") {
    const SkeletonGraph g = build_ntu_graph();
    CHECK(g.node_count == 25);
    CHECK(g.edges.size() == 24);
    CHECK(g.root == 1);
    CHECK(g.parent[g.root] == -1);
}

TEST_CASE("NTU graph is a connected acyclic tree") {
    const SkeletonGraph g = build_ntu_graph();
    // Every node walks to the root without revisiting anything.
    for (int v = 0; v < g.node_count; ++v) {
        std::set<int> visited;
        int cur = v;
        while (cur != g.root) {
            CHECK(visited.insert(cur).second);
            cur = g.parent[cur];
            REQUIRE(cur >= 0);
        }
    }
    // Exactly one parent per non-root node.
    int rootless = 0;
    for (int v = 0; v < g.node_count; ++v)
        if (g.parent[v] == -1) ++rootless;
    CHECK(rootless == 1);
}

TEST_CASE("normalized adjacency matches the direct computation") {
    const SkeletonGraph g = build_ntu_graph();
    const int n = g.node_count;

    // Rebuild D^-1/2 (A+I) D^-1/2 from the edge list.
    std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
    for (int v = 0; v < n; ++v) a[v][v] = 1.0;
    for (auto [child, parent] : g.edges) {
        a[child][parent] = 1.0;
        a[parent][child] = 1.0;
    }
    std::vector<double> deg(n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) deg[i] += a[i][j];

    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double expected = a[i][j] / std::sqrt(deg[i] * deg[j]);
            CHECK(g.adj(i, j) == doctest::Approx(expected).epsilon(1e-14));
        }
}

TEST_CASE("adjacency is symmetric with finite row sums") {
    const SkeletonGraph g = build_ntu_graph();
    for (int i = 0; i < g.node_count; ++i) {
        double row_sum = 0.0;
        for (int j = 0; j < g.node_count; ++j) {
            CHECK(g.adj(i, j) == g.adj(j, i));
            row_sum += g.adj(i, j);
        }
        CHECK(std::isfinite(row_sum));
        CHECK(row_sum > 0.0);
    }
}

TEST_CASE("build_graph rejects malformed edge sets") {
    using E = std::vector<std::pair<int, int>>;
    const E two_parents = {{1, 0}, {1, 2}};
    CHECK_THROWS_AS(build_graph(3, two_parents, 0), ConfigError);
    const E cycle = {{1, 2}, {2, 1}};
    CHECK_THROWS_AS(build_graph(3, cycle, 0), ConfigError);
    const E wrong_count = {{1, 0}};
    CHECK_THROWS_AS(build_graph(3, wrong_count, 0), ConfigError);
    const E root_child = {{0, 1}, {2, 0}};
    CHECK_THROWS_AS(build_graph(3, root_child, 0), ConfigError);
}

TEST_CASE("build_graph accepts a chain") {
    const std::vector<std::pair<int, int>> chain = {{1, 0}, {2, 1}};
    const SkeletonGraph g = build_graph(3, chain, 0);
    CHECK(g.parent[0] == -1);
    CHECK(g.parent[1] == 0);
    CHECK(g.parent[2] == 1);
}
