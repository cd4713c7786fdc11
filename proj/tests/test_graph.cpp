#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "epimit/graph.hpp"
#include "support.hpp"

using namespace epimit;

namespace {

Graph triangle()
{
    Graph g(3, false);
    g.add_edge(0, 1);
    g.add_edge(1, 2);
    g.add_edge(0, 2);
    return g;
}

std::string temp_path(const char* name)
{
    return (std::filesystem::temp_directory_path() / name).string();
}

} // namespace

TEST_SUITE("graph")
{
    TEST_CASE("construction rejects self-loops and duplicates")
    {
        Graph g(3, false);
        g.add_edge(0, 1);
        CHECK_THROWS_AS(g.add_edge(1, 1), std::invalid_argument);
        CHECK_THROWS_AS(g.add_edge(1, 0), std::invalid_argument); // same unordered pair
        Graph d(3, true);
        d.add_edge(0, 1);
        CHECK_NOTHROW(d.add_edge(1, 0)); // distinct directed edges
        CHECK_THROWS_AS(d.add_edge(0, 1), std::invalid_argument);
    }

    TEST_CASE("gen_er endpoints")
    {
        CHECK(gen_er(5, 0.0, 7).edge_count() == 0);
        CHECK(gen_er(5, 1.0, 7).edge_count() == 10);
        CHECK_THROWS_AS(gen_er(0, 0.5, 7), std::invalid_argument);
        CHECK_THROWS_AS(gen_er(5, 1.5, 7), std::invalid_argument);
    }

    TEST_CASE("gen_er determinism and realized scale")
    {
        Graph a = gen_er(500, 0.0249, 42);
        Graph b = gen_er(500, 0.0249, 42);
        CHECK(a == b);
        CHECK(gen_er(500, 0.0249, 43).edge_count() != a.edge_count());

        // mean 3106.3, std 55.0: realized count within 4 standard deviations
        const double mean = 124750 * 0.0249;
        const double sd = std::sqrt(124750 * 0.0249 * (1 - 0.0249));
        CHECK(std::abs(a.edge_count() - mean) < 4 * sd);
    }

    TEST_CASE("gen_er edge-count distribution")
    {
        // 1000 draws at n=100, p=0.05: sample mean within 3 standard errors of 247.5
        const int draws = 1000;
        double total = 0;
        for (int i = 0; i < draws; ++i)
            total += gen_er(100, 0.05, derive_seed(99, i)).edge_count();
        const double mean = total / draws;
        const double se = std::sqrt(4950 * 0.05 * 0.95 / draws);
        CHECK(std::abs(mean - 247.5) < 3 * se);
    }

    TEST_CASE("gen_sbm shapes and validation")
    {
        std::vector<std::vector<double>> zero(3, std::vector<double>(3, 0.0));
        CHECK(gen_sbm(10, 3, zero, 5).edge_count() == 0);
        CHECK(gen_sbm(10, 3, zero, 5).vertex_count() == 30);

        std::vector<std::vector<double>> bad{{0.1, 0.2}, {0.3, 0.1}};
        CHECK_THROWS_AS(gen_sbm(5, 2, bad, 1), std::invalid_argument);
    }

    TEST_CASE("gen_sbm single block matches er moments")
    {
        // one block is an ER graph; compare edge-count mean and variance
        const int draws = 1000, n = 30;
        const double p = 0.2;
        std::vector<std::vector<double>> q{{p}};
        double s1 = 0, s2 = 0, e1 = 0, e2 = 0;
        for (int i = 0; i < draws; ++i) {
            double ms = gen_sbm(n, 1, q, derive_seed(7, i)).edge_count();
            double me = gen_er(n, p, derive_seed(13, i)).edge_count();
            s1 += ms;
            s2 += ms * ms;
            e1 += me;
            e2 += me * me;
        }
        const double pairs = n * (n - 1) / 2.0;
        const double want_mean = pairs * p;
        const double want_var = pairs * p * (1 - p);
        const double se_mean = std::sqrt(want_var / draws);
        CHECK(std::abs(s1 / draws - want_mean) < 3 * se_mean);
        CHECK(std::abs(e1 / draws - want_mean) < 3 * se_mean);
        double var_s = s2 / draws - (s1 / draws) * (s1 / draws);
        CHECK(std::abs(var_s - want_var) < 0.35 * want_var);
    }

    TEST_CASE("gen_sbm realized scale at the five-block setting")
    {
        std::vector<std::vector<double>> q(5, std::vector<double>(5, 0.0041));
        for (int i = 0; i < 5; ++i)
            q[i][i] = 0.023;
        Graph g = gen_sbm(100, 5, q, 11);
        CHECK(g.vertex_count() == 500);
        // expectation 5*C(100,2)*0.023 + 10*100^2*0.0041 = 979.25
        const double mean = 979.25;
        const double sd = 31.0; // close to sqrt(mean)
        CHECK(std::abs(g.edge_count() - mean) < 4 * sd);
    }

    TEST_CASE("analyze on canned shapes")
    {
        Graph path(3, false);
        path.add_edge(0, 1);
        path.add_edge(1, 2);
        auto pa = analyze(path);
        CHECK(pa.component_count() == 1);
        CHECK(pa.components[0].is_tree);
        CHECK(pa.bridges == std::vector<EdgeId>{0, 1});

        auto ta = analyze(triangle());
        CHECK(ta.component_count() == 1);
        CHECK_FALSE(ta.components[0].is_tree);
        CHECK(ta.bridges.empty());

        for (EdgeId e = 0; e < 3; ++e) {
            auto one = analyze(triangle(), EdgeSet::single(e));
            CHECK(one.component_count() == 1);
            CHECK(one.components[0].is_tree);
            CHECK(one.bridges.size() == 2);
        }
    }

    TEST_CASE("analyze matches brute force on random graphs")
    {
        Rng rng(2024);
        for (int trial = 0; trial < 1000; ++trial) {
            const int n = 2 + static_cast<int>(rng.next_below(6));
            Graph g = test::random_graph(rng, n, 0.45);
            std::vector<EdgeId> del;
            for (EdgeId e = 0; e < g.edge_count(); ++e)
                if (rng.bernoulli(0.2))
                    del.push_back(e);
            EdgeSet deleted(del);

            auto result = analyze(g, deleted);
            auto want_comp = test::oracle_components(g, deleted);
            // same partition up to relabeling
            for (VertexId u = 0; u < n; ++u)
                for (VertexId v = 0; v < n; ++v)
                    CHECK((result.component[u] == result.component[v]) ==
                          (want_comp[u] == want_comp[v]));
            CHECK(result.bridges == test::oracle_bridges(g, deleted));
            for (const auto& comp : result.components) {
                CHECK(comp.is_tree == (comp.edge_count == comp.size - 1));
                if (comp.is_tree) {
                    // every edge of a tree component is a bridge
                    for (VertexId v : comp.vertices)
                        for (auto [w, id] : g.incident(v))
                            if (!deleted.contains(id))
                                CHECK(result.is_bridge[id]);
                }
            }
        }
    }

    TEST_CASE("delete_edges keeps ids")
    {
        Graph cycle(5, false);
        for (int i = 0; i < 5; ++i)
            cycle.add_edge(i, (i + 1) % 5);
        Graph same = delete_edges(cycle, {});
        CHECK(same == cycle);

        Graph path = delete_edges(cycle, EdgeSet::single(0));
        CHECK(path.edge_count() == 4);
        auto pa = analyze(path);
        CHECK(pa.component_count() == 1);
        CHECK(pa.components[0].is_tree);
        CHECK(path.edge_ids() == std::vector<EdgeId>{1, 2, 3, 4});
        CHECK(path.edge(3).u == 3);

        Graph empty = delete_edges(triangle(), EdgeSet({0, 1, 2}));
        CHECK(empty.edge_count() == 0);
        CHECK_THROWS_AS(delete_edges(triangle(), EdgeSet::single(9)), std::invalid_argument);
    }

    TEST_CASE("perturb_adversarial")
    {
        Graph g(10, false);
        CHECK(perturb_adversarial(g, 0, 3, 1) == g);

        Graph one = perturb_adversarial(g, 1, 3, 1);
        CHECK(one.edge_count() == 3);
        int deg3 = 0;
        for (VertexId v = 0; v < 10; ++v) {
            if (one.degree(v) == 3)
                ++deg3;
            else
                CHECK(one.degree(v) <= 1);
        }
        CHECK(deg3 == 1);

        CHECK_THROWS_AS(perturb_adversarial(gen_er(4, 1.0, 3), 1, 1, 5), std::invalid_argument);
    }

    TEST_CASE("edge list round trip")
    {
        const std::string path = temp_path("epimit_edges_test.txt");
        {
            std::ofstream out(path);
            out << "0 1\n1 2\n";
        }
        EdgeListData data = load_edge_list(path);
        CHECK(data.graph.vertex_count() == 3);
        CHECK(data.graph.edge_count() == 2);
        CHECK(data.weights.empty());

        Graph er = gen_er(40, 0.1, 17);
        save_edge_list(er, path);
        EdgeListData back = load_edge_list(path);
        CHECK(back.graph == er);
        std::remove(path.c_str());
    }

    TEST_CASE("edge list weights and errors")
    {
        const std::string path = temp_path("epimit_edges_bad.txt");
        {
            std::ofstream out(path);
            out << "0 x\n";
        }
        CHECK_THROWS_WITH_AS(load_edge_list(path), doctest::Contains("line 1"),
                             std::runtime_error);
        {
            std::ofstream out(path);
            out << "# weighted instance\n0 1 0.25\n1 2 0.5\n";
        }
        EdgeListData data = load_edge_list(path);
        CHECK(data.weights == std::vector<double>{0.25, 0.5});

        save_edge_list(data.graph, path, data.weights);
        EdgeListData again = load_edge_list(path);
        CHECK(again.graph == data.graph);
        CHECK(again.weights == data.weights);
        std::remove(path.c_str());
    }

    TEST_CASE("degree cap preprocess")
    {
        Graph star(6, false);
        for (int leaf = 1; leaf <= 5; ++leaf)
            star.add_edge(0, leaf);
        auto capped = degree_cap_preprocess(star, 2);
        CHECK(capped.removed.size() == 3);
        CHECK(capped.graph.degree(0) == 2);

        Graph cycle(5, false);
        for (int i = 0; i < 5; ++i)
            cycle.add_edge(i, (i + 1) % 5);
        auto untouched = degree_cap_preprocess(cycle, 2);
        CHECK(untouched.graph == cycle);
        CHECK(untouched.removed.empty());

        Graph er = gen_er(60, 0.12, 3);
        auto result = degree_cap_preprocess(er, 4);
        for (VertexId v = 0; v < 60; ++v)
            CHECK(result.graph.degree(v) <= 4);
        CHECK(result.graph.edge_count() + static_cast<int>(result.removed.size()) ==
              er.edge_count());
        for (EdgeId e : result.removed)
            CHECK(er.has_edge_id(e));
    }

    TEST_CASE("degree cap on a real contact network when supplied")
    {
        // optional: point EPIMIT_CONTACT_EDGELIST at the 1262-edge contact
        // network to reproduce the 877-edge preprocessing result
        const char* path = std::getenv("EPIMIT_CONTACT_EDGELIST");
        if (path == nullptr)
            return;
        EdgeListData data = load_edge_list(path);
        REQUIRE(data.graph.edge_count() == 1262);
        auto capped = degree_cap_preprocess(data.graph, 8);
        CHECK(capped.graph.edge_count() == 877);
    }

    TEST_CASE("hardness instance shapes")
    {
        Graph k4 = gen_er(4, 1.0, 1); // K4 is 3-regular
        HardnessInstance inst = build_hardness_instance(k4, 2);
        CHECK(inst.graph.vertex_count() == 7);
        CHECK(inst.graph.edge_count() == 18);
        CHECK(inst.budget == 8);
        CHECK(inst.threshold == 5);
        CHECK(inst.candidates.size() == 18);
        // every leaf of each star is an original vertex
        for (VertexId center : inst.seeds)
            for (auto [leaf, id] : inst.graph.incident(center))
                CHECK(leaf < 4);

        Graph odd(3, false);
        CHECK_THROWS_AS(build_hardness_instance(odd, 1), std::invalid_argument);
        Graph square(4, false);
        for (int i = 0; i < 4; ++i)
            square.add_edge(i, (i + 1) % 4);
        CHECK_THROWS_AS(build_hardness_instance(square, 1), std::invalid_argument);
    }

    TEST_CASE("hardness completeness on the prism")
    {
        // two triangles {0,1,2}, {3,4,5} joined by rungs; bisection size 3
        Graph prism(6, false);
        prism.add_edge(0, 1);
        prism.add_edge(1, 2);
        prism.add_edge(0, 2);
        prism.add_edge(3, 4);
        prism.add_edge(4, 5);
        prism.add_edge(3, 5);
        EdgeId rung0 = prism.add_edge(0, 3);
        EdgeId rung1 = prism.add_edge(1, 4);
        EdgeId rung2 = prism.add_edge(2, 5);

        HardnessInstance inst = build_hardness_instance(prism, 3);
        CHECK(inst.budget == 12);
        CHECK(inst.threshold == 6);

        // delete the cut {rungs} plus every star edge into S = {0,1,2}
        std::vector<EdgeId> cut{rung0, rung1, rung2};
        for (VertexId center : inst.seeds)
            for (auto [leaf, id] : inst.graph.incident(center))
                if (leaf <= 2)
                    cut.push_back(id);
        EdgeSet deletion(cut);
        CHECK(static_cast<int>(deletion.size()) == inst.budget);
        CHECK(count_reachable(inst.graph, deletion, inst.seeds) == inst.threshold);
    }
}
