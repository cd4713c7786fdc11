#ifndef EPIMIT_TESTS_SUPPORT_HPP
#define EPIMIT_TESTS_SUPPORT_HPP

#include <algorithm>
#include <cmath>
#include <vector>

#include "epimit/dsir.hpp"
#include "epimit/graph.hpp"
#include "epimit/icsir.hpp"
#include "epimit/rng.hpp"

namespace epimit::test {

// ---- brute-force structural oracles (independent of analyze()) ----

inline int oracle_component_count(const Graph& g, const EdgeSet& deleted)
{
    const int n = g.vertex_count();
    std::vector<int> comp(n, -1);
    int count = 0;
    for (VertexId root = 0; root < n; ++root) {
        if (comp[root] != -1)
            continue;
        std::vector<VertexId> queue{root};
        comp[root] = count;
        for (std::size_t h = 0; h < queue.size(); ++h)
            for (auto [w, id] : g.incident(queue[h]))
                if (!deleted.contains(id) && comp[w] == -1) {
                    comp[w] = count;
                    queue.push_back(w);
                }
        ++count;
    }
    return count;
}

inline std::vector<int> oracle_components(const Graph& g, const EdgeSet& deleted)
{
    const int n = g.vertex_count();
    std::vector<int> comp(n, -1);
    int count = 0;
    for (VertexId root = 0; root < n; ++root) {
        if (comp[root] != -1)
            continue;
        std::vector<VertexId> queue{root};
        comp[root] = count;
        for (std::size_t h = 0; h < queue.size(); ++h)
            for (auto [w, id] : g.incident(queue[h]))
                if (!deleted.contains(id) && comp[w] == -1) {
                    comp[w] = count;
                    queue.push_back(w);
                }
        ++count;
    }
    return comp;
}

// bridge = edge whose removal increases the component count
inline std::vector<EdgeId> oracle_bridges(const Graph& g, const EdgeSet& deleted)
{
    std::vector<EdgeId> bridges;
    const int base = oracle_component_count(g, deleted);
    for (EdgeId id : g.edge_ids()) {
        if (deleted.contains(id))
            continue;
        EdgeSet plus = deleted.with(id);
        if (oracle_component_count(g, plus) > base)
            bridges.push_back(id);
    }
    return bridges;
}

// ---- random small instances ----

inline Graph random_graph(Rng& rng, int n, double p)
{
    Graph g(n, false);
    for (VertexId u = 0; u < n; ++u)
        for (VertexId v = u + 1; v < n; ++v)
            if (rng.bernoulli(p))
                g.add_edge(u, v);
    return g;
}

struct StableDsir {
    DsirSystem sys;
    EdgeSet candidates;
};

// Random directed system satisfying the row-sum stability condition with a
// definite positive margin.
inline StableDsir random_stable_dsir(std::uint64_t seed, int max_n = 8, int max_q = 6,
                                     double margin = 0.05)
{
    Rng rng(derive_seed(seed, "stable-dsir"));
    const int n = static_cast<int>(rng.uniform_int(2, max_n));
    Graph g(n, true);
    for (VertexId u = 0; u < n; ++u)
        for (VertexId v = 0; v < n; ++v) {
            if (u == v)
                continue;
            if (rng.bernoulli(std::min(1.0, 2.5 / n)))
                g.add_edge(u, v);
        }
    if (g.edge_count() == 0)
        g.add_edge(0, 1);

    std::vector<double> x0(n, 0.0), r0(n, 0.0), heal(n);
    const int seeds = static_cast<int>(rng.uniform_int(1, std::max(1, n / 3)));
    for (int s = 0; s < seeds; ++s)
        x0[rng.uniform_int(0, n - 1)] = rng.uniform(0.2, 0.8);
    for (int i = 0; i < n; ++i) {
        r0[i] = rng.uniform(0.0, 0.08);
        heal[i] = rng.uniform(0.4, 0.8);
    }

    // distribute a per-vertex in-rate budget below (D_i - margin)/(1-x0-r0)
    std::vector<double> raw(g.edge_count());
    std::vector<double> in_sum(n, 0.0);
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
        raw[e] = rng.uniform(0.2, 1.0);
        in_sum[g.edge(e).v] += raw[e];
    }
    std::vector<double> rate(g.edge_count(), 0.0);
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
        const VertexId i = g.edge(e).v;
        double budget = (heal[i] - margin) / (1.0 - x0[i] - r0[i]);
        budget = std::min(budget, 0.95) * rng.uniform(0.4, 0.95);
        rate[e] = raw[e] / in_sum[i] * budget;
    }

    std::vector<EdgeId> ids(g.edge_count());
    for (EdgeId e = 0; e < g.edge_count(); ++e)
        ids[e] = e;
    for (std::size_t i = 0; i + 1 < ids.size(); ++i)
        std::swap(ids[i], ids[i + rng.next_below(ids.size() - i)]);
    ids.resize(std::min<std::size_t>(ids.size(), max_q));

    StableDsir out{make_dsir_system(std::move(g), std::move(rate), std::move(heal), std::move(x0),
                                    std::move(r0)),
                   EdgeSet(std::move(ids))};
    return out;
}

// Random sparse IC instance small enough for the exact oracle.
inline IcInstance random_small_ic(std::uint64_t seed, int max_n = 10, int max_edges = 14)
{
    Rng rng(derive_seed(seed, "small-ic"));
    for (;;) {
        const int n = static_cast<int>(rng.uniform_int(4, max_n));
        Graph g = random_graph(rng, n, 2.2 / n);
        if (g.edge_count() == 0 || g.edge_count() > max_edges)
            continue;
        std::vector<double> p(g.edge_count());
        for (double& v : p)
            v = rng.uniform(0.2, 0.8);
        std::vector<VertexId> seeds{static_cast<VertexId>(rng.uniform_int(0, n - 1))};
        std::vector<EdgeId> q;
        for (EdgeId e = 0; e < g.edge_count(); ++e)
            q.push_back(e);
        return make_ic_instance(std::move(g), std::move(p), std::move(seeds),
                                EdgeSet(std::move(q)));
    }
}

} // namespace epimit::test

#endif
