#include "epimit/gsir.hpp"

#include <algorithm>
#include <stdexcept>

#include "epimit/parallel.hpp"
#include "epimit/stats.hpp"

namespace epimit {

namespace {

void validate_common(const Graph& g, const std::vector<double>& infect_mean,
                     const std::vector<double>& heal_mean)
{
    if (!g.directed())
        throw std::invalid_argument("gsir: graph must be directed");
    if (g.edge_count() != g.edge_id_bound())
        throw std::invalid_argument("gsir: graph must have dense edge ids");
    if (static_cast<int>(infect_mean.size()) != g.edge_count())
        throw std::invalid_argument("gsir: infection mean count must match edge count");
    if (static_cast<int>(heal_mean.size()) != g.vertex_count())
        throw std::invalid_argument("gsir: healing mean count must match vertex count");
    for (double b : infect_mean)
        if (!(b >= 0.0) || b > 1.0)
            throw std::invalid_argument("gsir: infection means must be in [0,1]");
    for (double d : heal_mean)
        if (!(d >= 0.0) || d > 1.0)
            throw std::invalid_argument("gsir: healing means must be in [0,1]");
}

} // namespace

GsirParams make_gsir_params(Graph g, std::vector<double> infect_mean,
                            std::vector<double> heal_mean, std::vector<VertexId> init_infected,
                            std::vector<VertexId> init_removed)
{
    validate_common(g, infect_mean, heal_mean);
    std::sort(init_infected.begin(), init_infected.end());
    std::sort(init_removed.begin(), init_removed.end());
    for (VertexId v : init_infected)
        if (v < 0 || v >= g.vertex_count())
            throw std::invalid_argument("gsir: initial infected vertex out of range");
    for (VertexId v : init_removed) {
        if (v < 0 || v >= g.vertex_count())
            throw std::invalid_argument("gsir: initial removed vertex out of range");
        if (std::binary_search(init_infected.begin(), init_infected.end(), v))
            throw std::invalid_argument("gsir: initial infected and removed sets must be disjoint");
    }
    GsirParams p;
    p.g = std::move(g);
    p.infect_mean = std::move(infect_mean);
    p.heal_mean = std::move(heal_mean);
    p.init_infected = std::move(init_infected);
    p.init_removed = std::move(init_removed);
    return p;
}

GsirParams make_gsir_params_bernoulli(Graph g, std::vector<double> infect_mean,
                                      std::vector<double> heal_mean, std::vector<double> x0,
                                      std::vector<double> r0)
{
    validate_common(g, infect_mean, heal_mean);
    const int n = g.vertex_count();
    if (static_cast<int>(x0.size()) != n || static_cast<int>(r0.size()) != n)
        throw std::invalid_argument("gsir: x0/r0 sizes must match vertex count");
    for (int i = 0; i < n; ++i)
        if (x0[i] < 0.0 || r0[i] < 0.0 || x0[i] + r0[i] > 1.0)
            throw std::invalid_argument("gsir: initial means must satisfy x0,r0 >= 0, x0+r0 <= 1");
    GsirParams p;
    p.g = std::move(g);
    p.infect_mean = std::move(infect_mean);
    p.heal_mean = std::move(heal_mean);
    p.bernoulli_init = true;
    p.x0 = std::move(x0);
    p.r0 = std::move(r0);
    return p;
}

long simulate_once(const GsirParams& params, const EdgeSet& deleted, Rng& rng)
{
    const int n = params.g.vertex_count();
    enum : char { S = 0, I = 1, R = 2 };
    std::vector<char> state(n, S);

    if (params.bernoulli_init) {
        // one uniform draw decides between I (prob x0), R (prob r0) and S
        for (int v = 0; v < n; ++v) {
            double u = rng.next_double();
            if (u < params.x0[v])
                state[v] = I;
            else if (u < params.x0[v] + params.r0[v])
                state[v] = R;
        }
    } else {
        for (VertexId v : params.init_infected)
            state[v] = I;
        for (VertexId v : params.init_removed)
            state[v] = R;
    }

    long initial_touched = 0;
    std::vector<VertexId> infected;
    for (int v = 0; v < n; ++v)
        if (state[v] != S) {
            ++initial_touched;
            if (state[v] == I)
                infected.push_back(v);
        }

    const auto edges = params.g.edges();
    std::vector<VertexId> newly;
    for (long t = 0; t < params.step_cap && !infected.empty(); ++t) {
        newly.clear();
        // fresh infection indicators for every (infected source, susceptible
        // target) pair, then fresh recovery indicators
        for (VertexId j : infected) {
            for (auto [w, id] : params.g.incident(j)) {
                const Edge& e = edges[id];
                if (e.u != j)
                    continue; // only outgoing direction transmits
                if (state[w] != S || deleted.contains(id))
                    continue;
                if (rng.bernoulli(params.infect_mean[id])) {
                    state[w] = I; // marks target; still counts as newly infected this step
                    newly.push_back(w);
                }
            }
        }
        std::vector<VertexId> still;
        for (VertexId j : infected)
            if (rng.bernoulli(params.heal_mean[j]))
                state[j] = R;
            else
                still.push_back(j);
        still.insert(still.end(), newly.begin(), newly.end());
        infected.swap(still);
    }

    long final_touched = 0;
    for (int v = 0; v < n; ++v)
        if (state[v] != S)
            ++final_touched;
    return final_touched - initial_touched;
}

GsirEstimate estimate_infections(const GsirParams& params, const EdgeSet& deleted, long reps,
                                 std::uint64_t seed)
{
    if (reps < 1)
        throw std::invalid_argument("estimate_infections: reps must be positive");
    for (EdgeId e : deleted)
        if (!params.g.has_edge_id(e))
            throw std::invalid_argument("estimate_infections: unknown edge id in deletion set");
    std::vector<long> counts(reps, 0);
    parallel_for(0, reps, [&](long r) {
        Rng rng(derive_seed(seed, "gsir-rep", static_cast<std::uint64_t>(r)));
        counts[r] = simulate_once(params, deleted, rng);
    });
    long total = 0;
    for (long c : counts)
        total += c;
    GsirEstimate est;
    est.reps = reps;
    est.mean = static_cast<double>(total) / static_cast<double>(reps);
    est.half_width = hoeffding_half_width(reps, params.g.vertex_count());
    return est;
}

} // namespace epimit
