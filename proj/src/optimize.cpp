#include "epimit/optimize.hpp"

#include <algorithm>
#include <stdexcept>

namespace epimit {

EdgeSet GreedyTrace::chosen_set(int k) const
{
    if (k < 0 || k > static_cast<int>(chosen.size()))
        k = static_cast<int>(chosen.size());
    return EdgeSet(std::vector<EdgeId>(chosen.begin(), chosen.begin() + k));
}

GreedyTrace greedy(const SetFunction& f, const EdgeSet& candidates, int k)
{
    if (k < 0 || k > static_cast<int>(candidates.size()))
        throw std::invalid_argument("greedy: k out of range");
    GreedyTrace trace;
    trace.objective_name = "oracle";
    EdgeSet chosen;
    double current = f(chosen);
    ++trace.oracle_calls;
    trace.objective_values.push_back(current);

    for (int round = 0; round < k; ++round) {
        EdgeId best_edge = -1;
        double best_value = 0.0;
        for (EdgeId e : candidates) {
            if (chosen.contains(e))
                continue;
            double value = f(chosen.with(e));
            ++trace.oracle_calls;
            if (best_edge == -1 || value < best_value) { // strict < keeps lowest id on ties
                best_edge = e;
                best_value = value;
            }
        }
        chosen.insert(best_edge);
        trace.chosen.push_back(best_edge);
        trace.gains.push_back(current - best_value);
        trace.objective_values.push_back(best_value);
        current = best_value;
    }
    return trace;
}

GreedyTrace max_degree_baseline(const Graph& g, const EdgeSet& candidates, int k)
{
    if (k < 0 || k > static_cast<int>(candidates.size()))
        throw std::invalid_argument("max_degree_baseline: k out of range");
    for (EdgeId e : candidates)
        if (!g.has_edge_id(e))
            throw std::invalid_argument("max_degree_baseline: unknown candidate edge id");

    GreedyTrace trace;
    trace.objective_name = "max-degree";
    const int n = g.vertex_count();
    std::vector<int> deg(n, 0);
    for (VertexId v = 0; v < n; ++v)
        deg[v] = g.degree(v);

    EdgeSet removed;
    for (int round = 0; round < k; ++round) {
        VertexId top = -1;
        for (VertexId v = 0; v < n; ++v)
            if (top == -1 || deg[v] > deg[top])
                top = v;

        EdgeId pick = -1;
        for (auto [w, id] : g.incident(top))
            if (!removed.contains(id) && candidates.contains(id) && (pick == -1 || id < pick))
                pick = id;
        if (pick == -1) {
            // no candidate at the max-degree vertex: fall back to the candidate
            // edge with the highest-degree endpoint
            int best_deg = -1;
            for (EdgeId id : candidates) {
                if (removed.contains(id))
                    continue;
                const Edge& e = g.edge(id);
                int d = std::max(deg[e.u], deg[e.v]);
                if (d > best_deg) {
                    best_deg = d;
                    pick = id;
                }
            }
        }
        const Edge& e = g.edge(pick);
        removed.insert(pick);
        --deg[e.u];
        --deg[e.v];
        trace.chosen.push_back(pick);
    }
    return trace;
}

GreedyTrace random_baseline(const EdgeSet& candidates, int k, std::uint64_t seed)
{
    if (k < 0 || k > static_cast<int>(candidates.size()))
        throw std::invalid_argument("random_baseline: k out of range");
    GreedyTrace trace;
    trace.objective_name = "random";
    trace.seed = seed;
    std::vector<EdgeId> pool(candidates.ids());
    Rng rng(derive_seed(seed, "random-baseline"));
    for (std::size_t i = 0; i + 1 < pool.size(); ++i)
        std::swap(pool[i], pool[i + rng.next_below(pool.size() - i)]);
    trace.chosen.assign(pool.begin(), pool.begin() + k);
    return trace;
}

namespace {

// next size-k combination of indices in lexicographic order
bool next_combination(std::vector<int>& idx, int m)
{
    const int k = static_cast<int>(idx.size());
    for (int i = k - 1; i >= 0; --i) {
        if (idx[i] < m - (k - i)) {
            ++idx[i];
            for (int j = i + 1; j < k; ++j)
                idx[j] = idx[j - 1] + 1;
            return true;
        }
    }
    return false;
}

} // namespace

BruteForceResult brute_force_opt(const SetFunction& f, const EdgeSet& candidates, int k,
                                 long max_subsets)
{
    const int m = static_cast<int>(candidates.size());
    if (k < 0 || k > m)
        throw std::invalid_argument("brute_force_opt: k out of range");
    double combos = 1.0;
    for (int i = 0; i < k; ++i)
        combos = combos * (m - i) / (i + 1);
    if (combos > static_cast<double>(max_subsets))
        throw std::invalid_argument("brute_force_opt: too many subsets");

    const auto& ids = candidates.ids();
    BruteForceResult result;
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i)
        idx[i] = i;
    bool first = true;
    do {
        std::vector<EdgeId> subset(k);
        for (int i = 0; i < k; ++i)
            subset[i] = ids[idx[i]];
        EdgeSet p{std::move(subset)};
        double value = f(p);
        ++result.subsets_checked;
        if (first || value < result.value) { // strict < keeps the lexicographically first
            result.best = std::move(p);
            result.value = value;
            first = false;
        }
    } while (k > 0 && next_combination(idx, m));
    return result;
}

SupermodularityReport check_supermodular(const SetFunction& f, const EdgeSet& candidates,
                                         double tol)
{
    const int q = static_cast<int>(candidates.size());
    if (q > 12)
        throw std::invalid_argument("check_supermodular: candidate set too large");
    const auto& ids = candidates.ids();

    // memoize f over the subset lattice
    std::vector<double> value(std::size_t(1) << q);
    std::vector<EdgeId> scratch;
    for (std::uint32_t mask = 0; mask < value.size(); ++mask) {
        scratch.clear();
        for (int i = 0; i < q; ++i)
            if (mask & (1u << i))
                scratch.push_back(ids[i]);
        value[mask] = f(EdgeSet(scratch));
    }

    auto make_set = [&](std::uint32_t mask) {
        std::vector<EdgeId> v;
        for (int i = 0; i < q; ++i)
            if (mask & (1u << i))
                v.push_back(ids[i]);
        return EdgeSet(std::move(v));
    };

    SupermodularityReport report;
    const std::uint32_t full = (q == 32) ? 0xffffffffu : ((1u << q) - 1);
    for (std::uint32_t p2 = 0; p2 <= full; ++p2) {
        // iterate subsets p1 of p2
        std::uint32_t p1 = p2;
        for (;;) {
            if (p1 != p2 && value[p1] < value[p2] - tol && report.monotone) {
                report.monotone = false;
                if (!report.counterexample)
                    report.counterexample = {make_set(p1), make_set(p2), -1,
                                             value[p2] - value[p1]};
            }
            for (int i = 0; i < q; ++i) {
                const std::uint32_t bit = 1u << i;
                if (p2 & bit)
                    continue;
                const double gain1 = value[p1] - value[p1 | bit];
                const double gain2 = value[p2] - value[p2 | bit];
                if (gain1 < gain2 - tol) {
                    report.supermodular = false;
                    if (!report.counterexample)
                        report.counterexample = {make_set(p1), make_set(p2), ids[i],
                                                 gain2 - gain1};
                }
            }
            if (p1 == 0)
                break;
            p1 = (p1 - 1) & p2;
        }
        if (p2 == full)
            break;
    }
    return report;
}

} // namespace epimit
