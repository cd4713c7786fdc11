#include "epimit/icsir.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "epimit/parallel.hpp"
#include "epimit/stats.hpp"

namespace epimit {

IcInstance make_ic_instance(Graph g, std::vector<double> p, std::vector<VertexId> seeds,
                            EdgeSet candidates)
{
    if (g.directed())
        throw std::invalid_argument("ic: contact graph must be undirected");
    if (g.edge_count() != g.edge_id_bound())
        throw std::invalid_argument("ic: contact graph must have dense edge ids");
    if (static_cast<int>(p.size()) != g.edge_count())
        throw std::invalid_argument("ic: activation probability count must match edge count");
    for (double v : p)
        if (!(v >= 0.0) || v > 1.0)
            throw std::invalid_argument("ic: activation probabilities must be in [0,1]");
    if (seeds.empty())
        throw std::invalid_argument("ic: seed set must be non-empty");
    std::sort(seeds.begin(), seeds.end());
    if (std::adjacent_find(seeds.begin(), seeds.end()) != seeds.end())
        throw std::invalid_argument("ic: duplicate seed");
    for (VertexId s : seeds)
        if (s < 0 || s >= g.vertex_count())
            throw std::invalid_argument("ic: seed out of range");
    for (EdgeId e : candidates)
        if (!g.has_edge_id(e))
            throw std::invalid_argument("ic: candidate edge id out of range");
    return {std::move(g), std::move(p), std::move(seeds), std::move(candidates)};
}

long EstimatorConfig::resolved_rounds(int n) const
{
    if (rounds > 0)
        return rounds;
    if (!(epsilon > 0.0))
        throw std::invalid_argument("estimator: epsilon must be positive");
    double r = std::ceil(3.0 / (epsilon * epsilon) * n * std::log(std::max(n, 2)));
    return std::max<long>(1, static_cast<long>(r));
}

double rates_to_activation(double infection_rate, double healing_rate)
{
    if (infection_rate < 0.0 || infection_rate > 1.0 || healing_rate < 0.0 || healing_rate > 1.0)
        throw std::invalid_argument("rates_to_activation: rates must be in [0,1]");
    double denom = 1.0 - (1.0 - healing_rate) * (1.0 - infection_rate);
    if (denom <= 0.0)
        throw std::invalid_argument("rates_to_activation: zero denominator (B = D = 0)");
    return infection_rate / denom;
}

long compute_L(double d_end, long n)
{
    if (!(d_end >= 0.0) || d_end >= 1.0)
        throw std::invalid_argument("compute_L: requires 0 <= d_end < 1");
    if (n < 2)
        throw std::invalid_argument("compute_L: n too small");
    double inv = 1.0 - d_end;
    return static_cast<long>(std::ceil(9.0 / (inv * inv) * std::log(static_cast<double>(n))));
}

long compute_L_star(double d_end, long n, long kappa)
{
    if (kappa < 1)
        throw std::invalid_argument("compute_L_star: kappa must be positive");
    return compute_L(d_end, n * kappa);
}

long compute_m_bin(double d_init, double d_end)
{
    if (!(d_init >= 0.0) || d_init >= 1.0 || !(d_end >= 0.0) || d_end >= 1.0)
        throw std::invalid_argument("compute_m_bin: requires degrees in [0,1)");
    double ratio = (1.0 - d_init) / (1.0 - d_end);
    return 4 * static_cast<long>(std::ceil(ratio * ratio));
}

double max_expected_degree(const IcInstance& inst)
{
    double best = 0.0;
    for (VertexId v = 0; v < inst.g.vertex_count(); ++v) {
        double sum = 0.0;
        for (auto [w, id] : inst.g.incident(v))
            sum += inst.p[id];
        best = std::max(best, sum);
    }
    return best;
}

std::vector<VertexId> cascade(const IcInstance& inst, const EdgeSet& deleted, Rng& rng)
{
    std::vector<EdgeId> off; // deleted plus non-activated edges
    for (EdgeId id = 0; id < inst.g.edge_count(); ++id) {
        if (deleted.contains(id) || !rng.bernoulli(inst.p[id]))
            off.push_back(id);
    }
    auto seen = reachable_from(inst.g, EdgeSet(std::move(off)), inst.seeds);
    std::vector<char> is_seed(inst.g.vertex_count(), 0);
    for (VertexId s : inst.seeds)
        is_seed[s] = 1;
    std::vector<VertexId> infected;
    for (VertexId v = 0; v < inst.g.vertex_count(); ++v)
        if (seen[v] && !is_seed[v])
            infected.push_back(v);
    return infected;
}

ContagionSample sample_contagion(const IcInstance& inst, const EdgeSet& deleted, Rng& rng)
{
    std::vector<EdgeId> on, off;
    for (EdgeId id = 0; id < inst.g.edge_count(); ++id) {
        if (!deleted.contains(id) && rng.bernoulli(inst.p[id]))
            on.push_back(id);
        else
            off.push_back(id);
    }
    ContagionSample sample;
    sample.activated = EdgeSet(std::move(on));
    sample.terminal = static_cast<VertexId>(rng.next_below(inst.g.vertex_count()));
    sample.analysis = analyze(inst.g, EdgeSet(std::move(off)));
    return sample;
}

namespace {

// Scratch state reused across sample evaluations. Generation stamps avoid
// per-use clearing of the vertex arrays.
struct EvalScratch {
    std::vector<int> head;
    std::vector<int> next_entry;
    std::vector<VertexId> entry_to;
    std::vector<EdgeId> entry_eid;
    std::vector<int> mark, visited, disc, low, sub_seeds;
    std::vector<EdgeId> parent_edge;
    std::vector<int> cursor;
    std::vector<VertexId> stack;
    std::vector<std::pair<EdgeId, int>> bridge_buf;
    int generation = 0; // monotone; stamps in mark/visited stay valid across grows

    void ensure(int n)
    {
        if (static_cast<int>(head.size()) < n) {
            head.resize(n, -1);
            mark.resize(n, 0);
            visited.resize(n, 0);
            disc.resize(n, 0);
            low.resize(n, 0);
            sub_seeds.resize(n, 0);
            parent_edge.resize(n, -1);
            cursor.resize(n, -1);
        }
    }
};

struct TerminalEval {
    bool success = false;
    int comp_size = 0;
    int comp_edges = 0;
    int comp_seeds = 0;
};

// DFS from the terminal over the activated-minus-deleted subgraph. Computes
// reachability of a seed, size/edge/seed counts of the terminal's component
// and optionally the critical candidate edges: bridges whose removal cuts the
// terminal off from every seed of its component.
TerminalEval evaluate_terminal(EvalScratch& scr, const IcInstance& inst,
                               std::span<const EdgeId> activated,
                               const std::vector<char>& deleted_mask, VertexId terminal,
                               const std::vector<char>& is_seed, IcObjective objective,
                               const std::vector<char>& is_candidate,
                               std::vector<EdgeId>* critical_out)
{
    TerminalEval eval;
    if (critical_out)
        critical_out->clear();
    if (is_seed[terminal])
        return eval; // a terminal that is a seed is never a new infection

    const int n = inst.g.vertex_count();
    scr.ensure(n);
    const int gen = ++scr.generation;

    // adjacency of the surviving activated edges, touched vertices only
    scr.next_entry.clear();
    scr.entry_to.clear();
    scr.entry_eid.clear();
    auto touch = [&](VertexId v) {
        if (scr.mark[v] != gen) {
            scr.mark[v] = gen;
            scr.head[v] = -1;
        }
    };
    auto add_arc = [&](VertexId from, VertexId to, EdgeId id) {
        scr.next_entry.push_back(scr.head[from]);
        scr.entry_to.push_back(to);
        scr.entry_eid.push_back(id);
        scr.head[from] = static_cast<int>(scr.next_entry.size()) - 1;
    };
    for (EdgeId id : activated) {
        if (deleted_mask[id])
            continue;
        const Edge& e = inst.g.edge(id);
        touch(e.u);
        touch(e.v);
        add_arc(e.u, e.v, id);
        add_arc(e.v, e.u, id);
    }
    touch(terminal);

    scr.stack.clear();
    scr.bridge_buf.clear();
    int time = 0;
    int half_edges = 0;

    scr.stack.push_back(terminal);
    scr.visited[terminal] = gen;
    scr.disc[terminal] = scr.low[terminal] = time++;
    scr.sub_seeds[terminal] = 0;
    scr.parent_edge[terminal] = -1;
    scr.cursor[terminal] = scr.head[terminal];
    ++eval.comp_size;

    while (!scr.stack.empty()) {
        VertexId v = scr.stack.back();
        int entry = scr.cursor[v];
        if (entry != -1) {
            scr.cursor[v] = scr.next_entry[entry];
            VertexId w = scr.entry_to[entry];
            EdgeId id = scr.entry_eid[entry];
            ++half_edges;
            if (scr.visited[w] != gen) {
                scr.visited[w] = gen;
                scr.disc[w] = scr.low[w] = time++;
                scr.sub_seeds[w] = is_seed[w] ? 1 : 0;
                scr.parent_edge[w] = id;
                scr.cursor[w] = scr.mark[w] == gen ? scr.head[w] : -1;
                scr.stack.push_back(w);
                ++eval.comp_size;
                if (is_seed[w])
                    ++eval.comp_seeds;
            } else if (id != scr.parent_edge[v]) {
                scr.low[v] = std::min(scr.low[v], scr.disc[w]);
            }
        } else {
            scr.stack.pop_back();
            if (!scr.stack.empty()) {
                VertexId parent = scr.stack.back();
                scr.low[parent] = std::min(scr.low[parent], scr.low[v]);
                scr.sub_seeds[parent] += scr.sub_seeds[v];
                if (scr.low[v] > scr.disc[parent])
                    scr.bridge_buf.emplace_back(scr.parent_edge[v], scr.sub_seeds[v]);
            }
        }
    }
    eval.comp_edges = half_edges / 2;

    bool reachable = eval.comp_seeds >= 1;
    bool tree = eval.comp_edges == eval.comp_size - 1;
    eval.success = objective == IcObjective::Sigma ? reachable : (reachable && tree);
    if (eval.success && critical_out) {
        for (auto [id, seeds_below] : scr.bridge_buf)
            if (seeds_below == eval.comp_seeds && is_candidate[id] && !deleted_mask[id])
                critical_out->push_back(id);
        std::sort(critical_out->begin(), critical_out->end());
    }
    return eval;
}

// Union-find pass checking the conditional estimator's events: every
// component at most L vertices and at most one seed.
struct FilterScratch {
    std::vector<int> parent, size, seeds;

    void reset(int n, const std::vector<char>& is_seed)
    {
        parent.resize(n);
        size.assign(n, 1);
        seeds.resize(n);
        for (int v = 0; v < n; ++v) {
            parent[v] = v;
            seeds[v] = is_seed[v] ? 1 : 0;
        }
    }
    int find(int v)
    {
        while (parent[v] != v) {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        return v;
    }
};

bool passes_filters(FilterScratch& scr, const IcInstance& inst,
                    std::span<const EdgeId> activated, const std::vector<char>& deleted_mask,
                    const std::vector<char>& is_seed, long L)
{
    scr.reset(inst.g.vertex_count(), is_seed);
    for (EdgeId id : activated) {
        if (deleted_mask[id])
            continue;
        const Edge& e = inst.g.edge(id);
        int a = scr.find(e.u);
        int b = scr.find(e.v);
        if (a == b)
            continue;
        if (scr.size[a] < scr.size[b])
            std::swap(a, b);
        scr.parent[b] = a;
        scr.size[a] += scr.size[b];
        scr.seeds[a] += scr.seeds[b];
        if (scr.size[a] > L || scr.seeds[a] >= 2)
            return false;
    }
    return true;
}

void draw_activation(const IcInstance& inst, Rng& rng, std::vector<EdgeId>& activated)
{
    activated.clear();
    for (EdgeId id = 0; id < inst.g.edge_count(); ++id)
        if (rng.bernoulli(inst.p[id]))
            activated.push_back(id);
}

double resolve_d_end(const IcInstance& inst, const EstimatorConfig& cfg)
{
    double d = cfg.d_end >= 0.0 ? cfg.d_end : max_expected_degree(inst);
    if (d >= 1.0)
        throw EstimatorUnavailable(
            "conditional estimator unavailable: expected-degree bound d_end = " +
            std::to_string(d) + " >= 1; fall back to estimate_sigma");
    return d;
}

std::vector<char> deleted_mask_of(const IcInstance& inst, const EdgeSet& deleted)
{
    std::vector<char> mask(inst.g.edge_count(), 0);
    for (EdgeId e : deleted) {
        if (!inst.g.has_edge_id(e))
            throw std::invalid_argument("ic: unknown edge id in deletion set");
        mask[e] = 1;
    }
    return mask;
}

std::vector<char> seed_mask_of(const IcInstance& inst)
{
    std::vector<char> mask(inst.g.vertex_count(), 0);
    for (VertexId s : inst.seeds)
        mask[s] = 1;
    return mask;
}

} // namespace

Estimate estimate_sigma(const IcInstance& inst, const EdgeSet& deleted,
                        const EstimatorConfig& cfg)
{
    const int n = inst.g.vertex_count();
    const long rounds = cfg.resolved_rounds(n);
    const auto deleted_mask = deleted_mask_of(inst, deleted);
    const auto is_seed = seed_mask_of(inst);
    const std::vector<char> no_candidates(inst.g.edge_count(), 0);

    std::vector<char> success(rounds, 0);
    parallel_for(0, rounds, [&](long r) {
        thread_local EvalScratch scratch;
        thread_local std::vector<EdgeId> activated;
        Rng rng(derive_seed(cfg.seed, "ic-round", static_cast<std::uint64_t>(r), 0));
        draw_activation(inst, rng, activated);
        VertexId terminal = static_cast<VertexId>(rng.next_below(n));
        auto eval = evaluate_terminal(scratch, inst, activated, deleted_mask, terminal, is_seed,
                                      IcObjective::Sigma, no_candidates, nullptr);
        success[r] = eval.success ? 1 : 0;
    });

    Estimate est;
    est.rounds = rounds;
    for (char s : success)
        est.successes += s;
    est.mean = static_cast<double>(est.successes) * n / static_cast<double>(rounds);
    est.half_width = hoeffding_half_width(rounds, n);
    return est;
}

Estimate estimate_sigma_prime(const IcInstance& inst, const EdgeSet& deleted,
                              const EstimatorConfig& cfg)
{
    const int n = inst.g.vertex_count();
    const long rounds = cfg.resolved_rounds(n);
    const double d_end = resolve_d_end(inst, cfg);
    const long L = compute_L(d_end, std::max(n, 2));
    const auto deleted_mask = deleted_mask_of(inst, deleted);
    const auto is_seed = seed_mask_of(inst);
    const std::vector<char> no_candidates(inst.g.edge_count(), 0);

    std::vector<char> success(rounds, 0);
    std::vector<int> retries(rounds, 0);
    std::vector<char> exhausted(rounds, 0);
    parallel_for(0, rounds, [&](long r) {
        thread_local EvalScratch scratch;
        thread_local FilterScratch filter;
        thread_local std::vector<EdgeId> activated;
        for (int attempt = 0; attempt <= cfg.max_retries; ++attempt) {
            Rng rng(derive_seed(cfg.seed, "ic-round", static_cast<std::uint64_t>(r),
                                static_cast<std::uint64_t>(attempt)));
            draw_activation(inst, rng, activated);
            VertexId terminal = static_cast<VertexId>(rng.next_below(n));
            if (!passes_filters(filter, inst, activated, deleted_mask, is_seed, L)) {
                ++retries[r];
                continue;
            }
            auto eval = evaluate_terminal(scratch, inst, activated, deleted_mask, terminal,
                                          is_seed, IcObjective::SigmaPrime, no_candidates,
                                          nullptr);
            success[r] = eval.success ? 1 : 0;
            return;
        }
        exhausted[r] = 1;
    });

    Estimate est;
    est.rounds = rounds;
    long exhausted_count = 0;
    for (long r = 0; r < rounds; ++r) {
        est.successes += success[r];
        est.resamples += retries[r];
        exhausted_count += exhausted[r];
    }
    if (exhausted_count > 0)
        throw EstimatorUnavailable(
            "conditional estimator: resample budget exhausted in " +
            std::to_string(exhausted_count) + " of " + std::to_string(rounds) +
            " rounds (d_end = " + std::to_string(d_end) + ", L = " + std::to_string(L) + ")");
    est.mean = static_cast<double>(est.successes) * n / static_cast<double>(rounds);
    est.half_width = hoeffding_half_width(rounds, n);
    return est;
}

double brute_force_expected_sigma(const IcInstance& inst, const EdgeSet& deleted)
{
    std::vector<Edge> surviving;
    std::vector<double> prob_on;
    for (EdgeId id = 0; id < inst.g.edge_count(); ++id)
        if (!deleted.contains(id)) {
            surviving.push_back(inst.g.edge(id));
            prob_on.push_back(inst.p[id]);
        }
    const int m = static_cast<int>(surviving.size());
    if (m > 20)
        throw std::invalid_argument("brute_force_expected_sigma: more than 20 surviving edges");

    const auto is_seed = seed_mask_of(inst);
    const int n = inst.g.vertex_count();
    std::vector<int> parent(n), size(n), seeds(n);
    auto find = [&](int v) {
        while (parent[v] != v) {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        return v;
    };

    double total = 0.0;
    for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
        double prob = 1.0;
        for (int b = 0; b < m; ++b)
            prob *= (mask & (1u << b)) ? prob_on[b] : 1.0 - prob_on[b];
        if (prob == 0.0)
            continue;
        for (int v = 0; v < n; ++v) {
            parent[v] = v;
            size[v] = 1;
            seeds[v] = is_seed[v] ? 1 : 0;
        }
        for (int b = 0; b < m; ++b) {
            if (!(mask & (1u << b)))
                continue;
            int a = find(surviving[b].u);
            int c = find(surviving[b].v);
            if (a == c)
                continue;
            if (size[a] < size[c])
                std::swap(a, c);
            parent[c] = a;
            size[a] += size[c];
            seeds[a] += seeds[c];
        }
        int infected = 0;
        for (int v = 0; v < n; ++v)
            if (!is_seed[v] && seeds[find(v)] > 0)
                ++infected;
        total += prob * infected;
    }
    return total;
}

GreedyTrace greedy_icsir(const IcInstance& inst, int k, const EstimatorConfig& cfg,
                         IcObjective objective)
{
    if (k < 0 || k > static_cast<int>(inst.candidates.size()))
        throw std::invalid_argument("greedy_icsir: k out of range");
    const int n = inst.g.vertex_count();
    const int m = inst.g.edge_count();
    const long rounds = cfg.resolved_rounds(n);
    const auto is_seed = seed_mask_of(inst);

    long L = 0;
    if (objective == IcObjective::SigmaPrime)
        L = compute_L(resolve_d_end(inst, cfg), std::max(n, 2));

    struct Sample {
        std::vector<EdgeId> activated;
        VertexId terminal = -1;
        bool success = false;
        std::vector<EdgeId> critical;
    };
    std::vector<Sample> samples(rounds);
    std::vector<char> exhausted(rounds, 0);
    std::vector<char> empty_mask(m, 0);
    parallel_for(0, rounds, [&](long r) {
        thread_local FilterScratch filter;
        Sample& s = samples[r];
        for (int attempt = 0; attempt <= cfg.max_retries; ++attempt) {
            Rng rng(derive_seed(cfg.seed, "ic-round", static_cast<std::uint64_t>(r),
                                static_cast<std::uint64_t>(attempt)));
            draw_activation(inst, rng, s.activated);
            s.terminal = static_cast<VertexId>(rng.next_below(n));
            if (objective == IcObjective::SigmaPrime &&
                !passes_filters(filter, inst, s.activated, empty_mask, is_seed, L))
                continue;
            return;
        }
        exhausted[r] = 1;
    });
    for (long r = 0; r < rounds; ++r)
        if (exhausted[r])
            throw EstimatorUnavailable("greedy_icsir: resample budget exhausted while drawing samples");

    std::vector<char> is_candidate(m, 0);
    for (EdgeId e : inst.candidates)
        is_candidate[e] = 1;

    // which samples contain a given candidate edge
    std::vector<std::vector<long>> edge_samples(m);
    for (long r = 0; r < rounds; ++r)
        for (EdgeId id : samples[r].activated)
            if (is_candidate[id])
                edge_samples[id].push_back(r);

    std::vector<char> deleted_mask(m, 0);
    std::vector<long> gain(m, 0);
    long successes = 0;

    EvalScratch scratch;
    auto refresh_sample = [&](Sample& s) {
        auto eval = evaluate_terminal(scratch, inst, s.activated, deleted_mask, s.terminal,
                                      is_seed, objective, is_candidate, &s.critical);
        s.success = eval.success;
        if (!s.success)
            s.critical.clear();
    };

    for (long r = 0; r < rounds; ++r) {
        refresh_sample(samples[r]);
        successes += samples[r].success;
        for (EdgeId e : samples[r].critical)
            ++gain[e];
    }

    GreedyTrace trace;
    trace.objective_name = objective == IcObjective::Sigma ? "ic-sigma" : "ic-sigma-prime";
    trace.seed = cfg.seed;
    trace.rounds = rounds;
    auto estimate_of = [&](long succ) {
        return static_cast<double>(succ) * n / static_cast<double>(rounds);
    };
    trace.objective_values.push_back(estimate_of(successes));

    EdgeSet chosen;
    for (int round = 0; round < k; ++round) {
        EdgeId best = -1;
        for (EdgeId e : inst.candidates) {
            if (deleted_mask[e])
                continue;
            if (best == -1 || gain[e] > gain[best])
                best = e;
        }
        deleted_mask[best] = 1;
        chosen.insert(best);

        for (long r : edge_samples[best]) {
            Sample& s = samples[r];
            successes -= s.success ? 1 : 0;
            for (EdgeId e : s.critical)
                --gain[e];
            refresh_sample(s);
            successes += s.success ? 1 : 0;
            for (EdgeId e : s.critical)
                ++gain[e];
        }
        trace.chosen.push_back(best);
        trace.gains.push_back(trace.objective_values.back() - estimate_of(successes));
        trace.objective_values.push_back(estimate_of(successes));
    }
    return trace;
}

} // namespace epimit
