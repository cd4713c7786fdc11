#include "epimit/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace epimit {

EdgeSet::EdgeSet(std::vector<EdgeId> ids) : ids_(std::move(ids))
{
    std::sort(ids_.begin(), ids_.end());
    ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
}

bool EdgeSet::contains(EdgeId e) const
{
    return std::binary_search(ids_.begin(), ids_.end(), e);
}

void EdgeSet::insert(EdgeId e)
{
    auto it = std::lower_bound(ids_.begin(), ids_.end(), e);
    if (it == ids_.end() || *it != e)
        ids_.insert(it, e);
}

EdgeSet EdgeSet::with(EdgeId e) const
{
    EdgeSet s = *this;
    s.insert(e);
    return s;
}

bool EdgeSet::subset_of(const EdgeSet& other) const
{
    return std::includes(other.ids_.begin(), other.ids_.end(), ids_.begin(), ids_.end());
}

Graph::Graph(int n, bool directed) : n_(n), directed_(directed), incident_(n)
{
    if (n < 0)
        throw std::invalid_argument("Graph: negative vertex count");
}

std::uint64_t Graph::canonical_key(VertexId u, VertexId v) const
{
    if (!directed_ && u > v)
        std::swap(u, v);
    return pair_key(u, v);
}

EdgeId Graph::add_edge(VertexId u, VertexId v)
{
    if (u < 0 || u >= n_ || v < 0 || v >= n_)
        throw std::invalid_argument("add_edge: vertex out of range");
    if (u == v)
        throw std::invalid_argument("add_edge: self-loops are not allowed");
    if (!keys_.insert(canonical_key(u, v)).second)
        throw std::invalid_argument("add_edge: duplicate edge");
    EdgeId id = id_bound_++;
    edges_.push_back({u, v});
    ids_.push_back(id);
    incident_[u].emplace_back(v, id);
    incident_[v].emplace_back(u, id);
    return id;
}

bool Graph::has_edge(VertexId u, VertexId v) const
{
    if (u < 0 || u >= n_ || v < 0 || v >= n_ || u == v)
        return false;
    return keys_.count(canonical_key(u, v)) > 0;
}

bool Graph::has_edge_id(EdgeId e) const
{
    if (e < 0 || e >= id_bound_)
        return false;
    if (static_cast<int>(edges_.size()) == id_bound_)
        return true; // dense ids
    return std::binary_search(ids_.begin(), ids_.end(), e);
}

const Edge& Graph::edge(EdgeId e) const
{
    if (static_cast<int>(edges_.size()) == id_bound_) {
        if (e < 0 || e >= id_bound_)
            throw std::out_of_range("edge: unknown edge id");
        return edges_[e];
    }
    auto it = std::lower_bound(ids_.begin(), ids_.end(), e);
    if (it == ids_.end() || *it != e)
        throw std::out_of_range("edge: unknown edge id");
    return edges_[it - ids_.begin()];
}

int Graph::degree(VertexId v) const
{
    return static_cast<int>(incident_.at(v).size());
}

const std::vector<std::pair<VertexId, EdgeId>>& Graph::incident(VertexId v) const
{
    return incident_.at(v);
}

bool Graph::operator==(const Graph& other) const
{
    return n_ == other.n_ && directed_ == other.directed_ && edges_ == other.edges_ &&
           ids_ == other.ids_;
}

Graph delete_edges(const Graph& g, const EdgeSet& removed)
{
    for (EdgeId e : removed)
        if (!g.has_edge_id(e))
            throw std::invalid_argument("delete_edges: unknown edge id " + std::to_string(e));
    Graph out(g.vertex_count(), g.directed());
    out.id_bound_ = g.id_bound_;
    for (std::size_t i = 0; i < g.edges_.size(); ++i) {
        EdgeId id = g.ids_[i];
        if (removed.contains(id))
            continue;
        const Edge& e = g.edges_[i];
        out.edges_.push_back(e);
        out.ids_.push_back(id);
        out.keys_.insert(out.canonical_key(e.u, e.v));
        out.incident_[e.u].emplace_back(e.v, id);
        out.incident_[e.v].emplace_back(e.u, id);
    }
    return out;
}

// Iterative DFS computing components, per-component edge counts and bridges
// (lowlink). Direction is ignored, so a bidirectional pair of directed edges
// counts as a 2-cycle, not a bridge.
ComponentAnalysis analyze(const Graph& g, const EdgeSet& deleted)
{
    for (EdgeId e : deleted)
        if (!g.has_edge_id(e))
            throw std::invalid_argument("analyze: unknown edge id in deletion set");

    const int n = g.vertex_count();
    ComponentAnalysis out;
    out.component.assign(n, -1);
    out.is_bridge.assign(g.edge_id_bound(), 0);

    std::vector<int> disc(n, -1), low(n, 0), parent_edge(n, -1);
    std::vector<std::size_t> iter(n, 0);
    int time = 0;

    for (VertexId root = 0; root < n; ++root) {
        if (disc[root] != -1)
            continue;
        const int comp = out.component_count();
        out.components.push_back({});
        ComponentInfo& info = out.components.back();

        std::vector<VertexId> stack{root};
        disc[root] = low[root] = time++;
        out.component[root] = comp;
        int half_edges = 0;

        while (!stack.empty()) {
            VertexId v = stack.back();
            const auto& inc = g.incident(v);
            if (iter[v] < inc.size()) {
                auto [w, id] = inc[iter[v]++];
                if (deleted.contains(id))
                    continue;
                ++half_edges;
                if (disc[w] == -1) {
                    disc[w] = low[w] = time++;
                    out.component[w] = comp;
                    parent_edge[w] = id;
                    stack.push_back(w);
                } else if (id != parent_edge[v]) {
                    low[v] = std::min(low[v], disc[w]);
                }
            } else {
                stack.pop_back();
                info.vertices.push_back(v);
                if (!stack.empty()) {
                    VertexId p = stack.back();
                    low[p] = std::min(low[p], low[v]);
                    if (low[v] > disc[p])
                        out.is_bridge[parent_edge[v]] = 1;
                }
            }
        }
        info.size = static_cast<int>(info.vertices.size());
        info.edge_count = half_edges / 2;
        info.is_tree = info.edge_count == info.size - 1;
        std::sort(info.vertices.begin(), info.vertices.end());
    }

    for (EdgeId id = 0; id < g.edge_id_bound(); ++id)
        if (out.is_bridge[id])
            out.bridges.push_back(id);
    return out;
}

std::vector<char> reachable_from(const Graph& g, const EdgeSet& deleted,
                                 std::span<const VertexId> sources)
{
    std::vector<char> seen(g.vertex_count(), 0);
    std::vector<VertexId> queue;
    for (VertexId s : sources) {
        if (s < 0 || s >= g.vertex_count())
            throw std::invalid_argument("reachable_from: source out of range");
        if (!seen[s]) {
            seen[s] = 1;
            queue.push_back(s);
        }
    }
    for (std::size_t head = 0; head < queue.size(); ++head) {
        VertexId v = queue[head];
        for (auto [w, id] : g.incident(v)) {
            if (seen[w] || deleted.contains(id))
                continue;
            seen[w] = 1;
            queue.push_back(w);
        }
    }
    return seen;
}

int count_reachable(const Graph& g, const EdgeSet& deleted, std::span<const VertexId> sources)
{
    auto seen = reachable_from(g, deleted, sources);
    int c = 0;
    for (char s : seen)
        c += s;
    return c;
}

Graph gen_er(int n, double p, std::uint64_t seed)
{
    if (n < 1)
        throw std::invalid_argument("gen_er: n must be at least 1");
    if (p < 0.0 || p > 1.0)
        throw std::invalid_argument("gen_er: p must be in [0,1]");
    Graph g(n, false);
    if (p == 0.0)
        return g;
    Rng rng(derive_seed(seed, "er"));
    if (p == 1.0) {
        for (VertexId u = 0; u < n; ++u)
            for (VertexId v = u + 1; v < n; ++v)
                g.add_edge(u, v);
        return g;
    }
    // geometric skipping over the C(n,2) pair sequence; exact for i.i.d.
    // Bernoulli(p) and much faster than per-pair draws when p is small
    const double log1mp = std::log1p(-p);
    const std::uint64_t total = static_cast<std::uint64_t>(n) * (n - 1) / 2;
    std::uint64_t idx = 0;
    for (;;) {
        double u = rng.next_double();
        double skip = std::floor(std::log1p(-u) / log1mp);
        if (skip >= static_cast<double>(total - idx))
            break;
        idx += static_cast<std::uint64_t>(skip);
        // pair index -> (row u, col v) with v > u
        std::uint64_t rem = idx;
        VertexId a = 0;
        std::uint64_t row_len = static_cast<std::uint64_t>(n - 1);
        while (rem >= row_len) {
            rem -= row_len;
            --row_len;
            ++a;
        }
        g.add_edge(a, a + 1 + static_cast<VertexId>(rem));
        if (++idx >= total)
            break;
    }
    return g;
}

Graph gen_sbm(int block_size, int kappa, const std::vector<std::vector<double>>& q,
              std::uint64_t seed)
{
    if (block_size < 1 || kappa < 1)
        throw std::invalid_argument("gen_sbm: block_size and kappa must be positive");
    if (static_cast<int>(q.size()) != kappa)
        throw std::invalid_argument("gen_sbm: q must be kappa x kappa");
    for (const auto& row : q)
        if (static_cast<int>(row.size()) != kappa)
            throw std::invalid_argument("gen_sbm: q must be kappa x kappa");
    for (int i = 0; i < kappa; ++i)
        for (int j = 0; j < kappa; ++j) {
            if (q[i][j] < 0.0 || q[i][j] > 1.0)
                throw std::invalid_argument("gen_sbm: probabilities must be in [0,1]");
            if (q[i][j] != q[j][i])
                throw std::invalid_argument("gen_sbm: q must be symmetric");
        }

    const int n = block_size * kappa;
    Graph g(n, false);
    Rng rng(derive_seed(seed, "sbm"));
    for (VertexId u = 0; u < n; ++u) {
        const int bu = u / block_size;
        for (VertexId v = u + 1; v < n; ++v) {
            if (rng.bernoulli(q[bu][v / block_size]))
                g.add_edge(u, v);
        }
    }
    return g;
}

Graph perturb_adversarial(const Graph& g, int num_adv, int nu, std::uint64_t seed)
{
    const int n = g.vertex_count();
    if (num_adv < 0 || num_adv > n)
        throw std::invalid_argument("perturb_adversarial: num_adv out of range");
    Graph out = g;
    if (num_adv == 0 || nu == 0)
        return out;

    Rng rng(derive_seed(seed, "adv"));
    // sample num_adv distinct vertices
    std::vector<VertexId> pool(n);
    for (int i = 0; i < n; ++i)
        pool[i] = i;
    for (int i = 0; i < num_adv; ++i)
        std::swap(pool[i], pool[i + rng.uniform_int(0, n - 1 - i)]);
    pool.resize(num_adv);

    for (VertexId a : pool) {
        std::vector<VertexId> choices;
        for (VertexId v = 0; v < n; ++v)
            if (v != a && !out.has_edge(a, v))
                choices.push_back(v);
        if (static_cast<int>(choices.size()) < nu)
            throw std::invalid_argument("perturb_adversarial: not enough non-neighbors for vertex " +
                                        std::to_string(a));
        for (int i = 0; i < nu; ++i) {
            std::swap(choices[i], choices[i + rng.uniform_int(0, static_cast<long>(choices.size()) - 1 - i)]);
            out.add_edge(a, choices[i]);
        }
    }
    return out;
}

EdgeListData load_edge_list(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("load_edge_list: cannot open " + path);

    struct Row {
        VertexId u, v;
        double w;
        bool has_w;
    };
    std::vector<Row> rows;
    std::optional<int> declared_n;
    VertexId max_id = -1;
    bool any_weight = false, all_weight = true;

    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view sv(line);
        if (auto pos = sv.find('#'); pos != std::string_view::npos) {
            // "# n <count>" header pins the vertex count
            std::istringstream hs(line.substr(pos + 1));
            std::string tag;
            long cnt;
            if (hs >> tag >> cnt && tag == "n")
                declared_n = static_cast<int>(cnt);
            sv = sv.substr(0, pos);
        }
        std::istringstream ls{std::string(sv)};
        long u = 0, v = 0;
        if (!(ls >> u)) {
            continue; // blank or comment-only line
        }
        std::string second;
        if (!(ls >> second))
            throw std::runtime_error("load_edge_list: parse error at line " +
                                     std::to_string(lineno) + ": missing second endpoint");
        std::size_t used = 0;
        try {
            v = std::stol(second, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != second.size())
            throw std::runtime_error("load_edge_list: parse error at line " +
                                     std::to_string(lineno) + ": bad endpoint '" + second + "'");
        if (u < 0 || v < 0)
            throw std::runtime_error("load_edge_list: parse error at line " +
                                     std::to_string(lineno) + ": negative vertex id");
        Row row{static_cast<VertexId>(u), static_cast<VertexId>(v), 0.0, false};
        double w;
        if (ls >> w) {
            row.w = w;
            row.has_w = true;
            any_weight = true;
        } else {
            all_weight = false;
        }
        std::string extra;
        if (ls >> extra)
            throw std::runtime_error("load_edge_list: parse error at line " +
                                     std::to_string(lineno) + ": trailing token '" + extra + "'");
        rows.push_back(row);
        max_id = std::max({max_id, row.u, row.v});
    }
    if (any_weight && !all_weight)
        throw std::runtime_error("load_edge_list: mixed weighted and unweighted lines in " + path);

    int n = declared_n.value_or(max_id + 1);
    if (max_id >= n)
        throw std::runtime_error("load_edge_list: vertex id exceeds declared count in " + path);
    EdgeListData data{Graph(std::max(n, 0), false), {}};
    for (const Row& r : rows) {
        data.graph.add_edge(r.u, r.v);
        if (any_weight)
            data.weights.push_back(r.w);
    }
    return data;
}

void save_edge_list(const Graph& g, const std::string& path, std::span<const double> weights)
{
    if (!weights.empty() && static_cast<int>(weights.size()) != g.edge_count())
        throw std::invalid_argument("save_edge_list: weight count mismatch");
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("save_edge_list: cannot open " + path);
    out << "# n " << g.vertex_count() << "\n";
    const auto edges = g.edges();
    for (std::size_t i = 0; i < edges.size(); ++i) {
        out << edges[i].u << " " << edges[i].v;
        if (!weights.empty()) {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%.12g", weights[i]);
            out << " " << buf;
        }
        out << "\n";
    }
}

DegreeCapResult degree_cap_preprocess(const Graph& g, int max_deg)
{
    if (max_deg < 0)
        throw std::invalid_argument("degree_cap_preprocess: negative cap");
    const int n = g.vertex_count();
    std::vector<int> deg(n);
    for (VertexId v = 0; v < n; ++v)
        deg[v] = g.degree(v);

    EdgeSet removed;
    for (;;) {
        VertexId worst = -1;
        for (VertexId v = 0; v < n; ++v)
            if (deg[v] > max_deg && (worst == -1 || deg[v] > deg[worst]))
                worst = v; // strict > keeps the lowest id on ties
        if (worst == -1)
            break;
        EdgeId pick = -1;
        for (auto [w, id] : g.incident(worst))
            if (!removed.contains(id) && (pick == -1 || id < pick))
                pick = id;
        const Edge& e = g.edge(pick);
        removed.insert(pick);
        --deg[e.u];
        --deg[e.v];
    }
    return {delete_edges(g, removed), removed};
}

HardnessInstance build_hardness_instance(const Graph& g3, int bisection_size)
{
    const int n = g3.vertex_count();
    if (n % 2 != 0)
        throw std::invalid_argument("build_hardness_instance: vertex count must be even");
    if (g3.directed())
        throw std::invalid_argument("build_hardness_instance: input must be undirected");
    for (VertexId v = 0; v < n; ++v)
        if (g3.degree(v) != 3)
            throw std::invalid_argument("build_hardness_instance: input must be 3-regular");

    HardnessInstance inst;
    inst.graph = Graph(n + 3, false);
    for (const Edge& e : g3.edges())
        inst.graph.add_edge(e.u, e.v);
    std::vector<EdgeId> all;
    for (EdgeId id : inst.graph.edge_ids())
        all.push_back(id);
    for (int s = 0; s < 3; ++s) {
        VertexId center = n + s;
        inst.seeds.push_back(center);
        for (VertexId leaf = 0; leaf < n; ++leaf)
            all.push_back(inst.graph.add_edge(center, leaf));
    }
    inst.candidates = EdgeSet(std::move(all));
    inst.budget = bisection_size + 3 * n / 2;
    inst.threshold = 3 + n / 2;
    return inst;
}

} // namespace epimit
