#ifndef EPIMIT_GRAPH_HPP
#define EPIMIT_GRAPH_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "epimit/rng.hpp"

namespace epimit {

using VertexId = int;
using EdgeId = int;

struct Edge {
    VertexId u; // tail for directed edges
    VertexId v; // head for directed edges

    bool operator==(const Edge&) const = default;
};

// Sorted set of edge ids. Used both for candidate sets Q and deletion sets P;
// deletions always reference ids, never endpoint pairs, so ids stay stable
// across removals.
class EdgeSet {
public:
    EdgeSet() = default;
    explicit EdgeSet(std::vector<EdgeId> ids);

    static EdgeSet single(EdgeId e) { return EdgeSet({e}); }

    bool contains(EdgeId e) const;
    void insert(EdgeId e);
    EdgeSet with(EdgeId e) const;
    bool subset_of(const EdgeSet& other) const;

    std::size_t size() const { return ids_.size(); }
    bool empty() const { return ids_.empty(); }
    const std::vector<EdgeId>& ids() const { return ids_; }
    auto begin() const { return ids_.begin(); }
    auto end() const { return ids_.end(); }

    bool operator==(const EdgeSet&) const = default;

private:
    std::vector<EdgeId> ids_;
};

// Vertex/edge container with stable integer edge ids. Self-loops and
// duplicate edges (per the directed/undirected notion of sameness) are
// rejected. Edge ids of a freshly built graph are dense 0..m-1; a graph
// produced by delete_edges keeps the surviving original ids.
class Graph {
public:
    Graph() = default;
    Graph(int n, bool directed);

    int vertex_count() const { return n_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    bool directed() const { return directed_; }

    EdgeId add_edge(VertexId u, VertexId v);

    bool has_edge(VertexId u, VertexId v) const;
    bool has_edge_id(EdgeId e) const;
    const Edge& edge(EdgeId e) const;
    std::span<const Edge> edges() const { return edges_; }
    // ids parallel to edges(); equal to 0..m-1 unless edges were deleted
    const std::vector<EdgeId>& edge_ids() const { return ids_; }
    // one past the largest edge id; arrays indexed by edge id use this size
    int edge_id_bound() const { return id_bound_; }

    // undirected degree; for directed graphs counts both directions
    int degree(VertexId v) const;
    // incident (neighbor, edge id) pairs ignoring direction
    const std::vector<std::pair<VertexId, EdgeId>>& incident(VertexId v) const;

    bool operator==(const Graph&) const;

private:
    friend Graph delete_edges(const Graph& g, const EdgeSet& removed);

    static std::uint64_t pair_key(VertexId a, VertexId b)
    {
        return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
               static_cast<std::uint32_t>(b);
    }
    std::uint64_t canonical_key(VertexId u, VertexId v) const;

    int n_ = 0;
    bool directed_ = false;
    std::vector<Edge> edges_;
    std::vector<EdgeId> ids_;
    int id_bound_ = 0;
    std::unordered_set<std::uint64_t> keys_;
    std::vector<std::vector<std::pair<VertexId, EdgeId>>> incident_;
};

struct ComponentInfo {
    int size = 0;
    int edge_count = 0;
    bool is_tree = false;
    std::vector<VertexId> vertices;
};

// Connectivity structure of a graph with a deletion set applied. Direction is
// ignored: components, tree flags and bridges are notions of the underlying
// undirected graph.
struct ComponentAnalysis {
    std::vector<int> component;        // per vertex
    std::vector<ComponentInfo> components;
    std::vector<EdgeId> bridges;       // sorted
    std::vector<char> is_bridge;       // indexed by edge id

    int component_count() const { return static_cast<int>(components.size()); }
};

ComponentAnalysis analyze(const Graph& g, const EdgeSet& deleted = {});

// New graph with edges E \ P; survivors keep their original ids.
Graph delete_edges(const Graph& g, const EdgeSet& removed);

// Vertices reachable from `sources` in the underlying undirected graph with
// `deleted` removed (sources included).
std::vector<char> reachable_from(const Graph& g, const EdgeSet& deleted,
                                 std::span<const VertexId> sources);
int count_reachable(const Graph& g, const EdgeSet& deleted, std::span<const VertexId> sources);

// G(n, p): every unordered pair independently with probability p.
Graph gen_er(int n, double p, std::uint64_t seed);

// Stochastic block model with kappa blocks of block_size vertices each;
// pair (u in block i, v in block j) sampled once with probability q[i][j].
Graph gen_sbm(int block_size, int kappa, const std::vector<std::vector<double>>& q,
              std::uint64_t seed);

// Pick num_adv vertices uniformly; each gains nu new edges to uniformly
// chosen non-neighbors. Throws if a chosen vertex runs out of non-neighbors.
Graph perturb_adversarial(const Graph& g, int num_adv, int nu, std::uint64_t seed);

// Whitespace-separated "u v [weight]" lines; '#' starts a comment. The
// header comment "# n <count>" pins the vertex count on save/load.
struct EdgeListData {
    Graph graph;
    std::vector<double> weights; // empty if the file had no third column
};
EdgeListData load_edge_list(const std::string& path);
void save_edge_list(const Graph& g, const std::string& path,
                    std::span<const double> weights = {});

// Greedily remove edges at maximum-degree vertices until all degrees are at
// most max_deg. Ties: lowest vertex id, then lowest edge id.
struct DegreeCapResult {
    Graph graph;
    EdgeSet removed;
};
DegreeCapResult degree_cap_preprocess(const Graph& g, int max_deg);

// Reduction fixture: a 3-regular graph on an even number of vertices plus
// three stars whose leaves cover the original vertices.
struct HardnessInstance {
    Graph graph;                  // n + 3 vertices
    std::vector<VertexId> seeds;  // the three star centers
    EdgeSet candidates;           // all edges
    int budget = 0;               // b + 3n/2
    int threshold = 0;            // 3 + n/2
};
HardnessInstance build_hardness_instance(const Graph& g3, int bisection_size);

} // namespace epimit

#endif
