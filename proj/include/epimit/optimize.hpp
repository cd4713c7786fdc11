#ifndef EPIMIT_OPTIMIZE_HPP
#define EPIMIT_OPTIMIZE_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "epimit/graph.hpp"

namespace epimit {

// Result of a greedy run: the chosen ids in pick order, the objective after
// each round (length k+1, starting from the empty set) and per-round gains.
struct GreedyTrace {
    std::vector<EdgeId> chosen;
    std::vector<double> objective_values;
    std::vector<double> gains;
    std::string objective_name;
    std::uint64_t seed = 0;
    long rounds = 0;        // sample count backing a Monte-Carlo objective
    bool guaranteed = true; // false when a precondition backing the bound failed
    long oracle_calls = 0;

    EdgeSet chosen_set(int k = -1) const;
    double final_value() const { return objective_values.back(); }
};

using SetFunction = std::function<double(const EdgeSet&)>;

// Plain greedy minimization: k rounds, each picking the candidate with the
// largest decrease f(P) - f(P + e); ties go to the lowest edge id. Exactly
// 1 + sum_{i<k}(|Q|-i) oracle evaluations.
GreedyTrace greedy(const SetFunction& f, const EdgeSet& candidates, int k);

// Each round removes the lowest-id candidate edge incident to the current
// maximum-degree vertex (degree ties: lowest vertex id). If that vertex has
// no candidate edge left, falls back to the candidate edge whose endpoints
// have the highest degree.
GreedyTrace max_degree_baseline(const Graph& g, const EdgeSet& candidates, int k);

// Uniform k-subset without replacement, realized as a prefix of a random
// permutation so traces are nested across budgets.
GreedyTrace random_baseline(const EdgeSet& candidates, int k, std::uint64_t seed);

struct BruteForceResult {
    EdgeSet best;
    double value = 0.0;
    long subsets_checked = 0;
};

// Exact minimizer over all size-k subsets of the candidate set. Ties go to
// the lexicographically smallest id set. Rejects more than max_subsets
// combinations.
BruteForceResult brute_force_opt(const SetFunction& f, const EdgeSet& candidates, int k,
                                 long max_subsets = 1000000);

struct SupermodularityReport {
    bool supermodular = true;
    bool monotone = true; // monotonically non-increasing
    struct Violation {
        EdgeSet p1, p2;
        EdgeId element = -1; // -1 for monotonicity violations
        double gap = 0.0;
    };
    std::optional<Violation> counterexample;

    bool ok() const { return supermodular && monotone; }
};

// Exhaustive check of the defining inequality
//   f(P1) - f(P1+e) >= f(P2) - f(P2+e)   for all P1 ⊆ P2, e ∉ P2
// and of monotone non-increase over all nested pairs, to tolerance tol.
// Candidate sets are capped at 12 elements.
SupermodularityReport check_supermodular(const SetFunction& f, const EdgeSet& candidates,
                                         double tol);

} // namespace epimit

#endif
