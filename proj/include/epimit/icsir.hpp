#ifndef EPIMIT_ICSIR_HPP
#define EPIMIT_ICSIR_HPP

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "epimit/graph.hpp"
#include "epimit/optimize.hpp"

namespace epimit {

// Cascade instance: undirected contact graph, per-edge activation
// probabilities, seed vertices and the candidate deletion set.
struct IcInstance {
    Graph g;
    std::vector<double> p; // indexed by edge id
    std::vector<VertexId> seeds;
    EdgeSet candidates;
};

IcInstance make_ic_instance(Graph g, std::vector<double> p, std::vector<VertexId> seeds,
                            EdgeSet candidates);

// One realized contagion network plus the uniformly drawn terminal vertex.
struct ContagionSample {
    EdgeSet activated;
    VertexId terminal = -1;
    ComponentAnalysis analysis;
};

// Sample every surviving edge independently and return the infected set:
// vertices reachable from the seeds, seeds excluded.
std::vector<VertexId> cascade(const IcInstance& inst, const EdgeSet& deleted, Rng& rng);

ContagionSample sample_contagion(const IcInstance& inst, const EdgeSet& deleted, Rng& rng);

struct EstimatorConfig {
    double epsilon = 0.1;
    long rounds = 0;        // 0 keeps the default ceil(3 eps^-2 n ln n)
    std::uint64_t seed = 0;
    double d_end = -1.0;    // expected-degree bound; <0 means derive from the instance
    int max_retries = 100;  // per-round resample budget of the conditional estimator

    long resolved_rounds(int n) const;
};

struct Estimate {
    double mean = 0.0;
    double half_width = 0.0; // Hoeffding, confidence 0.9, range n
    long rounds = 0;
    long successes = 0;
    long resamples = 0; // filtered-out draws (conditional estimator only)
};

// Terminal-sampling estimator of E[sigma~(P)]: success iff the uniformly
// drawn terminal is a non-seed vertex reachable from a seed; the estimate is
// successes * n / rounds.
Estimate estimate_sigma(const IcInstance& inst, const EdgeSet& deleted,
                        const EstimatorConfig& cfg);

// Conditional variant targeting E[rho(P) | no component above L, no
// component with two seeds]. Draws violating the events are resampled
// (bounded); terminals inside cycle-containing components count as failures.
Estimate estimate_sigma_prime(const IcInstance& inst, const EdgeSet& deleted,
                              const EstimatorConfig& cfg);

// Thrown when the conditional estimator cannot run (d_end >= 1) or its
// resample budget is exhausted; callers may fall back to estimate_sigma.
class EstimatorUnavailable : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Exact expectation by enumerating all activation patterns of the surviving
// edges; rejects more than 20 surviving edges.
double brute_force_expected_sigma(const IcInstance& inst, const EdgeSet& deleted);

enum class IcObjective { Sigma, SigmaPrime };

// Sample-reuse greedy: draws rounds (sample, terminal) pairs once, then in
// each round picks the candidate whose removal turns the most currently
// successful terminals into failures. Per-sample state is maintained
// incrementally; a sample is re-analyzed only when an accepted deletion
// touches it.
GreedyTrace greedy_icsir(const IcInstance& inst, int k, const EstimatorConfig& cfg,
                         IcObjective objective = IcObjective::Sigma);

// Cumulative per-edge activation probability B / (1 - (1-D)(1-B)).
double rates_to_activation(double infection_rate, double healing_rate);

// Component-size threshold ceil(9 (1-d)^-2 ln n) of the conditional
// estimator's filter.
long compute_L(double d_end, long n);
// Block-model diagnostics; computed with the same inverse-square form.
long compute_L_star(double d_end, long n, long kappa);
long compute_m_bin(double d_init, double d_end);

// max_i sum_{j in N(i)} p_ij, the conservative expected-degree bound used
// when EstimatorConfig.d_end is absent.
double max_expected_degree(const IcInstance& inst);

} // namespace epimit

#endif
