#ifndef EPIMIT_GSIR_HPP
#define EPIMIT_GSIR_HPP

#include <cstdint>
#include <vector>

#include "epimit/graph.hpp"

namespace epimit {

// Markov-chain SIR ground truth: per-step Bernoulli infection draws on edges
// from infected to susceptible vertices and Bernoulli recovery draws on
// infected vertices. Initial indicators are either the fixed sets or, in
// bernoulli_init mode, drawn per replicate from the x0/r0 means.
struct GsirParams {
    Graph g; // directed
    std::vector<double> infect_mean; // per edge id
    std::vector<double> heal_mean;   // per vertex
    std::vector<VertexId> init_infected;
    std::vector<VertexId> init_removed;
    bool bernoulli_init = false;
    std::vector<double> x0; // used when bernoulli_init
    std::vector<double> r0;
    long step_cap = 1000000; // guards heal_mean = 0 inputs
};

GsirParams make_gsir_params(Graph g, std::vector<double> infect_mean,
                            std::vector<double> heal_mean, std::vector<VertexId> init_infected,
                            std::vector<VertexId> init_removed);
GsirParams make_gsir_params_bernoulli(Graph g, std::vector<double> infect_mean,
                                      std::vector<double> heal_mean, std::vector<double> x0,
                                      std::vector<double> r0);

// One synchronous run until no vertex is infected; returns the number of new
// infections, final |I ∪ R| minus initial |I ∪ R|.
long simulate_once(const GsirParams& params, const EdgeSet& deleted, Rng& rng);

struct GsirEstimate {
    double mean = 0.0;
    double half_width = 0.0; // Hoeffding, confidence 0.9, range n
    long reps = 0;
};

GsirEstimate estimate_infections(const GsirParams& params, const EdgeSet& deleted, long reps,
                                 std::uint64_t seed);

} // namespace epimit

#endif
