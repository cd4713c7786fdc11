#ifndef EPIMIT_DSIR_HPP
#define EPIMIT_DSIR_HPP

#include <span>
#include <vector>

#include "epimit/graph.hpp"
#include "epimit/linalg.hpp"
#include "epimit/optimize.hpp"

namespace epimit {

// Mean-field SIR system over a directed contact graph. Edge e = (j -> i)
// carries the infection rate from j to i; heal[i] is the per-step recovery
// probability. x0/r0 are initial infection/removal probabilities.
struct DsirSystem {
    Graph g; // directed
    std::vector<double> rate; // indexed by edge id
    std::vector<double> heal;
    std::vector<double> x0;
    std::vector<double> r0;

    int size() const { return g.vertex_count(); }
};

// Validates probability ranges, rate signs, D_i < 1 and row sums
// sum_j B_ij < 1 (the conditions keeping the state in [0,1]^n).
DsirSystem make_dsir_system(Graph g, std::vector<double> rate, std::vector<double> heal,
                            std::vector<double> x0, std::vector<double> r0);

struct DsirState {
    std::vector<double> x;
    std::vector<double> r;
    int t = 0;
};

DsirState initial_state(const DsirSystem& sys);

// One synchronous update
//   x(t+1) = x + (I - X - R) B_{-P} x - D∘x,  r(t+1) = r + D∘x.
// Entries are clamped into [0,1] only when outside by less than 1e-12;
// larger excursions throw (they signal invalid parameters).
DsirState step(const DsirSystem& sys, const EdgeSet& deleted, const DsirState& s);

struct SigmaResult {
    double sigma = 0.0;
    bool converged = false;
    int steps = 0;
};

// Iterates until ||x||_inf < tol or t_max steps and returns ||m(t) - m(0)||_1.
// A hit of t_max with ||x||_inf >= tol is flagged, never silently returned.
SigmaResult simulate_sigma(const DsirSystem& sys, const EdgeSet& deleted, double tol = 1e-10,
                           int t_max = 100000);

// M_{-P} = I - D + (I - X(0) - R(0)) B_{-P}
Matrix transition_matrix(const DsirSystem& sys, const EdgeSet& deleted);

struct StabilityResult {
    bool stable = false;
    double epsilon = 0.0; // largest eps with (1-x0_i-r0_i) sum_j B_ij <= D_i - eps
};

// Row-sum (Gershgorin) sufficient condition evaluated at P = empty, which
// dominates every deletion set.
StabilityResult check_stability(const DsirSystem& sys);

// Infection upper bound  1^T (M_{-P} + D - I)(I - M_{-P})^{-1} x(0).
// Requires the system to be stable enough for the inverse to exist; a
// non-positive solve (impossible for an M-matrix) is rejected.
double sigma_hat(const DsirSystem& sys, const EdgeSet& deleted);

// Same bound from an explicit transition matrix.
double sigma_hat_matrix(const Matrix& m, std::span<const double> heal,
                        std::span<const double> x0);

// Greedy minimization of sigma_hat by edge deletion. Marginal gains are
// evaluated in O(n) per candidate from a cached inverse which is advanced by
// a rank-one update after each pick. The trace's guaranteed flag mirrors
// check_stability.
GreedyTrace greedy_dsir(const DsirSystem& sys, const EdgeSet& candidates, int k);

// Variant deleting groups of edges together (used for bidirectional contact
// pairs); gains use the corresponding low-rank update.
GreedyTrace greedy_dsir_grouped(const DsirSystem& sys,
                                const std::vector<std::vector<EdgeId>>& groups, int k);

} // namespace epimit

#endif
