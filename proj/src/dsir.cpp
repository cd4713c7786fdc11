#include "epimit/dsir.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace epimit {

namespace {

constexpr double kClampTol = 1e-12;

double clamp_unit(double v, const char* what)
{
    if (v < 0.0) {
        if (v > -kClampTol)
            return 0.0;
        throw std::runtime_error(std::string(what) + " left [0,1]; invalid parameters");
    }
    if (v > 1.0) {
        if (v < 1.0 + kClampTol)
            return 1.0;
        throw std::runtime_error(std::string(what) + " left [0,1]; invalid parameters");
    }
    return v;
}

} // namespace

DsirSystem make_dsir_system(Graph g, std::vector<double> rate, std::vector<double> heal,
                            std::vector<double> x0, std::vector<double> r0)
{
    if (!g.directed())
        throw std::invalid_argument("dsir: graph must be directed");
    if (g.edge_count() != g.edge_id_bound())
        throw std::invalid_argument("dsir: graph must have dense edge ids");
    const int n = g.vertex_count();
    if (static_cast<int>(rate.size()) != g.edge_count())
        throw std::invalid_argument("dsir: rate count must match edge count");
    if (static_cast<int>(heal.size()) != n || static_cast<int>(x0.size()) != n ||
        static_cast<int>(r0.size()) != n)
        throw std::invalid_argument("dsir: vector sizes must match vertex count");
    for (double b : rate)
        if (!(b >= 0.0))
            throw std::invalid_argument("dsir: infection rates must be non-negative");
    std::vector<double> row_sum(n, 0.0);
    const auto edges = g.edges();
    for (std::size_t idx = 0; idx < edges.size(); ++idx)
        row_sum[edges[idx].v] += rate[idx];
    for (int i = 0; i < n; ++i) {
        if (!(heal[i] >= 0.0) || heal[i] >= 1.0)
            throw std::invalid_argument("dsir: healing rates must satisfy 0 <= D_i < 1");
        if (row_sum[i] >= 1.0)
            throw std::invalid_argument("dsir: infection-rate row sums must stay below 1");
        if (x0[i] < 0.0 || r0[i] < 0.0 || x0[i] + r0[i] > 1.0)
            throw std::invalid_argument("dsir: initial probabilities must satisfy x0,r0 >= 0, x0+r0 <= 1");
    }
    DsirSystem sys;
    sys.g = std::move(g);
    sys.rate = std::move(rate);
    sys.heal = std::move(heal);
    sys.x0 = std::move(x0);
    sys.r0 = std::move(r0);
    return sys;
}

DsirState initial_state(const DsirSystem& sys)
{
    return {sys.x0, sys.r0, 0};
}

DsirState step(const DsirSystem& sys, const EdgeSet& deleted, const DsirState& s)
{
    const int n = sys.size();
    std::vector<double> influx(n, 0.0);
    const auto edges = sys.g.edges();
    const auto& ids = sys.g.edge_ids();
    for (std::size_t idx = 0; idx < edges.size(); ++idx) {
        if (deleted.contains(ids[idx]))
            continue;
        influx[edges[idx].v] += sys.rate[idx] * s.x[edges[idx].u];
    }
    DsirState out;
    out.t = s.t + 1;
    out.x.resize(n);
    out.r.resize(n);
    for (int i = 0; i < n; ++i) {
        double susceptible = 1.0 - s.x[i] - s.r[i];
        double x_next = s.x[i] + susceptible * influx[i] - sys.heal[i] * s.x[i];
        double r_next = s.r[i] + sys.heal[i] * s.x[i];
        out.x[i] = clamp_unit(x_next, "x");
        out.r[i] = clamp_unit(r_next, "r");
        clamp_unit(out.x[i] + out.r[i], "x+r");
    }
    return out;
}

SigmaResult simulate_sigma(const DsirSystem& sys, const EdgeSet& deleted, double tol, int t_max)
{
    const int n = sys.size();
    DsirState s = initial_state(sys);
    SigmaResult result;
    for (int t = 0; t < t_max; ++t) {
        double xmax = 0.0;
        for (double x : s.x)
            xmax = std::max(xmax, x);
        if (xmax < tol) {
            result.converged = true;
            break;
        }
        s = step(sys, deleted, s);
        result.steps = t + 1;
    }
    if (!result.converged) {
        double xmax = 0.0;
        for (double x : s.x)
            xmax = std::max(xmax, x);
        result.converged = xmax < tol;
    }
    double sigma = 0.0;
    for (int i = 0; i < n; ++i)
        sigma += (s.x[i] + s.r[i]) - (sys.x0[i] + sys.r0[i]);
    result.sigma = sigma;
    return result;
}

Matrix transition_matrix(const DsirSystem& sys, const EdgeSet& deleted)
{
    const int n = sys.size();
    Matrix m(n, n);
    for (int i = 0; i < n; ++i)
        m(i, i) = 1.0 - sys.heal[i];
    const auto edges = sys.g.edges();
    const auto& ids = sys.g.edge_ids();
    for (std::size_t idx = 0; idx < edges.size(); ++idx) {
        if (deleted.contains(ids[idx]))
            continue;
        const Edge& e = edges[idx];
        m(e.v, e.u) += (1.0 - sys.x0[e.v] - sys.r0[e.v]) * sys.rate[idx];
    }
    return m;
}

StabilityResult check_stability(const DsirSystem& sys)
{
    const int n = sys.size();
    std::vector<double> row_sum(n, 0.0);
    const auto edges = sys.g.edges();
    for (std::size_t idx = 0; idx < edges.size(); ++idx)
        row_sum[edges[idx].v] += sys.rate[idx];
    double margin = 1.0;
    for (int i = 0; i < n; ++i)
        margin = std::min(margin, sys.heal[i] - (1.0 - sys.x0[i] - sys.r0[i]) * row_sum[i]);
    StabilityResult out;
    out.stable = margin > 0.0;
    out.epsilon = std::max(margin, 0.0);
    return out;
}

namespace {

double hat_from_solution(const DsirSystem& sys, const EdgeSet& deleted,
                         std::span<const double> y)
{
    // 1^T (M + D - I) y with M + D - I = (I - X0 - R0) B_{-P}
    double total = 0.0;
    const auto edges = sys.g.edges();
    const auto& ids = sys.g.edge_ids();
    for (std::size_t idx = 0; idx < edges.size(); ++idx) {
        if (deleted.contains(ids[idx]))
            continue;
        const Edge& e = edges[idx];
        total += (1.0 - sys.x0[e.v] - sys.r0[e.v]) * sys.rate[idx] * y[e.u];
    }
    return total;
}

void require_nonnegative_solution(std::span<const double> y)
{
    double scale = 1.0;
    for (double v : y)
        scale = std::max(scale, std::abs(v));
    for (double v : y)
        if (v < -1e-9 * scale)
            throw std::domain_error("sigma_hat: system is unstable or singular");
}

} // namespace

double sigma_hat(const DsirSystem& sys, const EdgeSet& deleted)
{
    const int n = sys.size();
    Matrix m = transition_matrix(sys, deleted);
    Matrix a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            a(i, j) = (i == j ? 1.0 : 0.0) - m(i, j);
    LuFactor f = lu_factor(std::move(a));
    if (f.singular)
        throw std::domain_error("sigma_hat: I - M is singular");
    std::vector<double> y = lu_solve(f, sys.x0);
    require_nonnegative_solution(y);
    double value = hat_from_solution(sys, deleted, y);
    if (value < 0.0 && value > -1e-12)
        value = 0.0;
    if (value < 0.0)
        throw std::domain_error("sigma_hat: negative bound; system is unstable");
    return value;
}

double sigma_hat_matrix(const Matrix& m, std::span<const double> heal, std::span<const double> x0)
{
    const int n = m.rows();
    if (m.cols() != n || static_cast<int>(heal.size()) != n || static_cast<int>(x0.size()) != n)
        throw std::invalid_argument("sigma_hat_matrix: size mismatch");
    Matrix a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            a(i, j) = (i == j ? 1.0 : 0.0) - m(i, j);
    LuFactor f = lu_factor(std::move(a));
    if (f.singular)
        throw std::domain_error("sigma_hat_matrix: I - M is singular");
    std::vector<double> y = lu_solve(f, x0);
    require_nonnegative_solution(y);
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            double c = m(i, j) + (i == j ? heal[i] - 1.0 : 0.0);
            total += c * y[j];
        }
    }
    return total;
}

namespace {

// Cached pieces of sigma_hat under the current deletion set:
//   H = (I - M_{-P})^{-1}, v_j = column sums of (I - X0 - R0) B_{-P},
//   gvec = H x0, and sigma = v . gvec.
struct SurrogateCache {
    Matrix h;
    std::vector<double> v;
    std::vector<double> gvec;
    double sigma = 0.0;
};

struct GroupEdge {
    VertexId from; // j
    VertexId to;   // i
    double c;      // (1 - x0_i - r0_i) B_ij
};

SurrogateCache build_cache(const DsirSystem& sys)
{
    const int n = sys.size();
    Matrix m = transition_matrix(sys, {});
    Matrix a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            a(i, j) = (i == j ? 1.0 : 0.0) - m(i, j);
    LuFactor f = lu_factor(std::move(a));
    if (f.singular)
        throw std::domain_error("greedy_dsir: I - M is singular");
    SurrogateCache cache;
    cache.h = lu_inverse(f);
    cache.v.assign(n, 0.0);
    const auto edges = sys.g.edges();
    for (std::size_t idx = 0; idx < edges.size(); ++idx) {
        const Edge& e = edges[idx];
        cache.v[e.u] += (1.0 - sys.x0[e.v] - sys.r0[e.v]) * sys.rate[idx];
    }
    cache.gvec = cache.h.multiply(sys.x0);
    require_nonnegative_solution(cache.gvec);
    cache.sigma = 0.0;
    for (int j = 0; j < n; ++j)
        cache.sigma += cache.v[j] * cache.gvec[j];
    return cache;
}

// Solve the r x r capacitance system S z = b with S = diag(1/c) + A.
std::vector<double> solve_small(std::vector<std::vector<double>> s, std::vector<double> b)
{
    const int r = static_cast<int>(b.size());
    for (int col = 0; col < r; ++col) {
        int pivot = col;
        for (int row = col + 1; row < r; ++row)
            if (std::abs(s[row][col]) > std::abs(s[pivot][col]))
                pivot = row;
        if (s[pivot][col] == 0.0)
            throw std::domain_error("greedy_dsir: degenerate rank-one update");
        std::swap(s[pivot], s[col]);
        std::swap(b[pivot], b[col]);
        for (int row = col + 1; row < r; ++row) {
            double mfac = s[row][col] / s[col][col];
            if (mfac == 0.0)
                continue;
            for (int j = col; j < r; ++j)
                s[row][j] -= mfac * s[col][j];
            b[row] -= mfac * b[col];
        }
    }
    std::vector<double> z(r);
    for (int row = r - 1; row >= 0; --row) {
        double acc = b[row];
        for (int j = row + 1; j < r; ++j)
            acc -= s[row][j] * z[j];
        z[row] = acc / s[row][row];
    }
    return z;
}

std::vector<std::vector<double>> capacitance(const SurrogateCache& cache,
                                             const std::vector<GroupEdge>& ge)
{
    const int r = static_cast<int>(ge.size());
    std::vector<std::vector<double>> s(r, std::vector<double>(r, 0.0));
    for (int a = 0; a < r; ++a)
        for (int b = 0; b < r; ++b)
            s[a][b] = (a == b ? 1.0 / ge[a].c : 0.0) + cache.h(ge[a].from, ge[b].to);
    return s;
}

// sigma_hat(P + group) via the Woodbury identity, O(r n).
double updated_sigma(const SurrogateCache& cache, const std::vector<GroupEdge>& ge)
{
    const int n = static_cast<int>(cache.v.size());
    const int r = static_cast<int>(ge.size());
    if (r == 0)
        return cache.sigma;
    std::vector<double> w(r);
    for (int t = 0; t < r; ++t)
        w[t] = cache.gvec[ge[t].from];
    std::vector<double> z = solve_small(capacitance(cache, ge), w);

    // v' . gvec = sigma - sum c_t gvec[j_t]
    double term0 = cache.sigma;
    for (const GroupEdge& e : ge)
        term0 -= e.c * cache.gvec[e.from];
    // q_b = v' . H e_{i_b}
    double correction = 0.0;
    for (int b = 0; b < r; ++b) {
        double q = 0.0;
        for (int p = 0; p < n; ++p)
            q += cache.v[p] * cache.h(p, ge[b].to);
        for (const GroupEdge& e : ge)
            q -= e.c * cache.h(e.from, ge[b].to);
        correction += q * z[b];
    }
    return term0 - correction;
}

// Apply the deletion of a group to the cache (rank-r update of H).
void apply_group(SurrogateCache& cache, const std::vector<GroupEdge>& ge,
                 std::span<const double> x0)
{
    const int n = static_cast<int>(cache.v.size());
    const int r = static_cast<int>(ge.size());
    if (r == 0)
        return;
    // copies of the columns H e_{i_b} and rows e_{j_a}^T H
    std::vector<std::vector<double>> hu(r, std::vector<double>(n));
    std::vector<std::vector<double>> wh(r, std::vector<double>(n));
    for (int t = 0; t < r; ++t)
        for (int p = 0; p < n; ++p) {
            hu[t][p] = cache.h(p, ge[t].to);
            wh[t][p] = cache.h(ge[t].from, p);
        }
    auto s = capacitance(cache, ge);
    // S^{-1} via r solves against identity columns
    std::vector<std::vector<double>> sinv(r, std::vector<double>(r));
    for (int col = 0; col < r; ++col) {
        std::vector<double> e(r, 0.0);
        e[col] = 1.0;
        std::vector<double> x = solve_small(s, e);
        for (int row = 0; row < r; ++row)
            sinv[row][col] = x[row];
    }
    // H' = H - (HU) S^{-1} (W^T H)
    for (int a = 0; a < r; ++a) {
        std::vector<double> y(n, 0.0); // row a of S^{-1} (W^T H)
        for (int b = 0; b < r; ++b) {
            const double f = sinv[a][b];
            if (f == 0.0)
                continue;
            for (int p = 0; p < n; ++p)
                y[p] += f * wh[b][p];
        }
        for (int p = 0; p < n; ++p) {
            const double col = hu[a][p];
            if (col == 0.0)
                continue;
            for (int q = 0; q < n; ++q)
                cache.h(p, q) -= col * y[q];
        }
    }
    for (const GroupEdge& e : ge)
        cache.v[e.from] -= e.c;
    cache.gvec = cache.h.multiply(std::vector<double>(x0.begin(), x0.end()));
    cache.sigma = 0.0;
    for (int j = 0; j < n; ++j)
        cache.sigma += cache.v[j] * cache.gvec[j];
}

std::vector<GroupEdge> group_edges(const DsirSystem& sys, const std::vector<EdgeId>& ids)
{
    std::vector<GroupEdge> ge;
    for (EdgeId id : ids) {
        const Edge& e = sys.g.edge(id);
        double c = (1.0 - sys.x0[e.v] - sys.r0[e.v]) * sys.rate[id];
        if (c > 0.0)
            ge.push_back({e.u, e.v, c});
    }
    return ge;
}

} // namespace

GreedyTrace greedy_dsir_grouped(const DsirSystem& sys,
                                const std::vector<std::vector<EdgeId>>& groups, int k)
{
    if (k < 0 || k > static_cast<int>(groups.size()))
        throw std::invalid_argument("greedy_dsir: k out of range");
    {
        EdgeSet seen;
        for (const auto& grp : groups)
            for (EdgeId id : grp) {
                if (!sys.g.has_edge_id(id))
                    throw std::invalid_argument("greedy_dsir: unknown candidate edge id");
                if (seen.contains(id))
                    throw std::invalid_argument("greedy_dsir: candidate groups overlap");
                seen.insert(id);
            }
    }

    GreedyTrace trace;
    trace.objective_name = "dsir-sigma-hat";
    trace.guaranteed = check_stability(sys).stable;

    SurrogateCache cache = build_cache(sys);
    trace.objective_values.push_back(cache.sigma);
    ++trace.oracle_calls;

    std::vector<char> used(groups.size(), 0);
    for (int round = 0; round < k; ++round) {
        int best = -1;
        double best_value = 0.0;
        for (std::size_t gi = 0; gi < groups.size(); ++gi) {
            if (used[gi])
                continue;
            double value = updated_sigma(cache, group_edges(sys, groups[gi]));
            ++trace.oracle_calls;
            if (best == -1 || value < best_value) {
                best = static_cast<int>(gi);
                best_value = value;
            }
        }
        used[best] = 1;
        apply_group(cache, group_edges(sys, groups[best]), sys.x0);
        trace.chosen.push_back(best);
        trace.gains.push_back(trace.objective_values.back() - cache.sigma);
        trace.objective_values.push_back(cache.sigma);
    }
    return trace;
}

GreedyTrace greedy_dsir(const DsirSystem& sys, const EdgeSet& candidates, int k)
{
    std::vector<std::vector<EdgeId>> groups;
    groups.reserve(candidates.size());
    for (EdgeId id : candidates)
        groups.push_back({id});
    GreedyTrace trace = greedy_dsir_grouped(sys, groups, k);
    for (EdgeId& c : trace.chosen)
        c = candidates.ids()[c];
    return trace;
}

} // namespace epimit
