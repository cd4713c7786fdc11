#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "epimit/dsir.hpp"
#include "epimit/experiment.hpp"
#include "epimit/graph.hpp"
#include "epimit/gsir.hpp"
#include "epimit/icsir.hpp"
#include "epimit/optimize.hpp"
#include "epimit/system_io.hpp"

namespace py = pybind11;
using namespace epimit;

namespace {

EdgeSet to_edge_set(const std::vector<EdgeId>& ids)
{
    return EdgeSet(ids);
}

std::vector<std::vector<double>> matrix_rows(const Matrix& m)
{
    std::vector<std::vector<double>> rows(m.rows(), std::vector<double>(m.cols()));
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            rows[i][j] = m(i, j);
    return rows;
}

} // namespace

PYBIND11_MODULE(_epimit, m)
{
    m.doc() = "Budgeted edge deletion for epidemic mitigation on contact networks";

    py::register_exception<EstimatorUnavailable>(m, "EstimatorUnavailable");
    py::register_exception<ConfigError>(m, "ConfigurationError");

    py::class_<Edge>(m, "Edge")
        .def_readonly("u", &Edge::u)
        .def_readonly("v", &Edge::v)
        .def("__repr__", [](const Edge& e) {
            return "Edge(" + std::to_string(e.u) + ", " + std::to_string(e.v) + ")";
        });

    py::class_<Graph>(m, "Graph")
        .def(py::init<int, bool>(), py::arg("n"), py::arg("directed") = false)
        .def_property_readonly("n", &Graph::vertex_count)
        .def_property_readonly("directed", &Graph::directed)
        .def("add_edge", &Graph::add_edge, py::arg("u"), py::arg("v"))
        .def("edge_count", &Graph::edge_count)
        .def("has_edge", &Graph::has_edge)
        .def("degree", &Graph::degree)
        .def("edges",
             [](const Graph& g) {
                 std::vector<std::pair<VertexId, VertexId>> out;
                 for (const Edge& e : g.edges())
                     out.emplace_back(e.u, e.v);
                 return out;
             })
        .def("edge_ids", [](const Graph& g) { return g.edge_ids(); })
        .def("__eq__", [](const Graph& a, const Graph& b) { return a == b; })
        .def("__repr__", [](const Graph& g) {
            return "Graph(n=" + std::to_string(g.vertex_count()) +
                   ", edges=" + std::to_string(g.edge_count()) +
                   (g.directed() ? ", directed)" : ")");
        });

    py::class_<ComponentInfo>(m, "ComponentInfo")
        .def_readonly("size", &ComponentInfo::size)
        .def_readonly("edge_count", &ComponentInfo::edge_count)
        .def_readonly("is_tree", &ComponentInfo::is_tree)
        .def_readonly("vertices", &ComponentInfo::vertices);

    py::class_<ComponentAnalysis>(m, "ComponentAnalysis")
        .def_readonly("component", &ComponentAnalysis::component)
        .def_readonly("components", &ComponentAnalysis::components)
        .def_readonly("bridges", &ComponentAnalysis::bridges)
        .def("component_count", &ComponentAnalysis::component_count);

    m.def(
        "analyze",
        [](const Graph& g, const std::vector<EdgeId>& deleted) {
            return analyze(g, to_edge_set(deleted));
        },
        py::arg("graph"), py::arg("deleted") = std::vector<EdgeId>{});
    m.def(
        "delete_edges",
        [](const Graph& g, const std::vector<EdgeId>& removed) {
            return delete_edges(g, to_edge_set(removed));
        },
        py::arg("graph"), py::arg("removed"));
    m.def(
        "reachable_count",
        [](const Graph& g, const std::vector<EdgeId>& deleted,
           const std::vector<VertexId>& sources) {
            return count_reachable(g, to_edge_set(deleted), sources);
        },
        py::arg("graph"), py::arg("deleted"), py::arg("sources"));

    m.def("gen_er", &gen_er, py::arg("n"), py::arg("p"), py::arg("seed"));
    m.def("gen_sbm", &gen_sbm, py::arg("block_size"), py::arg("kappa"), py::arg("q"),
          py::arg("seed"));
    m.def("perturb_adversarial", &perturb_adversarial, py::arg("graph"), py::arg("num_adv"),
          py::arg("nu"), py::arg("seed"));

    m.def("load_edge_list", [](const std::string& path) {
        EdgeListData data = load_edge_list(path);
        return py::make_tuple(data.graph, data.weights);
    });
    m.def(
        "save_edge_list",
        [](const Graph& g, const std::string& path, const std::vector<double>& weights) {
            save_edge_list(g, path, weights);
        },
        py::arg("graph"), py::arg("path"), py::arg("weights") = std::vector<double>{});

    m.def(
        "degree_cap_preprocess",
        [](const Graph& g, int max_deg) {
            DegreeCapResult res = degree_cap_preprocess(g, max_deg);
            return py::make_tuple(res.graph, res.removed.ids());
        },
        py::arg("graph"), py::arg("max_deg"));

    py::class_<HardnessInstance>(m, "HardnessInstance")
        .def_readonly("graph", &HardnessInstance::graph)
        .def_readonly("seeds", &HardnessInstance::seeds)
        .def_readonly("budget", &HardnessInstance::budget)
        .def_readonly("threshold", &HardnessInstance::threshold)
        .def_property_readonly("candidates",
                               [](const HardnessInstance& h) { return h.candidates.ids(); });
    m.def("build_hardness_instance", &build_hardness_instance, py::arg("graph"),
          py::arg("bisection_size"));

    // ---- deterministic mean-field model

    py::class_<DsirSystem>(m, "DsirSystem")
        .def_readonly("g", &DsirSystem::g)
        .def_readonly("rate", &DsirSystem::rate)
        .def_readonly("heal", &DsirSystem::heal)
        .def_readonly("x0", &DsirSystem::x0)
        .def_readonly("r0", &DsirSystem::r0);
    m.def("make_dsir_system", &make_dsir_system, py::arg("graph"), py::arg("rate"),
          py::arg("heal"), py::arg("x0"), py::arg("r0"));

    py::class_<SigmaResult>(m, "SigmaResult")
        .def_readonly("sigma", &SigmaResult::sigma)
        .def_readonly("converged", &SigmaResult::converged)
        .def_readonly("steps", &SigmaResult::steps);
    py::class_<StabilityResult>(m, "StabilityResult")
        .def_readonly("stable", &StabilityResult::stable)
        .def_readonly("epsilon", &StabilityResult::epsilon);

    m.def(
        "simulate_sigma",
        [](const DsirSystem& sys, const std::vector<EdgeId>& deleted, double tol, int t_max) {
            return simulate_sigma(sys, to_edge_set(deleted), tol, t_max);
        },
        py::arg("system"), py::arg("deleted") = std::vector<EdgeId>{}, py::arg("tol") = 1e-10,
        py::arg("t_max") = 100000);
    m.def(
        "sigma_hat",
        [](const DsirSystem& sys, const std::vector<EdgeId>& deleted) {
            return sigma_hat(sys, to_edge_set(deleted));
        },
        py::arg("system"), py::arg("deleted") = std::vector<EdgeId>{});
    m.def("check_stability", &check_stability, py::arg("system"));
    m.def(
        "transition_matrix",
        [](const DsirSystem& sys, const std::vector<EdgeId>& deleted) {
            return matrix_rows(transition_matrix(sys, to_edge_set(deleted)));
        },
        py::arg("system"), py::arg("deleted") = std::vector<EdgeId>{});

    py::class_<GreedyTrace>(m, "GreedyTrace")
        .def_readonly("chosen", &GreedyTrace::chosen)
        .def_readonly("objective_values", &GreedyTrace::objective_values)
        .def_readonly("gains", &GreedyTrace::gains)
        .def_readonly("objective_name", &GreedyTrace::objective_name)
        .def_readonly("seed", &GreedyTrace::seed)
        .def_readonly("rounds", &GreedyTrace::rounds)
        .def_readonly("guaranteed", &GreedyTrace::guaranteed)
        .def_readonly("oracle_calls", &GreedyTrace::oracle_calls)
        .def("chosen_set", [](const GreedyTrace& t, int k) { return t.chosen_set(k).ids(); },
             py::arg("k") = -1);

    m.def(
        "greedy_dsir",
        [](const DsirSystem& sys, const std::vector<EdgeId>& candidates, int k) {
            return greedy_dsir(sys, to_edge_set(candidates), k);
        },
        py::arg("system"), py::arg("candidates"), py::arg("k"));
    m.def("greedy_dsir_grouped", &greedy_dsir_grouped, py::arg("system"), py::arg("groups"),
          py::arg("k"));

    // ---- independent cascade model

    py::class_<IcInstance>(m, "IcInstance")
        .def_readonly("g", &IcInstance::g)
        .def_readonly("p", &IcInstance::p)
        .def_readonly("seeds", &IcInstance::seeds)
        .def_property_readonly("candidates",
                               [](const IcInstance& inst) { return inst.candidates.ids(); });
    m.def(
        "make_ic_instance",
        [](Graph g, std::vector<double> p, std::vector<VertexId> seeds,
           const std::vector<EdgeId>& candidates) {
            return make_ic_instance(std::move(g), std::move(p), std::move(seeds),
                                    to_edge_set(candidates));
        },
        py::arg("graph"), py::arg("p"), py::arg("seeds"),
        py::arg("candidates") = std::vector<EdgeId>{});

    py::class_<EstimatorConfig>(m, "EstimatorConfig")
        .def(py::init([](double epsilon, long rounds, std::uint64_t seed, double d_end,
                         int max_retries) {
                 EstimatorConfig cfg;
                 cfg.epsilon = epsilon;
                 cfg.rounds = rounds;
                 cfg.seed = seed;
                 cfg.d_end = d_end;
                 cfg.max_retries = max_retries;
                 return cfg;
             }),
             py::arg("epsilon") = 0.1, py::arg("rounds") = 0, py::arg("seed") = 0,
             py::arg("d_end") = -1.0, py::arg("max_retries") = 100)
        .def_readwrite("epsilon", &EstimatorConfig::epsilon)
        .def_readwrite("rounds", &EstimatorConfig::rounds)
        .def_readwrite("seed", &EstimatorConfig::seed)
        .def_readwrite("d_end", &EstimatorConfig::d_end)
        .def_readwrite("max_retries", &EstimatorConfig::max_retries)
        .def("resolved_rounds", &EstimatorConfig::resolved_rounds);

    py::class_<Estimate>(m, "Estimate")
        .def_readonly("mean", &Estimate::mean)
        .def_readonly("half_width", &Estimate::half_width)
        .def_readonly("rounds", &Estimate::rounds)
        .def_readonly("successes", &Estimate::successes)
        .def_readonly("resamples", &Estimate::resamples);

    m.def(
        "cascade",
        [](const IcInstance& inst, const std::vector<EdgeId>& deleted, std::uint64_t seed) {
            Rng rng(seed);
            return cascade(inst, to_edge_set(deleted), rng);
        },
        py::arg("instance"), py::arg("deleted"), py::arg("seed"));
    m.def(
        "estimate_sigma",
        [](const IcInstance& inst, const std::vector<EdgeId>& deleted,
           const EstimatorConfig& cfg) { return estimate_sigma(inst, to_edge_set(deleted), cfg); },
        py::arg("instance"), py::arg("deleted"), py::arg("config"));
    m.def(
        "estimate_sigma_prime",
        [](const IcInstance& inst, const std::vector<EdgeId>& deleted,
           const EstimatorConfig& cfg) {
            return estimate_sigma_prime(inst, to_edge_set(deleted), cfg);
        },
        py::arg("instance"), py::arg("deleted"), py::arg("config"));
    m.def(
        "brute_force_expected_sigma",
        [](const IcInstance& inst, const std::vector<EdgeId>& deleted) {
            return brute_force_expected_sigma(inst, to_edge_set(deleted));
        },
        py::arg("instance"), py::arg("deleted") = std::vector<EdgeId>{});

    py::enum_<IcObjective>(m, "IcObjective")
        .value("SIGMA", IcObjective::Sigma)
        .value("SIGMA_PRIME", IcObjective::SigmaPrime);
    m.def("greedy_icsir", &greedy_icsir, py::arg("instance"), py::arg("k"), py::arg("config"),
          py::arg("objective") = IcObjective::Sigma);

    m.def("rates_to_activation", &rates_to_activation, py::arg("infection_rate"),
          py::arg("healing_rate"));
    m.def("compute_L", &compute_L, py::arg("d_end"), py::arg("n"));
    m.def("compute_L_star", &compute_L_star, py::arg("d_end"), py::arg("n"), py::arg("kappa"));
    m.def("compute_m_bin", &compute_m_bin, py::arg("d_init"), py::arg("d_end"));
    m.def("max_expected_degree", &max_expected_degree, py::arg("instance"));

    // ---- Markov-chain ground truth

    py::class_<GsirParams>(m, "GsirParams");
    m.def("make_gsir_params", &make_gsir_params, py::arg("graph"), py::arg("infect_mean"),
          py::arg("heal_mean"), py::arg("init_infected"), py::arg("init_removed"));
    m.def("make_gsir_params_bernoulli", &make_gsir_params_bernoulli, py::arg("graph"),
          py::arg("infect_mean"), py::arg("heal_mean"), py::arg("x0"), py::arg("r0"));
    py::class_<GsirEstimate>(m, "GsirEstimate")
        .def_readonly("mean", &GsirEstimate::mean)
        .def_readonly("half_width", &GsirEstimate::half_width)
        .def_readonly("reps", &GsirEstimate::reps);
    m.def(
        "gsir_simulate_once",
        [](const GsirParams& params, const std::vector<EdgeId>& deleted, std::uint64_t seed) {
            Rng rng(seed);
            return simulate_once(params, to_edge_set(deleted), rng);
        },
        py::arg("params"), py::arg("deleted"), py::arg("seed"));
    m.def(
        "estimate_infections",
        [](const GsirParams& params, const std::vector<EdgeId>& deleted, long reps,
           std::uint64_t seed) { return estimate_infections(params, to_edge_set(deleted), reps, seed); },
        py::arg("params"), py::arg("deleted"), py::arg("reps"), py::arg("seed"));

    // ---- generic optimization helpers

    m.def(
        "greedy",
        [](const std::function<double(std::vector<EdgeId>)>& f,
           const std::vector<EdgeId>& candidates, int k) {
            return greedy([&](const EdgeSet& p) { return f(p.ids()); }, to_edge_set(candidates),
                          k);
        },
        py::arg("f"), py::arg("candidates"), py::arg("k"));
    m.def(
        "max_degree_baseline",
        [](const Graph& g, const std::vector<EdgeId>& candidates, int k) {
            return max_degree_baseline(g, to_edge_set(candidates), k);
        },
        py::arg("graph"), py::arg("candidates"), py::arg("k"));
    m.def(
        "random_baseline",
        [](const std::vector<EdgeId>& candidates, int k, std::uint64_t seed) {
            return random_baseline(to_edge_set(candidates), k, seed);
        },
        py::arg("candidates"), py::arg("k"), py::arg("seed"));
    m.def(
        "brute_force_opt",
        [](const std::function<double(std::vector<EdgeId>)>& f,
           const std::vector<EdgeId>& candidates, int k, long max_subsets) {
            BruteForceResult res = brute_force_opt([&](const EdgeSet& p) { return f(p.ids()); },
                                                   to_edge_set(candidates), k, max_subsets);
            return py::make_tuple(res.best.ids(), res.value);
        },
        py::arg("f"), py::arg("candidates"), py::arg("k"), py::arg("max_subsets") = 1000000L);
    m.def(
        "check_supermodular",
        [](const std::function<double(std::vector<EdgeId>)>& f,
           const std::vector<EdgeId>& candidates, double tol) {
            SupermodularityReport rep = check_supermodular(
                [&](const EdgeSet& p) { return f(p.ids()); }, to_edge_set(candidates), tol);
            py::dict out;
            out["supermodular"] = rep.supermodular;
            out["monotone"] = rep.monotone;
            out["ok"] = rep.ok();
            return out;
        },
        py::arg("f"), py::arg("candidates"), py::arg("tol") = 1e-9);

    // ---- experiment harness

    m.def(
        "run_experiment",
        [](const std::string& config_json) {
            ExperimentConfig cfg = parse_experiment_config(config_json);
            return csv_string(cfg, run_experiment(cfg));
        },
        py::arg("config_json"),
        "Run a config-driven experiment (JSON text) and return the CSV result");
    m.def(
        "load_dsir_system",
        [](const std::string& path) {
            SystemFile file = load_dsir_system(path);
            return py::make_tuple(file.system, file.candidates.ids());
        },
        py::arg("path"));
    m.def(
        "save_dsir_system",
        [](const std::string& path, const DsirSystem& sys, const std::vector<EdgeId>& candidates) {
            save_dsir_system(path, sys, to_edge_set(candidates));
        },
        py::arg("path"), py::arg("system"), py::arg("candidates") = std::vector<EdgeId>{});
}
