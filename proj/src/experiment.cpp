#include "epimit/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "epimit/dsir.hpp"
#include "epimit/gsir.hpp"
#include "epimit/icsir.hpp"
#include "epimit/parallel.hpp"

namespace epimit {

using nlohmann::json;

namespace {

const std::vector<std::string> kKnownAlgorithms{
    "greedy-dsir", "greedy-ic-sigma", "greedy-ic-sigma-prime", "max-degree", "random"};
const std::vector<std::string> kKnownMetrics{"dsir-sigma", "dsir-sigma-hat", "ic-estimate",
                                             "gsir-estimate"};

bool known(const std::vector<std::string>& pool, const std::string& name)
{
    return std::find(pool.begin(), pool.end(), name) != pool.end();
}

std::string join_problems(const std::vector<std::string>& problems)
{
    std::string out = "invalid experiment config:";
    for (const auto& p : problems)
        out += "\n  - " + p;
    return out;
}

} // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::runtime_error(join_problems(problems)), problems_(std::move(problems))
{
}

ExperimentConfig parse_experiment_config(const std::string& json_text)
{
    std::vector<std::string> problems;
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError({std::string("document: ") + e.what()});
    }
    if (!doc.is_object())
        throw ConfigError({"document: top level must be an object"});

    ExperimentConfig cfg;
    auto problem = [&](const std::string& path, const std::string& what) {
        problems.push_back(path + ": " + what);
    };

    cfg.schema_version = doc.value("schema_version", 0);
    if (cfg.schema_version != 1)
        problem("schema_version", "must be 1");

    cfg.experiment_id = doc.value("experiment_id", std::string{});
    if (cfg.experiment_id.empty())
        problem("experiment_id", "required non-empty string");
    else if (cfg.experiment_id.find(',') != std::string::npos)
        problem("experiment_id", "must not contain commas");

    if (!doc.contains("seed") || !doc["seed"].is_number_unsigned())
        problem("seed", "required unsigned integer");
    else
        cfg.seed = doc["seed"].get<std::uint64_t>();

    // network
    if (!doc.contains("network") || !doc["network"].is_object()) {
        problem("network", "required object");
    } else {
        const json& net = doc["network"];
        const std::string kind = net.value("kind", std::string{});
        if (kind == "er") {
            cfg.network.kind = NetworkSpec::Kind::Er;
            cfg.network.n = net.value("n", 0);
            cfg.network.p = net.value("p", -1.0);
            if (cfg.network.n < 1)
                problem("network.n", "must be at least 1");
            if (cfg.network.p < 0.0 || cfg.network.p > 1.0)
                problem("network.p", "must be in [0,1]");
        } else if (kind == "sbm") {
            cfg.network.kind = NetworkSpec::Kind::Sbm;
            cfg.network.block_size = net.value("block_size", 0);
            cfg.network.kappa = net.value("kappa", 0);
            cfg.network.q_diag = net.value("q_diag", -1.0);
            cfg.network.q_off = net.value("q_off", -1.0);
            if (cfg.network.block_size < 1)
                problem("network.block_size", "must be at least 1");
            if (cfg.network.kappa < 1)
                problem("network.kappa", "must be at least 1");
            if (cfg.network.q_diag < 0.0 || cfg.network.q_diag > 1.0)
                problem("network.q_diag", "must be in [0,1]");
            if (cfg.network.q_off < 0.0 || cfg.network.q_off > 1.0)
                problem("network.q_off", "must be in [0,1]");
        } else if (kind == "edge_list") {
            cfg.network.kind = NetworkSpec::Kind::EdgeList;
            cfg.network.path = net.value("path", std::string{});
            if (cfg.network.path.empty())
                problem("network.path", "required for edge_list networks");
        } else {
            problem("network.kind", "must be one of er, sbm, edge_list");
        }
    }

    if (doc.contains("degree_cap")) {
        int cap = doc["degree_cap"].get<int>();
        if (cap < 0)
            problem("degree_cap", "must be non-negative");
        else
            cfg.degree_cap = cap;
    }

    if (doc.contains("rates")) {
        const json& r = doc["rates"];
        cfg.rates.infection_min = r.value("infection_min", -1.0);
        cfg.rates.infection_max = r.value("infection_max", -1.0);
        cfg.rates.healing_min = r.value("healing_min", -1.0);
        cfg.rates.healing_max = r.value("healing_max", -1.0);
        if (!(cfg.rates.infection_min >= 0.0) || cfg.rates.infection_max < cfg.rates.infection_min ||
            cfg.rates.infection_max > 1.0)
            problem("rates.infection_min/max", "need 0 <= min <= max <= 1");
        if (!(cfg.rates.healing_min >= 0.0) || cfg.rates.healing_max < cfg.rates.healing_min ||
            cfg.rates.healing_max >= 1.0)
            problem("rates.healing_min/max", "need 0 <= min <= max < 1");
    }

    if (doc.contains("activation")) {
        const json& a = doc["activation"];
        const std::string mode = a.value("mode", std::string{});
        if (mode == "from_rates") {
            cfg.activation.mode = ActivationSpec::Mode::FromRates;
        } else if (mode == "fixed") {
            cfg.activation.mode = ActivationSpec::Mode::Fixed;
            cfg.activation.p = a.value("p", -1.0);
            if (cfg.activation.p < 0.0 || cfg.activation.p > 1.0)
                problem("activation.p", "must be in [0,1]");
        } else if (mode == "from_file") {
            cfg.activation.mode = ActivationSpec::Mode::FromFile;
            if (cfg.network.kind != NetworkSpec::Kind::EdgeList)
                problem("activation.mode", "from_file requires an edge_list network");
        } else {
            problem("activation.mode", "must be one of from_rates, fixed, from_file");
        }
    }
    if (cfg.activation.mode == ActivationSpec::Mode::FromRates && !doc.contains("rates"))
        problem("rates", "required when activation.mode is from_rates");

    if (!doc.contains("seeds") || !doc["seeds"].is_object()) {
        problem("seeds", "required object");
    } else {
        const json& s = doc["seeds"];
        const std::string mode = s.value("mode", std::string{});
        if (mode == "uniform") {
            cfg.seeds.mode = SeedSpec::Mode::Uniform;
            cfg.seeds.count = s.value("count", 0);
            if (cfg.seeds.count < 1)
                problem("seeds.count", "must be at least 1");
        } else if (mode == "fixed") {
            cfg.seeds.mode = SeedSpec::Mode::Fixed;
            if (!s.contains("vertices") || !s["vertices"].is_array() || s["vertices"].empty())
                problem("seeds.vertices", "required non-empty array");
            else
                cfg.seeds.vertices = s["vertices"].get<std::vector<VertexId>>();
        } else if (mode == "bernoulli") {
            cfg.seeds.mode = SeedSpec::Mode::Bernoulli;
            if (s.contains("means"))
                cfg.seeds.means = s["means"].get<std::vector<double>>();
            else
                cfg.seeds.mean = s.value("mean", -1.0);
            if (!s.contains("means") && (cfg.seeds.mean < 0.0 || cfg.seeds.mean > 1.0))
                problem("seeds.mean", "must be in [0,1]");
            for (double m : cfg.seeds.means)
                if (m < 0.0 || m > 1.0) {
                    problem("seeds.means", "entries must be in [0,1]");
                    break;
                }
        } else {
            problem("seeds.mode", "must be one of uniform, fixed, bernoulli");
        }
    }

    if (doc.contains("initial")) {
        const json& i = doc["initial"];
        cfg.initial.x0_min = i.value("x0_min", 0.0);
        cfg.initial.x0_max = i.value("x0_max", cfg.initial.x0_min);
        cfg.initial.r0_min = i.value("r0_min", 0.0);
        cfg.initial.r0_max = i.value("r0_max", cfg.initial.r0_min);
        if (!(cfg.initial.x0_min >= 0.0) || cfg.initial.x0_max < cfg.initial.x0_min ||
            cfg.initial.x0_max > 1.0)
            problem("initial.x0_min/max", "need 0 <= min <= max <= 1");
        if (!(cfg.initial.r0_min >= 0.0) || cfg.initial.r0_max < cfg.initial.r0_min ||
            cfg.initial.r0_max > 1.0)
            problem("initial.r0_min/max", "need 0 <= min <= max <= 1");
        if (cfg.initial.x0_max + cfg.initial.r0_max > 1.0)
            problem("initial", "x0_max + r0_max must not exceed 1");
    }

    if (!doc.contains("candidates") || !doc["candidates"].is_object()) {
        problem("candidates", "required object with fraction or ids");
    } else {
        const json& c = doc["candidates"];
        if (c.contains("ids")) {
            cfg.candidates.explicit_ids = true;
            cfg.candidates.ids = c["ids"].get<std::vector<EdgeId>>();
        } else {
            cfg.candidates.fraction = c.value("fraction", -1.0);
            if (cfg.candidates.fraction < 0.0 || cfg.candidates.fraction > 1.0)
                problem("candidates.fraction", "must be in [0,1]");
        }
    }

    if (!doc.contains("budgets") || !doc["budgets"].is_array() || doc["budgets"].empty()) {
        problem("budgets", "required non-empty array");
    } else {
        cfg.budgets = doc["budgets"].get<std::vector<int>>();
        for (std::size_t i = 0; i < cfg.budgets.size(); ++i)
            if (cfg.budgets[i] < 0)
                problem("budgets[" + std::to_string(i) + "]", "must be non-negative");
    }

    if (!doc.contains("algorithms") || !doc["algorithms"].is_array() || doc["algorithms"].empty()) {
        problem("algorithms", "required non-empty array");
    } else {
        cfg.algorithms = doc["algorithms"].get<std::vector<std::string>>();
        std::set<std::string> seen;
        for (std::size_t i = 0; i < cfg.algorithms.size(); ++i) {
            if (!known(kKnownAlgorithms, cfg.algorithms[i]))
                problem("algorithms[" + std::to_string(i) + "]",
                        "unknown algorithm '" + cfg.algorithms[i] + "'");
            if (!seen.insert(cfg.algorithms[i]).second)
                problem("algorithms[" + std::to_string(i) + "]",
                        "duplicate algorithm '" + cfg.algorithms[i] + "'");
        }
    }

    if (doc.contains("estimator")) {
        cfg.estimator.epsilon = doc["estimator"].value("epsilon", 0.1);
        cfg.estimator.rounds = doc["estimator"].value("rounds", 0L);
        cfg.estimator.d_end = doc["estimator"].value("d_end", -1.0);
        if (!(cfg.estimator.epsilon > 0.0))
            problem("estimator.epsilon", "must be positive");
        if (cfg.estimator.rounds < 0)
            problem("estimator.rounds", "must be non-negative");
        if (doc["estimator"].contains("d_end") && cfg.estimator.d_end >= 1.0)
            problem("estimator.d_end", "must be below 1");
    }

    if (!doc.contains("evaluate") || !doc["evaluate"].is_array() || doc["evaluate"].empty()) {
        problem("evaluate", "required non-empty array");
    } else {
        cfg.evaluate = doc["evaluate"].get<std::vector<std::string>>();
        std::set<std::string> seen;
        for (std::size_t i = 0; i < cfg.evaluate.size(); ++i) {
            if (!known(kKnownMetrics, cfg.evaluate[i]))
                problem("evaluate[" + std::to_string(i) + "]",
                        "unknown metric '" + cfg.evaluate[i] + "'");
            if (!seen.insert(cfg.evaluate[i]).second)
                problem("evaluate[" + std::to_string(i) + "]",
                        "duplicate metric '" + cfg.evaluate[i] + "'");
        }
    }

    cfg.gsir_reps = doc.value("gsir_reps", 2000L);
    if (cfg.gsir_reps < 1)
        problem("gsir_reps", "must be at least 1");
    cfg.paired_directions = doc.value("paired_directions", true);

    const bool needs_rates =
        doc.contains("algorithms") && doc["algorithms"].is_array() &&
        (known(cfg.algorithms, "greedy-dsir") || known(cfg.evaluate, "dsir-sigma") ||
         known(cfg.evaluate, "dsir-sigma-hat") || known(cfg.evaluate, "gsir-estimate"));
    if (needs_rates && !doc.contains("rates"))
        problem("rates", "required by the configured algorithms or metrics");

    if (!problems.empty())
        throw ConfigError(std::move(problems));
    return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError({"file: cannot open " + path});
    std::stringstream buffer;
    buffer << in.rdbuf();
    ExperimentConfig cfg = parse_experiment_config(buffer.str());
    if (cfg.network.kind == NetworkSpec::Kind::EdgeList) {
        std::filesystem::path p(cfg.network.path);
        if (p.is_relative())
            cfg.network.path = (std::filesystem::path(path).parent_path() / p).string();
    }
    return cfg;
}

namespace {

// Everything derived from the config before any algorithm runs.
struct Prepared {
    Graph contact;
    EdgeSet candidates;               // contact edge ids
    std::vector<VertexId> seed_set;
    std::vector<double> x0, r0;       // per vertex
    std::vector<double> rate_fwd;     // per contact edge: u -> v
    std::vector<double> rate_bwd;     // per contact edge: v -> u
    std::vector<double> heal;
    std::vector<double> activation;   // per contact edge
    bool have_rates = false;

    bool need_dsir = false;
    bool need_ic = false;
    bool need_gsir = false;

    DsirSystem dsir;      // directed expansion, edge ids 2c and 2c+1
    IcInstance ic;
    GsirParams gsir;
};

std::vector<EdgeId> directed_ids(const EdgeSet& contacts)
{
    std::vector<EdgeId> out;
    out.reserve(contacts.size() * 2);
    for (EdgeId c : contacts) {
        out.push_back(2 * c);
        out.push_back(2 * c + 1);
    }
    return out;
}

Prepared prepare(const ExperimentConfig& cfg)
{
    Prepared prep;

    // contact network
    switch (cfg.network.kind) {
    case NetworkSpec::Kind::Er:
        prep.contact = gen_er(cfg.network.n, cfg.network.p, derive_seed(cfg.seed, "network"));
        break;
    case NetworkSpec::Kind::Sbm: {
        std::vector<std::vector<double>> q(cfg.network.kappa,
                                           std::vector<double>(cfg.network.kappa, cfg.network.q_off));
        for (int i = 0; i < cfg.network.kappa; ++i)
            q[i][i] = cfg.network.q_diag;
        prep.contact = gen_sbm(cfg.network.block_size, cfg.network.kappa, q,
                               derive_seed(cfg.seed, "network"));
        break;
    }
    case NetworkSpec::Kind::EdgeList: {
        EdgeListData data = load_edge_list(cfg.network.path);
        if (cfg.activation.mode == ActivationSpec::Mode::FromFile) {
            if (data.weights.empty())
                throw ConfigError({"activation.mode: from_file requires a weighted edge list"});
            prep.activation = data.weights;
        }
        prep.contact = std::move(data.graph);
        break;
    }
    }

    std::vector<double> file_activation = prep.activation;
    if (cfg.degree_cap) {
        DegreeCapResult capped = degree_cap_preprocess(prep.contact, *cfg.degree_cap);
        // re-densify ids so the directed expansion stays contiguous
        Graph dense(capped.graph.vertex_count(), false);
        std::vector<double> kept;
        const auto edges = capped.graph.edges();
        const auto& old_ids = capped.graph.edge_ids();
        for (std::size_t i = 0; i < edges.size(); ++i) {
            dense.add_edge(edges[i].u, edges[i].v);
            if (!file_activation.empty())
                kept.push_back(file_activation[old_ids[i]]);
        }
        prep.contact = std::move(dense);
        prep.activation = std::move(kept);
    }

    const int n = prep.contact.vertex_count();
    const int m = prep.contact.edge_count();
    std::vector<std::string> late_problems;

    // rates (single stream so the draw does not depend on which models run)
    prep.have_rates = cfg.rates.infection_max > 0.0 || cfg.rates.healing_max > 0.0;
    prep.heal.assign(n, 0.0);
    prep.rate_fwd.assign(m, 0.0);
    prep.rate_bwd.assign(m, 0.0);
    if (prep.have_rates) {
        Rng rng(derive_seed(cfg.seed, "rates"));
        for (EdgeId c = 0; c < m; ++c) {
            prep.rate_fwd[c] = rng.uniform(cfg.rates.infection_min, cfg.rates.infection_max);
            prep.rate_bwd[c] = rng.uniform(cfg.rates.infection_min, cfg.rates.infection_max);
        }
        for (int v = 0; v < n; ++v)
            prep.heal[v] = rng.uniform(cfg.rates.healing_min, cfg.rates.healing_max);
    }

    // seed set
    {
        Rng rng(derive_seed(cfg.seed, "seeds"));
        switch (cfg.seeds.mode) {
        case SeedSpec::Mode::Uniform: {
            if (cfg.seeds.count > n)
                late_problems.push_back("seeds.count: exceeds the vertex count");
            else {
                std::vector<VertexId> pool(n);
                for (int v = 0; v < n; ++v)
                    pool[v] = v;
                for (int i = 0; i < cfg.seeds.count; ++i)
                    std::swap(pool[i], pool[i + rng.next_below(n - i)]);
                prep.seed_set.assign(pool.begin(), pool.begin() + cfg.seeds.count);
                std::sort(prep.seed_set.begin(), prep.seed_set.end());
            }
            break;
        }
        case SeedSpec::Mode::Fixed:
            prep.seed_set = cfg.seeds.vertices;
            std::sort(prep.seed_set.begin(), prep.seed_set.end());
            for (VertexId v : prep.seed_set)
                if (v < 0 || v >= n)
                    late_problems.push_back("seeds.vertices: vertex " + std::to_string(v) +
                                            " out of range");
            break;
        case SeedSpec::Mode::Bernoulli: {
            if (!cfg.seeds.means.empty() && static_cast<int>(cfg.seeds.means.size()) != n)
                late_problems.push_back("seeds.means: length must equal the vertex count");
            else
                for (int v = 0; v < n; ++v) {
                    double mu = cfg.seeds.means.empty() ? cfg.seeds.mean : cfg.seeds.means[v];
                    if (rng.bernoulli(mu))
                        prep.seed_set.push_back(v);
                }
            if (prep.seed_set.empty())
                prep.seed_set.push_back(static_cast<VertexId>(rng.next_below(n)));
            break;
        }
        }
    }

    // initial probabilities
    {
        Rng rng(derive_seed(cfg.seed, "initial"));
        prep.x0.assign(n, 0.0);
        prep.r0.assign(n, 0.0);
        for (VertexId s : prep.seed_set)
            prep.x0[s] = rng.uniform(cfg.initial.x0_min, cfg.initial.x0_max);
        for (int v = 0; v < n; ++v)
            prep.r0[v] = rng.uniform(cfg.initial.r0_min, cfg.initial.r0_max);
        for (int v = 0; v < n; ++v)
            prep.r0[v] = std::min(prep.r0[v], 1.0 - prep.x0[v]);
    }

    // candidate contact edges
    if (cfg.candidates.explicit_ids) {
        for (EdgeId e : cfg.candidates.ids)
            if (e < 0 || e >= m)
                late_problems.push_back("candidates.ids: edge " + std::to_string(e) +
                                        " out of range");
        prep.candidates = EdgeSet(cfg.candidates.ids);
    } else {
        Rng rng(derive_seed(cfg.seed, "candidates"));
        const int want = static_cast<int>(std::lround(cfg.candidates.fraction * m));
        std::vector<EdgeId> pool(m);
        for (EdgeId e = 0; e < m; ++e)
            pool[e] = e;
        for (int i = 0; i < want; ++i)
            std::swap(pool[i], pool[i + rng.next_below(m - i)]);
        pool.resize(want);
        prep.candidates = EdgeSet(std::move(pool));
    }

    for (int k : cfg.budgets)
        if (k > static_cast<int>(prep.candidates.size()))
            late_problems.push_back("budgets: " + std::to_string(k) +
                                    " exceeds the candidate count " +
                                    std::to_string(prep.candidates.size()));
    if (!late_problems.empty())
        throw ConfigError(std::move(late_problems));

    prep.need_dsir = known(cfg.algorithms, "greedy-dsir") || known(cfg.evaluate, "dsir-sigma") ||
                     known(cfg.evaluate, "dsir-sigma-hat");
    prep.need_ic = known(cfg.algorithms, "greedy-ic-sigma") ||
                   known(cfg.algorithms, "greedy-ic-sigma-prime") ||
                   known(cfg.evaluate, "ic-estimate");
    prep.need_gsir = known(cfg.evaluate, "gsir-estimate");

    // per-contact activation probabilities
    if (prep.need_ic) {
        switch (cfg.activation.mode) {
        case ActivationSpec::Mode::Fixed:
            prep.activation.assign(m, cfg.activation.p);
            break;
        case ActivationSpec::Mode::FromRates: {
            prep.activation.assign(m, 0.0);
            for (EdgeId c = 0; c < m; ++c) {
                const Edge& e = prep.contact.edge(c);
                double fwd = rates_to_activation(prep.rate_fwd[c], prep.heal[e.v]);
                double bwd = rates_to_activation(prep.rate_bwd[c], prep.heal[e.u]);
                prep.activation[c] = 0.5 * (fwd + bwd);
            }
            break;
        }
        case ActivationSpec::Mode::FromFile:
            if (static_cast<int>(prep.activation.size()) != m)
                throw ConfigError({"activation.mode: edge list does not carry one probability per edge"});
            for (double p : prep.activation)
                if (p < 0.0 || p > 1.0)
                    throw ConfigError({"activation: file probabilities must be in [0,1]"});
            break;
        }
    }

    // directed expansion shared by the D-SIR and G-SIR models
    const bool need_directed = prep.need_dsir || prep.need_gsir;
    if (need_directed) {
        Graph directed(n, true);
        std::vector<double> rate(2 * m, 0.0);
        for (EdgeId c = 0; c < m; ++c) {
            const Edge& e = prep.contact.edge(c);
            directed.add_edge(e.u, e.v); // id 2c
            directed.add_edge(e.v, e.u); // id 2c + 1
            rate[2 * c] = prep.rate_fwd[c];
            rate[2 * c + 1] = prep.rate_bwd[c];
        }
        if (prep.need_gsir)
            prep.gsir = make_gsir_params_bernoulli(directed, rate, prep.heal, prep.x0, prep.r0);
        if (prep.need_dsir)
            prep.dsir = make_dsir_system(std::move(directed), std::move(rate), prep.heal,
                                         prep.x0, prep.r0);
    }
    if (prep.need_ic)
        prep.ic = make_ic_instance(prep.contact, prep.activation, prep.seed_set, prep.candidates);

    return prep;
}

struct AlgoRun {
    std::vector<EdgeId> contact_order;  // deletion order in contact ids
    std::vector<EdgeId> directed_order; // used when paired_directions is off
    bool directed_mode = false;
    std::string error;
};

EdgeSet contact_prefix(const AlgoRun& run, int k)
{
    if (!run.directed_mode)
        return EdgeSet(std::vector<EdgeId>(run.contact_order.begin(),
                                           run.contact_order.begin() + k));
    // directed granularity: a contact counts as deleted only when both of its
    // directions are gone
    std::set<EdgeId> seen;
    std::vector<EdgeId> contacts;
    for (int i = 0; i < k; ++i) {
        EdgeId d = run.directed_order[i];
        EdgeId c = d / 2;
        EdgeId other = (d % 2 == 0) ? d + 1 : d - 1;
        if (seen.count(other))
            contacts.push_back(c);
        seen.insert(d);
    }
    return EdgeSet(std::move(contacts));
}

EdgeSet directed_prefix(const AlgoRun& run, int k)
{
    if (run.directed_mode)
        return EdgeSet(std::vector<EdgeId>(run.directed_order.begin(),
                                           run.directed_order.begin() + k));
    std::vector<EdgeId> ids;
    for (int i = 0; i < k; ++i) {
        ids.push_back(2 * run.contact_order[i]);
        ids.push_back(2 * run.contact_order[i] + 1);
    }
    return EdgeSet(std::move(ids));
}

AlgoRun run_algorithm(const ExperimentConfig& cfg, const Prepared& prep, const std::string& name,
                      int k_max)
{
    AlgoRun run;
    try {
        if (name == "greedy-dsir") {
            if (cfg.paired_directions) {
                std::vector<std::vector<EdgeId>> groups;
                for (EdgeId c : prep.candidates)
                    groups.push_back({2 * c, 2 * c + 1});
                GreedyTrace trace = greedy_dsir_grouped(prep.dsir, groups, k_max);
                for (EdgeId gi : trace.chosen)
                    run.contact_order.push_back(prep.candidates.ids()[gi]);
            } else {
                run.directed_mode = true;
                GreedyTrace trace =
                    greedy_dsir(prep.dsir, EdgeSet(directed_ids(prep.candidates)), k_max);
                run.directed_order = trace.chosen;
            }
        } else if (name == "greedy-ic-sigma" || name == "greedy-ic-sigma-prime") {
            EstimatorConfig est;
            est.epsilon = cfg.estimator.epsilon;
            est.rounds = cfg.estimator.rounds;
            est.d_end = cfg.estimator.d_end;
            est.seed = derive_seed(cfg.seed, "alg", derive_seed(0, name));
            GreedyTrace trace = greedy_icsir(prep.ic, k_max, est,
                                             name == "greedy-ic-sigma" ? IcObjective::Sigma
                                                                       : IcObjective::SigmaPrime);
            run.contact_order = trace.chosen;
        } else if (name == "max-degree") {
            run.contact_order = max_degree_baseline(prep.contact, prep.candidates, k_max).chosen;
        } else if (name == "random") {
            run.contact_order =
                random_baseline(prep.candidates, k_max, derive_seed(cfg.seed, "alg-random")).chosen;
        }
    } catch (const EstimatorUnavailable& e) {
        run.error = e.what();
    }
    return run;
}

} // namespace

std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg)
{
    Prepared prep = prepare(cfg);
    const int k_max = *std::max_element(cfg.budgets.begin(), cfg.budgets.end());

    std::vector<AlgoRun> runs(cfg.algorithms.size());
    parallel_for(0, static_cast<long>(cfg.algorithms.size()), [&](long i) {
        int need = k_max;
        if (cfg.algorithms[i] == "greedy-dsir" && !cfg.paired_directions)
            need = std::min<int>(2 * k_max, 2 * static_cast<int>(prep.candidates.size()));
        runs[i] = run_algorithm(cfg, prep, cfg.algorithms[i], need);
    });

    struct Task {
        std::size_t alg;
        std::size_t budget;
        std::size_t metric;
    };
    std::vector<Task> tasks;
    for (std::size_t a = 0; a < cfg.algorithms.size(); ++a)
        for (std::size_t b = 0; b < cfg.budgets.size(); ++b)
            for (std::size_t mt = 0; mt < cfg.evaluate.size(); ++mt)
                tasks.push_back({a, b, mt});

    std::vector<ResultRow> rows(tasks.size());
    parallel_for(0, static_cast<long>(tasks.size()), [&](long t) {
        const Task& task = tasks[t];
        const std::string& metric = cfg.evaluate[task.metric];
        const int k = cfg.budgets[task.budget];
        const AlgoRun& run = runs[task.alg];
        ResultRow row;
        row.algorithm = cfg.algorithms[task.alg];
        row.k = k;
        row.metric = metric;
        row.seed = derive_seed(cfg.seed, "eval", derive_seed(0, metric),
                               static_cast<std::uint64_t>(k));
        if (!run.error.empty()) {
            row.value = std::nan("");
            row.half_width = std::nan("");
            row.error = run.error;
            rows[t] = std::move(row);
            return;
        }
        try {
            if (metric == "dsir-sigma") {
                SigmaResult res = simulate_sigma(prep.dsir, directed_prefix(run, k));
                if (!res.converged)
                    throw std::runtime_error("dsir-sigma did not converge within the step cap");
                row.value = res.sigma;
            } else if (metric == "dsir-sigma-hat") {
                row.value = sigma_hat(prep.dsir, directed_prefix(run, k));
            } else if (metric == "ic-estimate") {
                EstimatorConfig est;
                est.epsilon = cfg.estimator.epsilon;
                est.rounds = cfg.estimator.rounds;
                est.d_end = cfg.estimator.d_end;
                est.seed = row.seed;
                Estimate e = estimate_sigma(prep.ic, contact_prefix(run, k), est);
                row.value = e.mean;
                row.half_width = e.half_width;
            } else if (metric == "gsir-estimate") {
                GsirEstimate e = estimate_infections(prep.gsir, directed_prefix(run, k),
                                                     cfg.gsir_reps, row.seed);
                row.value = e.mean;
                row.half_width = e.half_width;
            }
        } catch (const std::exception& e) {
            row.value = std::nan("");
            row.half_width = std::nan("");
            row.error = e.what();
        }
        rows[t] = std::move(row);
    });
    return rows;
}

namespace {

std::string format_double(double v)
{
    if (std::isnan(v))
        return "nan";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

} // namespace

void write_csv(std::ostream& out, const ExperimentConfig& cfg, const std::vector<ResultRow>& rows)
{
    out << "experiment_id,algorithm,k,metric,value,half_width,seed\n";
    for (const ResultRow& row : rows) {
        out << cfg.experiment_id << ',' << row.algorithm << ',' << row.k << ',' << row.metric
            << ',' << format_double(row.value) << ',' << format_double(row.half_width) << ','
            << row.seed << '\n';
    }
}

std::string csv_string(const ExperimentConfig& cfg, const std::vector<ResultRow>& rows)
{
    std::ostringstream out;
    write_csv(out, cfg, rows);
    return out.str();
}

} // namespace epimit
