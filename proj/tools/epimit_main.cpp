#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "epimit/dsir.hpp"
#include "epimit/experiment.hpp"
#include "epimit/graph.hpp"
#include "epimit/icsir.hpp"
#include "epimit/system_io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

int cmd_run(const std::string& config_path, const std::string& out_path)
{
    epimit::ExperimentConfig cfg = epimit::load_experiment_config(config_path);
    std::vector<epimit::ResultRow> rows = epimit::run_experiment(cfg);

    if (out_path.empty()) {
        epimit::write_csv(std::cout, cfg, rows);
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out)
            throw std::runtime_error("cannot open output file " + out_path);
        epimit::write_csv(out, cfg, rows);
    }
    bool failed = false;
    for (const auto& row : rows)
        if (!row.error.empty()) {
            std::cerr << "error: " << row.algorithm << " k=" << row.k << " " << row.metric
                      << ": " << row.error << "\n";
            failed = true;
        }
    return failed ? kExitRuntime : kExitOk;
}

int cmd_gen_er(int n, double p, std::uint64_t seed, const std::string& out)
{
    epimit::Graph g = epimit::gen_er(n, p, seed);
    epimit::save_edge_list(g, out);
    std::cout << "{\"n\": " << g.vertex_count() << ", \"edges\": " << g.edge_count() << "}\n";
    return kExitOk;
}

int cmd_gen_sbm(int block_size, int kappa, double q_diag, double q_off, std::uint64_t seed,
                const std::string& out)
{
    std::vector<std::vector<double>> q(kappa, std::vector<double>(kappa, q_off));
    for (int i = 0; i < kappa; ++i)
        q[i][i] = q_diag;
    epimit::Graph g = epimit::gen_sbm(block_size, kappa, q, seed);
    epimit::save_edge_list(g, out);
    std::cout << "{\"n\": " << g.vertex_count() << ", \"edges\": " << g.edge_count() << "}\n";
    return kExitOk;
}

int cmd_check_stability(const std::string& system_path)
{
    epimit::SystemFile file = epimit::load_dsir_system(system_path);
    epimit::StabilityResult res = epimit::check_stability(file.system);
    nlohmann::json out{{"stable", res.stable}, {"epsilon", res.epsilon}};
    std::cout << out.dump() << "\n";
    return res.stable ? kExitOk : kExitRuntime;
}

int cmd_reduce_hardness(const std::string& edge_list_path, int bisection, const std::string& out)
{
    epimit::EdgeListData data = epimit::load_edge_list(edge_list_path);
    epimit::HardnessInstance inst = epimit::build_hardness_instance(data.graph, bisection);
    if (!out.empty())
        epimit::save_edge_list(inst.graph, out);
    nlohmann::json meta{{"n", inst.graph.vertex_count()},
                        {"edges", inst.graph.edge_count()},
                        {"seeds", inst.seeds},
                        {"budget", inst.budget},
                        {"threshold", inst.threshold},
                        {"candidates", inst.candidates.size()}};
    std::cout << meta.dump() << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"epidemic mitigation toolkit: budgeted edge deletion on contact networks"};
    app.require_subcommand(1);

    std::string config_path, out_path;
    CLI::App* run = app.add_subcommand("run", "run a config-driven experiment and emit CSV");
    run->add_option("config", config_path, "experiment config (JSON)")->required();
    run->add_option("--out", out_path, "output CSV path (default: stdout)");

    CLI::App* gen = app.add_subcommand("gen", "generate a random contact network");
    gen->require_subcommand(1);

    int er_n = 0;
    double er_p = 0.0;
    std::uint64_t gen_seed = 0;
    std::string gen_out;
    CLI::App* er = gen->add_subcommand("er", "Erdos-Renyi G(n, p)");
    er->add_option("--n", er_n, "vertex count")->required();
    er->add_option("--p", er_p, "edge probability")->required();
    er->add_option("--seed", gen_seed, "rng seed")->required();
    er->add_option("--out", gen_out, "edge list output path")->required();

    int sbm_block = 0, sbm_kappa = 0;
    double sbm_qd = 0.0, sbm_qo = 0.0;
    CLI::App* sbm = gen->add_subcommand("sbm", "stochastic block model");
    sbm->add_option("--block-size", sbm_block, "vertices per block")->required();
    sbm->add_option("--kappa", sbm_kappa, "block count")->required();
    sbm->add_option("--q-diag", sbm_qd, "within-block probability")->required();
    sbm->add_option("--q-off", sbm_qo, "cross-block probability")->required();
    sbm->add_option("--seed", gen_seed, "rng seed")->required();
    sbm->add_option("--out", gen_out, "edge list output path")->required();

    std::string system_path;
    CLI::App* check = app.add_subcommand("check-stability",
                                         "evaluate the row-sum stability margin of a system file");
    check->add_option("system", system_path, "system file (JSON)")->required();

    std::string hard_in, hard_out;
    int hard_b = 0;
    CLI::App* hard = app.add_subcommand("reduce-hardness",
                                        "build the star-augmented reduction instance from a "
                                        "3-regular graph");
    hard->add_option("edgelist", hard_in, "3-regular graph edge list")->required();
    hard->add_option("--b", hard_b, "bisection size parameter")->required();
    hard->add_option("--out", hard_out, "write the constructed graph here");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed())
            return cmd_run(config_path, out_path);
        if (er->parsed())
            return cmd_gen_er(er_n, er_p, gen_seed, gen_out);
        if (sbm->parsed())
            return cmd_gen_sbm(sbm_block, sbm_kappa, sbm_qd, sbm_qo, gen_seed, gen_out);
        if (check->parsed())
            return cmd_check_stability(system_path);
        if (hard->parsed())
            return cmd_reduce_hardness(hard_in, hard_b, hard_out);
    } catch (const epimit::ConfigError& e) {
        std::cerr << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitOk;
}
