#ifndef EPIMIT_EXPERIMENT_HPP
#define EPIMIT_EXPERIMENT_HPP

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "epimit/graph.hpp"

namespace epimit {

// Config problems carry every violation found, each tagged with its field
// path.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> problems);
    const std::vector<std::string>& problems() const { return problems_; }

private:
    std::vector<std::string> problems_;
};

struct NetworkSpec {
    enum class Kind { Er, Sbm, EdgeList } kind = Kind::Er;
    int n = 0;          // er
    double p = 0.0;     // er
    int block_size = 0; // sbm
    int kappa = 0;      // sbm
    double q_diag = 0.0;
    double q_off = 0.0;
    std::string path; // edge_list
};

struct RateSpec {
    double infection_min = 0.0;
    double infection_max = 0.0;
    double healing_min = 0.0;
    double healing_max = 0.0;
};

struct ActivationSpec {
    enum class Mode { FromRates, Fixed, FromFile } mode = Mode::FromRates;
    double p = 0.0; // fixed
};

struct SeedSpec {
    enum class Mode { Uniform, Fixed, Bernoulli } mode = Mode::Uniform;
    int count = 1;                  // uniform
    std::vector<VertexId> vertices; // fixed
    double mean = 0.0;              // bernoulli, scalar mean per vertex
    std::vector<double> means;      // bernoulli, optional per-vertex means
};

struct InitialSpec {
    double x0_min = 0.8;
    double x0_max = 0.9;
    double r0_min = 0.0;
    double r0_max = 0.0;
};

struct CandidateSpec {
    double fraction = 1.0;
    std::vector<EdgeId> ids; // explicit alternative to fraction
    bool explicit_ids = false;
};

struct EstimatorSpec {
    double epsilon = 0.1;
    long rounds = 0;     // 0 keeps the default
    double d_end = -1.0; // <0 derives the bound from the instance
};

struct ExperimentConfig {
    int schema_version = 1;
    std::string experiment_id;
    std::uint64_t seed = 0;
    NetworkSpec network;
    std::optional<int> degree_cap;
    RateSpec rates;
    ActivationSpec activation;
    SeedSpec seeds;
    InitialSpec initial;
    CandidateSpec candidates;
    std::vector<int> budgets;
    std::vector<std::string> algorithms;
    EstimatorSpec estimator;
    std::vector<std::string> evaluate;
    long gsir_reps = 2000;
    bool paired_directions = true;
};

// Parses and validates a JSON config document (text). Violations are
// collected exhaustively and thrown as one ConfigError.
ExperimentConfig parse_experiment_config(const std::string& json_text);
ExperimentConfig load_experiment_config(const std::string& path);

struct ResultRow {
    std::string algorithm;
    int k = 0;
    std::string metric;
    double value = 0.0;
    double half_width = 0.0;
    std::uint64_t seed = 0;
    std::string error; // non-empty when the value is nan; not part of the CSV
};

// Runs every (algorithm, budget, metric) combination. Deterministic for a
// fixed config: all randomness is derived from the root seed by task path,
// so thread count and execution order never change the result.
std::vector<ResultRow> run_experiment(const ExperimentConfig& config);

void write_csv(std::ostream& out, const ExperimentConfig& config,
               const std::vector<ResultRow>& rows);
std::string csv_string(const ExperimentConfig& config, const std::vector<ResultRow>& rows);

} // namespace epimit

#endif
