#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "soqo/monte_carlo.hpp"

namespace soqo {

// One output row: a (sweep value, policy) cell of an experiment.
struct ResultRow {
    std::string experiment;
    double sweep = 0.0;
    std::string policy;
    double mean = 0.0;
    double std_error = 0.0;
    double p95 = 0.0;
    int n_runs = 0;
    std::uint64_t seed = 0;
};

enum class SweepAxis { Horizon, AdversarialPct };

struct ExperimentConfig {
    std::string name;
    SpectralMatrix a;
    TraceSpec trace;  // horizon / adversarial_pct overridden per sweep point
    std::vector<PolicySpec> policies;
    Statistic statistic = Statistic::TotalCost;
    int n_runs = 100;
    SweepAxis axis = SweepAxis::Horizon;
    std::vector<double> sweep_values;
    std::uint64_t master_seed = 1;
    std::string out_dir = ".";
};

// Parses the JSON config document; throws ConfigError naming the offending
// field. See README for the schema.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

// Runs every (sweep value, policy) cell; rows come back in deterministic
// order (sweep-major, then policies as configured) and depend only on the
// config, never on the worker count.
std::vector<ResultRow> run_experiment(const ExperimentConfig& config, int workers = 1);

// CSV with header experiment,sweep,policy,mean,stderr,p95,n,seed.
std::string rows_to_csv(const std::vector<ResultRow>& rows);
void write_rows_csv(const std::string& path, const std::vector<ResultRow>& rows);

// Built-in experiment definitions. Canonical names are
// fig1-{light,lognormal,pareto}-{0.3,0.45,0.5} and
// fig2-{normal,lognormal,pareto}-{0.3,0.45,0.5}; the suffix-free fig2
// names alias the -0.3 variant.
std::vector<std::string> preset_names();
ExperimentConfig preset(const std::string& name);

}  // namespace soqo
