#pragma once

#include "soqo/environments.hpp"
#include "soqo/policies.hpp"

namespace soqo {

struct MonteCarloEstimate {
    double mean = 0.0;
    double std_error = 0.0;  // sample standard deviation / sqrt(n)
    double p95 = 0.0;        // empirical 95th percentile (nearest rank)
    int n_runs = 0;
};

// Mean / standard error / 95th percentile of a sample. EmptyInput on an
// empty vector.
MonteCarloEstimate summarize(const Vec& values);

enum class Statistic { TotalCost, RegretVsLai, RatioVsLai, RatioVsOffline };

Statistic parse_statistic(const std::string& text);
std::string to_string(Statistic s);

// One statistic value per replication; replication r always runs on
// generate_trace(spec, r), and the comparator (horizon-aware schedule or
// clairvoyant optimum) is evaluated on the same trace, so regret and ratio
// statistics are paired. Results are merged by replication index, making
// the output independent of the worker count.
Vec monte_carlo_samples(const PolicySpec& policy, const SpectralMatrix& a, const TraceSpec& spec,
                        int n_runs, Statistic statistic, int workers = 1);

MonteCarloEstimate monte_carlo(const PolicySpec& policy, const SpectralMatrix& a,
                               const TraceSpec& spec, int n_runs, Statistic statistic,
                               int workers = 1);

// Exact optimal expected cost for the binary-increment scalar martingale
// (v moves +-sigma each round, equiprobably), computed over the 2^T-node
// scenario tree with one action variable per node: repeated backward sweeps
// of golden-section line searches (to 1e-10, bracket node_v +- 10 sigma T)
// until the objective is stationary. HorizonTooLarge for T > 8.
double scenario_tree_optimum(double lambda, double sigma, int horizon, double x0);

}  // namespace soqo
