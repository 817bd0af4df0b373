#include "soqo/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "soqo/errors.hpp"

namespace soqo {

MonteCarloEstimate summarize(const Vec& values) {
    if (values.empty()) throw EmptyInput("summarize: no samples");
    const int n = static_cast<int>(values.size());
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= n;
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    var = (n > 1) ? var / (n - 1) : 0.0;

    Vec sorted = values;
    std::sort(sorted.begin(), sorted.end());
    const int rank = std::max(0, static_cast<int>(std::ceil(0.95 * n)) - 1);

    MonteCarloEstimate est;
    est.mean = mean;
    est.std_error = std::sqrt(var / n);
    est.p95 = sorted[static_cast<size_t>(rank)];
    est.n_runs = n;
    return est;
}

Statistic parse_statistic(const std::string& text) {
    if (text == "total_cost") return Statistic::TotalCost;
    if (text == "regret_vs_lai") return Statistic::RegretVsLai;
    if (text == "ratio_vs_lai") return Statistic::RatioVsLai;
    if (text == "ratio_vs_offline") return Statistic::RatioVsOffline;
    throw InvalidParameter("statistic: unknown name '" + text + "'");
}

std::string to_string(Statistic s) {
    switch (s) {
        case Statistic::TotalCost: return "total_cost";
        case Statistic::RegretVsLai: return "regret_vs_lai";
        case Statistic::RatioVsLai: return "ratio_vs_lai";
        case Statistic::RatioVsOffline: return "ratio_vs_offline";
    }
    throw InvalidParameter("statistic: unknown value");
}

namespace {

void parallel_for(int n, int workers, const std::function<void(int)>& body) {
    workers = std::max(1, std::min(workers, n));
    if (workers == 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (int i = w; i < n; i += workers) body(i);
            } catch (...) {
                errors[static_cast<size_t>(w)] = std::current_exception();
            }
        });
    }
    for (std::thread& t : pool) t.join();
    for (const std::exception_ptr& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace

Vec monte_carlo_samples(const PolicySpec& policy, const SpectralMatrix& a, const TraceSpec& spec,
                        int n_runs, Statistic statistic, int workers) {
    if (n_runs < 1) throw InvalidParameter("monte_carlo: n_runs must be at least 1");
    validate(spec);
    if (spec.dim != a.dim())
        throw DimensionMismatch("monte_carlo: trace dimension differs from matrix");

    const PolicySpec lai{PolicySpec::Kind::Lai, 0.0, {}};
    const PolicySpec offline{PolicySpec::Kind::OfflineOpt, 0.0, {}};

    Vec values(static_cast<size_t>(n_runs), 0.0);
    std::vector<char> keep(static_cast<size_t>(n_runs), 1);
    parallel_for(n_runs, workers, [&](int r) {
        const MinimizerTrace trace = generate_trace(spec, r);
        const double cost = run_policy(policy, a, trace).total;
        double value = cost;
        switch (statistic) {
            case Statistic::TotalCost:
                break;
            case Statistic::RegretVsLai:
                value = cost - run_policy(lai, a, trace).total;
                break;
            case Statistic::RatioVsLai: {
                const double base = run_policy(lai, a, trace).total;
                if (base < 1e-12) {
                    keep[static_cast<size_t>(r)] = 0;
                    return;
                }
                value = cost / base;
                break;
            }
            case Statistic::RatioVsOffline: {
                const double base = run_policy(offline, a, trace).total;
                if (base < 1e-12) {
                    keep[static_cast<size_t>(r)] = 0;
                    return;
                }
                value = cost / base;
                break;
            }
        }
        values[static_cast<size_t>(r)] = value;
    });

    Vec out;
    out.reserve(values.size());
    for (int r = 0; r < n_runs; ++r)
        if (keep[static_cast<size_t>(r)]) out.push_back(values[static_cast<size_t>(r)]);
    if (out.empty()) throw EmptyInput("monte_carlo: every run had a degenerate comparator");
    return out;
}

MonteCarloEstimate monte_carlo(const PolicySpec& policy, const SpectralMatrix& a,
                               const TraceSpec& spec, int n_runs, Statistic statistic,
                               int workers) {
    return summarize(monte_carlo_samples(policy, a, spec, n_runs, statistic, workers));
}

// ---------------------------------------------------------------------------
// Scenario-tree oracle

namespace {

double golden_min(const std::function<double(double)>& f, double lo, double hi, double xtol) {
    const double inv_phi = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > xtol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

double scenario_tree_optimum(double lambda, double sigma, int horizon, double x0) {
    if (!(lambda > 0.0)) throw EigvalOutOfRange("scenario tree: lambda must be positive");
    if (!(sigma >= 0.0)) throw InvalidParameter("scenario tree: sigma must be non-negative");
    if (horizon < 1) throw HorizonMismatch("scenario tree: horizon must be at least 1");
    if (horizon > 8) throw HorizonTooLarge("scenario tree: horizon capped at 8");
    if (sigma == 0.0) return 0.0;  // v stays at x0 and so does the optimal play

    // Nodes indexed heap-style per depth: depth t has 2^t nodes; node (t, k)
    // has parent (t-1, k/2) and minimizer x0 + sigma * (up-down walk of the
    // bit path of k). One action variable per node; the objective is the
    // path-probability-weighted total cost, strictly convex in the actions.
    const int t_total = horizon;
    std::vector<std::vector<double>> v(static_cast<size_t>(t_total) + 1);
    std::vector<std::vector<double>> x(static_cast<size_t>(t_total) + 1);
    v[0] = {x0};
    x[0] = {x0};
    for (int t = 1; t <= t_total; ++t) {
        const size_t n = size_t{1} << t;
        v[static_cast<size_t>(t)].resize(n);
        x[static_cast<size_t>(t)].resize(n);
        for (size_t k = 0; k < n; ++k) {
            const double step = (k & 1) ? -sigma : sigma;
            v[static_cast<size_t>(t)][k] = v[static_cast<size_t>(t - 1)][k >> 1] + step;
            x[static_cast<size_t>(t)][k] = v[static_cast<size_t>(t)][k];
        }
    }

    const double bracket = 10.0 * sigma * t_total;
    auto total_value = [&]() {
        double total = 0.0;
        for (int t = 1; t <= t_total; ++t) {
            const double prob = std::ldexp(1.0, -t);
            const size_t n = size_t{1} << t;
            for (size_t k = 0; k < n; ++k) {
                const double xt = x[static_cast<size_t>(t)][k];
                const double gap = xt - v[static_cast<size_t>(t)][k];
                const double prev = x[static_cast<size_t>(t - 1)][k >> 1];
                total += prob * (0.5 * lambda * gap * gap + 0.5 * (xt - prev) * (xt - prev));
            }
        }
        return total;
    };

    double value = total_value();
    for (int sweep = 0; sweep < 100000; ++sweep) {
        // Leaves first, so each parent sees refreshed children inside a sweep.
        for (int t = t_total; t >= 1; --t) {
            const size_t n = size_t{1} << t;
            for (size_t k = 0; k < n; ++k) {
                const double node_v = v[static_cast<size_t>(t)][k];
                const double prev = x[static_cast<size_t>(t - 1)][k >> 1];
                const bool leaf = (t == t_total);
                const double cl = leaf ? 0.0 : x[static_cast<size_t>(t + 1)][2 * k];
                const double cr = leaf ? 0.0 : x[static_cast<size_t>(t + 1)][2 * k + 1];
                // Conditional node objective; children enter with probability
                // 1/2 each relative to this node.
                auto local = [&](double xt) {
                    double s = 0.5 * lambda * (xt - node_v) * (xt - node_v) +
                               0.5 * (xt - prev) * (xt - prev);
                    if (!leaf)
                        s += 0.25 * ((cl - xt) * (cl - xt) + (cr - xt) * (cr - xt));
                    return s;
                };
                x[static_cast<size_t>(t)][k] =
                    golden_min(local, node_v - bracket, node_v + bracket, 1e-10);
            }
        }
        const double next = total_value();
        if (value - next < 1e-13 && sweep > 2) return next;
        value = next;
    }
    throw SolveFailure("scenario tree: sweeps did not stabilize");
}

}  // namespace soqo
