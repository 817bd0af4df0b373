#include "soqo/cli.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "soqo/bounds.hpp"
#include "soqo/errors.hpp"
#include "soqo/experiment.hpp"
#include "soqo/plot.hpp"

namespace soqo {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Matrix argument: either a comma-separated eigenvalue list ("0.3,1,2") or
// @file.json with {"eigvals": [...]} or {"dense": [[...]]}.
SpectralMatrix parse_a_spec(const std::string& text) {
    if (text.empty()) throw ConfigError("matrix spec is empty");
    if (text[0] == '@') {
        const std::string path = text.substr(1);
        std::ifstream in(path);
        if (!in) throw IOFailure("cannot open matrix file " + path);
        json j;
        try {
            in >> j;
        } catch (const json::parse_error& e) {
            throw ConfigError("matrix file " + path + " is not valid JSON: " + e.what());
        }
        if (j.is_object() && j.contains("eigvals") && j["eigvals"].is_array()) {
            Vec eig;
            for (const auto& e : j["eigvals"]) {
                if (!e.is_number()) throw ConfigError("eigvals must be numbers");
                eig.push_back(e.get<double>());
            }
            return SpectralMatrix::from_eigvals(std::move(eig));
        }
        if (j.is_object() && j.contains("dense") && j["dense"].is_array()) {
            const auto& rows = j["dense"];
            const int n = static_cast<int>(rows.size());
            Mat m(n);
            for (int r = 0; r < n; ++r) {
                if (!rows[r].is_array() || static_cast<int>(rows[r].size()) != n)
                    throw ConfigError("dense matrix must be square");
                for (int c = 0; c < n; ++c) {
                    if (!rows[r][c].is_number()) throw ConfigError("matrix entries must be numbers");
                    m(r, c) = rows[r][c].get<double>();
                }
            }
            return SpectralMatrix::decompose(m);
        }
        throw ConfigError("matrix file " + path + " needs an 'eigvals' or 'dense' field");
    }
    Vec eig;
    std::istringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(tok, &used);
        } catch (const std::exception&) {
            throw ConfigError("bad eigenvalue '" + tok + "' in matrix spec");
        }
        while (used < tok.size() && std::isspace(static_cast<unsigned char>(tok[used]))) ++used;
        if (used != tok.size())
            throw ConfigError("bad eigenvalue '" + tok + "' in matrix spec");
        eig.push_back(v);
    }
    if (eig.empty()) throw ConfigError("matrix spec has no eigenvalues");
    return SpectralMatrix::from_eigvals(std::move(eig));
}

// --seed beats SOQO_SEED beats the config's own master_seed.
std::uint64_t resolve_seed(std::uint64_t config_seed, const std::optional<std::uint64_t>& flag) {
    if (flag) return *flag;
    if (const char* env = std::getenv("SOQO_SEED")) {
        const std::string text(env);
        std::size_t used = 0;
        unsigned long long v = 0;
        try {
            v = std::stoull(text, &used);
        } catch (const std::exception&) {
            throw ConfigError("SOQO_SEED is not an unsigned integer: '" + text + "'");
        }
        if (used != text.size())
            throw ConfigError("SOQO_SEED is not an unsigned integer: '" + text + "'");
        return static_cast<std::uint64_t>(v);
    }
    return config_seed;
}

struct RunFlags {
    std::optional<std::uint64_t> seed;
    int runs = 0;       // 0 = keep config value
    std::string out;    // empty = keep config value
    int workers = 1;
};

void add_run_flags(CLI::App* cmd, RunFlags& flags) {
    cmd->add_option("--seed", flags.seed, "Master seed (beats SOQO_SEED and the config)");
    cmd->add_option("--runs", flags.runs, "Replications per cell (overrides the config)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--out", flags.out, "Output directory (overrides the config)");
    cmd->add_option("--workers", flags.workers, "Worker threads")->check(CLI::PositiveNumber);
}

void execute(ExperimentConfig cfg, const RunFlags& flags, std::ostream& out) {
    cfg.master_seed = resolve_seed(cfg.master_seed, flags.seed);
    if (flags.runs > 0) cfg.n_runs = flags.runs;
    if (!flags.out.empty()) cfg.out_dir = flags.out;

    const std::vector<ResultRow> rows = run_experiment(cfg, flags.workers);

    std::error_code ec;
    fs::create_directories(cfg.out_dir, ec);
    if (ec) throw IOFailure("cannot create output directory " + cfg.out_dir + ": " + ec.message());
    const std::string csv = (fs::path(cfg.out_dir) / (cfg.name + ".csv")).string();
    const std::string svg = (fs::path(cfg.out_dir) / (cfg.name + ".svg")).string();
    write_rows_csv(csv, rows);
    write_plot_svg(svg, rows);
    out << "wrote " << csv << " (" << rows.size() << " rows)\n";
    out << "wrote " << svg << "\n";
}

double sum(const Vec& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Smoothed online quadratic decision policies and their guarantees", "soqo"};
    app.require_subcommand(1);

    auto* run_cmd = app.add_subcommand("run", "Run an experiment from a JSON config");
    std::string config_path;
    run_cmd->add_option("config", config_path, "Config file path")->required();
    RunFlags run_flags;
    add_run_flags(run_cmd, run_flags);

    auto* preset_cmd = app.add_subcommand("preset", "Run a built-in experiment");
    std::string preset_name;
    preset_cmd->add_option("name", preset_name, "Preset name (see list-presets)")->required();
    RunFlags preset_flags;
    add_run_flags(preset_cmd, preset_flags);

    auto* list_cmd = app.add_subcommand("list-presets", "List built-in experiment names");

    auto* bounds_cmd = app.add_subcommand("bounds", "Print closed-form guarantees as JSON");
    std::string bounds_a;
    bounds_cmd->add_option("matrix", bounds_a, "Hitting matrix (eigvals or @file.json)")
        ->required();
    double bounds_gamma = -1.0, bounds_sigma2 = -1.0;
    int bounds_horizon = 0;
    bounds_cmd->add_option("--gamma", bounds_gamma, "Shift exponent in [0,1]");
    bounds_cmd->add_option("--sigma2", bounds_sigma2, "Total per-round increment variance tr(S)");
    bounds_cmd->add_option("--horizon,-T", bounds_horizon, "Horizon T")
        ->check(CLI::PositiveNumber);

    auto* offline_cmd = app.add_subcommand("offline", "Clairvoyant optimum for a trace CSV");
    std::string offline_trace, offline_a;
    offline_cmd->add_option("trace", offline_trace, "Trace CSV (t,coord,value)")->required();
    offline_cmd->add_option("--matrix,-A", offline_a, "Hitting matrix (eigvals or @file.json)")
        ->required();

    auto* dump_cmd = app.add_subcommand("dump-schedule", "Print a coefficient table as CSV");
    std::string dump_a, dump_kind = "lai", dump_out;
    int dump_horizon = 0;
    dump_cmd->add_option("matrix", dump_a, "Hitting matrix (eigvals or @file.json)")->required();
    dump_cmd->add_option("--horizon,-T", dump_horizon, "Horizon T")
        ->required()
        ->check(CLI::PositiveNumber);
    dump_cmd->add_option("--kind", dump_kind, "lai | lai-gamma:<g> | robd | fi:<c1,...>");
    dump_cmd->add_option("--out", dump_out, "Write to a file instead of stdout");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {  // --help on a subcommand and friends
            out << app.help();
            return 0;
        }
        err << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (app.got_subcommand(run_cmd)) {
            execute(load_config(config_path), run_flags, out);
        } else if (app.got_subcommand(preset_cmd)) {
            execute(preset(preset_name), preset_flags, out);
        } else if (app.got_subcommand(list_cmd)) {
            for (const std::string& name : preset_names()) out << name << "\n";
        } else if (app.got_subcommand(bounds_cmd)) {
            const SpectralMatrix a = parse_a_spec(bounds_a);
            std::optional<double> gamma;
            if (bounds_cmd->count("--gamma")) gamma = bounds_gamma;
            BoundReport report = cr_bounds(a, gamma);
            const bool have_sigma2 = bounds_cmd->count("--sigma2") > 0;
            if (have_sigma2 && bounds_horizon > 0) {
                const Mat sigma =
                    Mat::identity(a.dim()).scaled(bounds_sigma2 / a.dim());
                const Vec zero_gap(static_cast<size_t>(a.dim()), 0.0);
                auto [exact, upper] = lai_expected_cost(a, sigma, bounds_horizon, zero_gap);
                report.lai_cost_exact = exact;
                report.lai_cost_upper = upper;
                report.fi_regret_lower = robd_regret_lower(a, sigma, bounds_horizon);
                report.ftm_regret_lower = ftm_regret_lower(a, bounds_sigma2, bounds_horizon);
            }
            if (have_sigma2 && gamma) {
                report.lai_gamma_regret_upper =
                    lai_gamma_regret_upper(a, bounds_sigma2, *gamma, RegretBoundVariant::MinEig);
                report.lai_gamma_regret_upper_dimsum =
                    lai_gamma_regret_upper(a, bounds_sigma2, *gamma, RegretBoundVariant::DimSum);
            }
            if (bounds_horizon > 0) {
                // Worst-round slack of the horizon-aware schedule feeds the
                // generic two-branch ceiling with m = 1 switching strength.
                CoefficientSchedule sched = lai_schedule(a, bounds_horizon);
                double alpha_min = 0.0, beta_max = 0.0;
                for (int t = 1; t <= bounds_horizon; ++t) {
                    auto [lo, hi] = schedule_strong_smooth(sched, t);
                    if (t == 1 || lo < alpha_min) alpha_min = lo;
                    if (t == 1 || hi > beta_max) beta_max = hi;
                }
                // The terminal round's slack is exactly zero; rounding can
                // leave it an ulp below, which the ceiling must not reject.
                alpha_min = std::max(alpha_min, 0.0);
                report.framework_cr = framework_cr(a.min_eigval(), 1.0, 1.0, alpha_min, beta_max);
            }
            out << report.to_json() << "\n";
        } else if (app.got_subcommand(offline_cmd)) {
            const SpectralMatrix a = parse_a_spec(offline_a);
            const MinimizerTrace trace = read_trace_csv(offline_trace);
            if (trace.dim() != a.dim())
                throw DimensionMismatch("trace dimension does not match the matrix");
            const PolicyRun best = offline_optimal(a, trace.x0, trace);
            json j;
            j["total"] = best.total;
            j["hit"] = sum(best.hit_costs);
            j["switch"] = sum(best.switch_costs);
            j["rounds"] = trace.horizon();
            j["kkt_residual"] = offline_kkt_residual(a, trace.x0, trace, best.actions);
            out << j.dump() << "\n";
        } else if (app.got_subcommand(dump_cmd)) {
            const SpectralMatrix a = parse_a_spec(dump_a);
            PolicySpec spec;
            try {
                spec = parse_policy_spec(dump_kind);
            } catch (const std::invalid_argument& e) {
                throw ConfigError(std::string("--kind: ") + e.what());
            }
            CoefficientSchedule sched = [&]() -> CoefficientSchedule {
                switch (spec.kind) {
                    case PolicySpec::Kind::Lai: return lai_schedule(a, dump_horizon);
                    case PolicySpec::Kind::LaiGamma:
                        return lai_gamma_schedule(a, dump_horizon, spec.gamma);
                    case PolicySpec::Kind::Robd: return robd_schedule(a, dump_horizon);
                    case PolicySpec::Kind::Fi:
                        return fi_schedule(a, spec.fi_eigvals, dump_horizon);
                    default:
                        throw ConfigError("--kind: '" + dump_kind +
                                          "' does not name a coefficient schedule");
                }
            }();
            std::ostringstream table;
            table << "t,i,rho\n";
            char buf[48];
            for (int t = 1; t <= dump_horizon; ++t)
                for (int i = 0; i < a.dim(); ++i) {
                    std::snprintf(buf, sizeof buf, "%.17g", sched.rho(t, i));
                    table << t << ',' << i << ',' << buf << '\n';
                }
            if (dump_out.empty()) {
                out << table.str();
            } else {
                std::ofstream f(dump_out);
                if (!f) throw IOFailure("cannot open " + dump_out + " for writing");
                f << table.str();
                if (!f) throw IOFailure("failed writing " + dump_out);
                out << "wrote " << dump_out << "\n";
            }
        }
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

}  // namespace soqo
