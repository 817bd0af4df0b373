#include "soqo/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "soqo/errors.hpp"

namespace soqo {

using nlohmann::json;

namespace {

const json& require(const json& j, const char* key, const std::string& ctx) {
    auto it = j.find(key);
    if (it == j.end()) throw ConfigError("missing field '" + ctx + key + "'");
    return *it;
}

double as_number(const json& j, const std::string& where) {
    if (!j.is_number()) throw ConfigError("field '" + where + "' must be a number");
    return j.get<double>();
}

int as_int(const json& j, const std::string& where) {
    if (!j.is_number_integer()) throw ConfigError("field '" + where + "' must be an integer");
    return j.get<int>();
}

std::string as_string(const json& j, const std::string& where) {
    if (!j.is_string()) throw ConfigError("field '" + where + "' must be a string");
    return j.get<std::string>();
}

Vec as_vector(const json& j, const std::string& where) {
    if (!j.is_array()) throw ConfigError("field '" + where + "' must be an array");
    Vec out;
    out.reserve(j.size());
    for (const auto& e : j) out.push_back(as_number(e, where + "[]"));
    return out;
}

Mat as_matrix(const json& j, const std::string& where) {
    if (!j.is_array() || j.empty())
        throw ConfigError("field '" + where + "' must be a non-empty array of rows");
    const int n = static_cast<int>(j.size());
    Mat m(n);
    for (int r = 0; r < n; ++r) {
        Vec row = as_vector(j[r], where + "[" + std::to_string(r) + "]");
        if (static_cast<int>(row.size()) != n)
            throw ConfigError("field '" + where + "' must be square");
        for (int c = 0; c < n; ++c) m(r, c) = row[c];
    }
    return m;
}

IncrementFamily parse_family(const std::string& text, const std::string& where) {
    if (text == "uniform") return IncrementFamily::Uniform;
    if (text == "normal" || text == "gaussian") return IncrementFamily::Normal;
    if (text == "laplace") return IncrementFamily::Laplace;
    if (text == "logistic") return IncrementFamily::Logistic;
    if (text == "gumbel") return IncrementFamily::Gumbel;
    if (text == "lognormal" || text == "lognormal-sym") return IncrementFamily::LognormalSym;
    if (text == "lomax" || text == "lomax-sym" || text == "pareto")
        return IncrementFamily::LomaxSym;
    throw ConfigError("field '" + where + "': unknown increment family '" + text + "'");
}

IncrementSpec parse_increment(const json& j, const std::string& ctx) {
    if (!j.is_object()) throw ConfigError("field '" + ctx + "' must be an object");
    IncrementSpec spec;
    spec.family = parse_family(as_string(require(j, "family", ctx + "."), ctx + ".family"),
                               ctx + ".family");
    if (j.contains("sigma_c2")) spec.sigma_c2 = as_number(j["sigma_c2"], ctx + ".sigma_c2");
    if (j.contains("lomax_alpha"))
        spec.lomax_alpha = as_number(j["lomax_alpha"], ctx + ".lomax_alpha");
    if (j.contains("lognormal_sigma"))
        spec.lognormal_sigma = as_number(j["lognormal_sigma"], ctx + ".lognormal_sigma");
    try {
        validate(spec);
    } catch (const std::invalid_argument& e) {
        throw ConfigError("field '" + ctx + "': " + e.what());
    }
    return spec;
}

TraceModeKind parse_mode(const std::string& text) {
    if (text == "martingale") return TraceModeKind::Martingale;
    if (text == "shift") return TraceModeKind::ShiftSchedule;
    if (text == "mixed") return TraceModeKind::Mixed;
    if (text == "adversarial" || text == "pure-adversarial") return TraceModeKind::PureAdversarial;
    throw ConfigError("field 'trace.mode': unknown mode '" + text + "'");
}

AdversaryRule parse_adversary(const json& j, const SpectralMatrix& a) {
    if (!j.is_object()) throw ConfigError("field 'trace.adversary' must be an object");
    const std::string kind = as_string(require(j, "kind", "trace.adversary."),
                                       "trace.adversary.kind");
    if (kind == "alternating_ray" || kind == "alternating-ray") {
        const double amplitude =
            as_number(require(j, "amplitude", "trace.adversary."), "trace.adversary.amplitude");
        const json& dj = require(j, "direction", "trace.adversary.");
        Vec direction;
        if (dj.is_string()) {
            const std::string name = dj.get<std::string>();
            if (name == "min_eig")
                direction = a.eigenvector(0);
            else if (name == "max_eig")
                direction = a.eigenvector(a.dim() - 1);
            else
                throw ConfigError(
                    "field 'trace.adversary.direction': expected min_eig, max_eig, or a vector");
        } else {
            direction = as_vector(dj, "trace.adversary.direction");
        }
        try {
            return alternating_ray(std::move(direction), amplitude);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("field 'trace.adversary': ") + e.what());
        }
    }
    if (kind == "fixed_points" || kind == "fixed-points") {
        const json& pj = require(j, "points", "trace.adversary.");
        if (!pj.is_array() || pj.empty())
            throw ConfigError("field 'trace.adversary.points' must be a non-empty array");
        std::vector<Vec> points;
        for (std::size_t i = 0; i < pj.size(); ++i)
            points.push_back(
                as_vector(pj[i], "trace.adversary.points[" + std::to_string(i) + "]"));
        try {
            return fixed_points(std::move(points));
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("field 'trace.adversary': ") + e.what());
        }
    }
    throw ConfigError("field 'trace.adversary.kind': unknown kind '" + kind + "'");
}

std::string format_double(double x) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config root must be an object");

    ExperimentConfig cfg;
    cfg.name = as_string(require(j, "name", ""), "name");
    if (cfg.name.empty()) throw ConfigError("field 'name' must be non-empty");

    const json& aj = require(j, "A", "");
    if (!aj.is_object()) throw ConfigError("field 'A' must be an object");
    if (aj.contains("eigvals") == aj.contains("dense"))
        throw ConfigError("field 'A' must have exactly one of 'eigvals' or 'dense'");
    try {
        if (aj.contains("eigvals"))
            cfg.a = SpectralMatrix::from_eigvals(as_vector(aj["eigvals"], "A.eigvals"));
        else
            cfg.a = SpectralMatrix::decompose(as_matrix(aj["dense"], "A.dense"));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("field 'A': ") + e.what());
    }

    const json& tj = require(j, "trace", "");
    if (!tj.is_object()) throw ConfigError("field 'trace' must be an object");
    cfg.trace.dim = cfg.a.dim();
    if (tj.contains("dim") && as_int(tj["dim"], "trace.dim") != cfg.a.dim())
        throw ConfigError("field 'trace.dim' disagrees with the dimension of A");
    cfg.trace.mode = parse_mode(as_string(require(tj, "mode", "trace."), "trace.mode"));
    if (tj.contains("x0")) {
        cfg.trace.x0 = as_vector(tj["x0"], "trace.x0");
        if (static_cast<int>(cfg.trace.x0.size()) != cfg.a.dim())
            throw ConfigError("field 'trace.x0' has the wrong dimension");
    }
    if (tj.contains("increments"))
        cfg.trace.base = parse_increment(tj["increments"], "trace.increments");
    if (tj.contains("segments")) {
        const json& sj = tj["segments"];
        if (!sj.is_array()) throw ConfigError("field 'trace.segments' must be an array");
        for (std::size_t i = 0; i < sj.size(); ++i)
            cfg.trace.segments.push_back(
                parse_increment(sj[i], "trace.segments[" + std::to_string(i) + "]"));
    }
    if (tj.contains("correlation"))
        cfg.trace.correlation = as_matrix(tj["correlation"], "trace.correlation");
    if (tj.contains("adversarial_pct"))
        cfg.trace.adversarial_pct = as_number(tj["adversarial_pct"], "trace.adversarial_pct");
    if (tj.contains("adversary")) cfg.trace.adversary = parse_adversary(tj["adversary"], cfg.a);
    if (tj.contains("horizon")) cfg.trace.horizon = as_int(tj["horizon"], "trace.horizon");

    const json& pj = require(j, "policies", "");
    if (!pj.is_array() || pj.empty())
        throw ConfigError("field 'policies' must be a non-empty array");
    for (std::size_t i = 0; i < pj.size(); ++i) {
        const std::string where = "policies[" + std::to_string(i) + "]";
        try {
            cfg.policies.push_back(parse_policy_spec(as_string(pj[i], where)));
        } catch (const std::invalid_argument& e) {
            throw ConfigError("field '" + where + "': " + e.what());
        }
    }

    try {
        cfg.statistic = parse_statistic(as_string(require(j, "statistic", ""), "statistic"));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("field 'statistic': ") + e.what());
    }

    cfg.n_runs = as_int(require(j, "runs", ""), "runs");
    if (cfg.n_runs <= 0) throw ConfigError("field 'runs' must be positive");

    const json& swj = require(j, "sweep", "");
    if (!swj.is_object()) throw ConfigError("field 'sweep' must be an object");
    const std::string axis = as_string(require(swj, "axis", "sweep."), "sweep.axis");
    if (axis == "T" || axis == "horizon")
        cfg.axis = SweepAxis::Horizon;
    else if (axis == "p" || axis == "adversarial_pct")
        cfg.axis = SweepAxis::AdversarialPct;
    else
        throw ConfigError("field 'sweep.axis': expected 'T' or 'p', got '" + axis + "'");
    cfg.sweep_values = as_vector(require(swj, "values", "sweep."), "sweep.values");
    if (cfg.sweep_values.empty()) throw ConfigError("field 'sweep.values' must be non-empty");
    for (double s : cfg.sweep_values) {
        if (cfg.axis == SweepAxis::Horizon &&
            (s < 1.0 || s != std::floor(s) || s > 1e9))
            throw ConfigError("field 'sweep.values': horizons must be positive integers");
        if (cfg.axis == SweepAxis::AdversarialPct && (s < 0.0 || s > 100.0))
            throw ConfigError("field 'sweep.values': percentages must lie in [0, 100]");
    }
    if (cfg.axis == SweepAxis::AdversarialPct && !tj.contains("horizon"))
        throw ConfigError("field 'trace.horizon' is required when sweeping the adversarial share");

    if (j.contains("master_seed")) {
        const json& ms = j["master_seed"];
        if (!ms.is_number_integer() || ms.get<std::int64_t>() < 0)
            throw ConfigError("field 'master_seed' must be a non-negative integer");
        cfg.master_seed = ms.get<std::uint64_t>();
    }
    if (j.contains("out")) cfg.out_dir = as_string(j["out"], "out");

    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IOFailure("cannot open config file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::vector<ResultRow> run_experiment(const ExperimentConfig& config, int workers) {
    std::vector<ResultRow> rows;
    rows.reserve(config.sweep_values.size() * config.policies.size());
    for (double sweep : config.sweep_values) {
        TraceSpec spec = config.trace;
        spec.seed = config.master_seed;
        if (config.axis == SweepAxis::Horizon)
            spec.horizon = static_cast<int>(std::llround(sweep));
        else
            spec.adversarial_pct = sweep;
        for (const PolicySpec& policy : config.policies) {
            MonteCarloEstimate est =
                monte_carlo(policy, config.a, spec, config.n_runs, config.statistic, workers);
            rows.push_back({config.name, sweep, to_string(policy), est.mean, est.std_error,
                            est.p95, est.n_runs, config.master_seed});
        }
    }
    return rows;
}

std::string rows_to_csv(const std::vector<ResultRow>& rows) {
    std::string out = "experiment,sweep,policy,mean,stderr,p95,n,seed\n";
    for (const ResultRow& r : rows) {
        out += r.experiment;
        out += ',' + format_double(r.sweep);
        out += ',' + r.policy;
        out += ',' + format_double(r.mean);
        out += ',' + format_double(r.std_error);
        out += ',' + format_double(r.p95);
        out += ',' + std::to_string(r.n_runs);
        out += ',' + std::to_string(r.seed);
        out += '\n';
    }
    return out;
}

void write_rows_csv(const std::string& path, const std::vector<ResultRow>& rows) {
    std::ofstream out(path);
    if (!out) throw IOFailure("cannot open " + path + " for writing");
    out << rows_to_csv(rows);
    if (!out) throw IOFailure("failed writing " + path);
}

namespace {

// d = 10 geometric spectrum 1, q, q², ...
Vec geometric_eigvals(double q) {
    Vec eig(10);
    double v = 1.0;
    for (int i = 0; i < 10; ++i, v *= q) eig[i] = v;
    return eig;
}

constexpr std::uint64_t kPresetSeed = 20240517;

ExperimentConfig fig1_preset(const std::string& env, double q, const std::string& name) {
    ExperimentConfig cfg;
    cfg.name = name;
    cfg.a = SpectralMatrix::from_eigvals(geometric_eigvals(q));
    cfg.trace.dim = 10;
    cfg.policies = {parse_policy_spec("robd"), parse_policy_spec("lai-gamma:1")};
    cfg.statistic = Statistic::RegretVsLai;
    cfg.n_runs = 1000;
    cfg.axis = SweepAxis::Horizon;
    cfg.master_seed = kPresetSeed;
    if (env == "light") {
        // Five light-tail segments; the horizon must divide evenly, so the
        // sweep walks the multiples of 5.
        cfg.trace.mode = TraceModeKind::ShiftSchedule;
        for (IncrementFamily f : {IncrementFamily::Uniform, IncrementFamily::Normal,
                                  IncrementFamily::Laplace, IncrementFamily::Logistic,
                                  IncrementFamily::Gumbel})
            cfg.trace.segments.push_back({f, 1.0});
        for (int t = 5; t <= 100; t += 5) cfg.sweep_values.push_back(t);
    } else {
        cfg.trace.mode = TraceModeKind::Martingale;
        cfg.trace.base.family =
            env == "lognormal" ? IncrementFamily::LognormalSym : IncrementFamily::LomaxSym;
        cfg.trace.base.sigma_c2 = 1.0;
        for (int t = 1; t <= 100; ++t) cfg.sweep_values.push_back(t);
    }
    return cfg;
}

ExperimentConfig fig2_preset(const std::string& env, double q, const std::string& name) {
    ExperimentConfig cfg;
    cfg.name = name;
    cfg.a = SpectralMatrix::from_eigvals(geometric_eigvals(q));
    cfg.trace.dim = 10;
    cfg.trace.horizon = 100;
    cfg.trace.mode = TraceModeKind::Mixed;
    if (env == "normal")
        cfg.trace.base.family = IncrementFamily::Normal;
    else if (env == "lognormal")
        cfg.trace.base.family = IncrementFamily::LognormalSym;
    else
        cfg.trace.base.family = IncrementFamily::LomaxSym;
    cfg.trace.base.sigma_c2 = 1.0;
    // Stiffest direction: along the softest one the balanced-regularizer
    // schedule coincides with the fully shifted one, so nothing separates.
    cfg.trace.adversary = alternating_ray(cfg.a.eigenvector(cfg.a.dim() - 1), 5.0);
    cfg.policies = {parse_policy_spec("robd"), parse_policy_spec("lai-gamma:1")};
    cfg.statistic = Statistic::RatioVsLai;
    cfg.n_runs = 1000;
    cfg.axis = SweepAxis::AdversarialPct;
    for (int p = 0; p <= 100; p += 10) cfg.sweep_values.push_back(p);
    cfg.master_seed = kPresetSeed;
    return cfg;
}

const char* const kEnvs1[] = {"light", "lognormal", "pareto"};
const char* const kEnvs2[] = {"normal", "lognormal", "pareto"};
const char* const kRatios[] = {"0.3", "0.45", "0.5"};

}  // namespace

std::vector<std::string> preset_names() {
    std::vector<std::string> names;
    for (const char* env : kEnvs1)
        for (const char* q : kRatios) names.push_back(std::string("fig1-") + env + "-" + q);
    for (const char* env : kEnvs2)
        for (const char* q : kRatios) names.push_back(std::string("fig2-") + env + "-" + q);
    return names;
}

ExperimentConfig preset(const std::string& name) {
    // Suffix-free fig2 spellings alias the q = 0.3 spectrum.
    for (const char* env : kEnvs2)
        if (name == std::string("fig2-") + env)
            return fig2_preset(env, 0.3, name + "-0.3");
    for (const char* env : kEnvs1)
        for (const char* q : kRatios)
            if (name == std::string("fig1-") + env + "-" + q)
                return fig1_preset(env, std::stod(q), name);
    for (const char* env : kEnvs2)
        for (const char* q : kRatios)
            if (name == std::string("fig2-") + env + "-" + q)
                return fig2_preset(env, std::stod(q), name);
    throw ConfigError("unknown preset '" + name + "' (see list-presets)");
}

}  // namespace soqo
