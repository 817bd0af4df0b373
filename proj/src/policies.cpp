#include "soqo/policies.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "soqo/errors.hpp"

namespace soqo {

// ---------------------------------------------------------------------------
// DriftOracle

DriftOracle DriftOracle::zero() { return DriftOracle(Fn()); }

DriftOracle DriftOracle::perfect(const MinimizerTrace& trace) {
    std::vector<Vec> v = trace.v;
    Vec x0 = trace.x0;
    return DriftOracle([v, x0](int t, const std::vector<Vec>&) {
        std::vector<Vec> deltas;
        for (size_t s = static_cast<size_t>(t); s < v.size(); ++s) {
            const Vec& prev = (s == 0) ? x0 : v[s - 1];
            deltas.push_back(sub(v[s], prev));
        }
        return deltas;
    });
}

std::vector<Vec> DriftOracle::increments(int t, const std::vector<Vec>& revealed, int horizon,
                                         int dim) const {
    if (!fn_) return std::vector<Vec>(static_cast<size_t>(horizon - t), Vec(dim, 0.0));
    std::vector<Vec> out = fn_(t, revealed);
    if (static_cast<int>(out.size()) != horizon - t)
        throw HorizonMismatch("drift oracle: expected one increment per future round");
    for (const Vec& d : out)
        if (static_cast<int>(d.size()) != dim)
            throw DimensionMismatch("drift oracle: increment dimension mismatch");
    return out;
}

// ---------------------------------------------------------------------------
// Steppers

PolicyState::PolicyState(const CoefficientSchedule& schedule, Vec x0)
    : schedule_(&schedule), x_prev_(std::move(x0)) {
    if (static_cast<int>(x_prev_.size()) != schedule.dim())
        throw DimensionMismatch("policy state: x0 length differs from schedule dimension");
}

void PolicyState::advance(const Vec& v, Vec x) {
    revealed_.push_back(v);
    x_prev_ = std::move(x);
    round_ += 1;
}

Vec step_interpolation(PolicyState& state, const Vec& v_t) {
    const CoefficientSchedule& sched = state.schedule();
    const int t = state.round();
    if (t > sched.horizon()) throw HorizonMismatch("step: horizon exhausted");
    const SpectralMatrix& a = sched.base();
    const Vec& rho = sched.round(t);
    // x = v + P diag(rho) Pᵀ (x_prev - v)
    Vec gap = a.to_eigenbasis(sub(state.previous_action(), v_t));
    for (size_t i = 0; i < gap.size(); ++i) gap[i] *= rho[i];
    Vec x = add(v_t, a.from_eigenbasis(gap));
    state.advance(v_t, x);
    return x;
}

Vec step_general_optimal(PolicyState& state, const Vec& v_t, const DriftOracle& drift) {
    const CoefficientSchedule& sched = state.schedule();
    const int t = state.round();
    const int horizon = sched.horizon();
    if (t > horizon) throw HorizonMismatch("step: horizon exhausted");
    const SpectralMatrix& a = sched.base();
    const int d = a.dim();

    Vec gap = a.to_eigenbasis(sub(state.previous_action(), v_t));
    const Vec& rho = sched.round(t);
    Vec y(d);
    for (int i = 0; i < d; ++i) y[i] = rho[i] * gap[i];

    const std::vector<Vec> deltas = drift.increments(t, state.revealed(), horizon, d);
    // Running products prod_{q=t}^{s-1} rho_q accumulated per eigendirection.
    Vec prod(rho);
    for (int s = t + 1; s <= horizon; ++s) {
        const Vec delta = a.to_eigenbasis(deltas[static_cast<size_t>(s - t - 1)]);
        const Vec& rho_s = sched.round(s);
        for (int i = 0; i < d; ++i) y[i] += prod[i] * (1.0 - rho_s[i]) * delta[i];
        if (s < horizon)
            for (int i = 0; i < d; ++i) prod[i] *= rho_s[i];
    }
    Vec x = add(v_t, a.from_eigenbasis(y));
    state.advance(v_t, x);
    return x;
}

// ---------------------------------------------------------------------------
// Hindsight baselines

Vec static_optimal_action(const SpectralMatrix& a, const Vec& x0, const MinimizerTrace& trace) {
    if (!a.is_scalar()) throw NotScalarMatrix("static optimal: hitting matrix must be scalar");
    if (static_cast<int>(x0.size()) != a.dim())
        throw DimensionMismatch("static optimal: x0 length differs from dimension");
    if (trace.v.empty()) throw EmptyInput("static optimal: empty trace");
    if (trace.dim() != a.dim())
        throw DimensionMismatch("static optimal: trace dimension differs from matrix");
    const double lambda = a.eigvals().front();
    const int t_total = trace.horizon();
    Vec sum(a.dim(), 0.0);
    for (const Vec& v : trace.v) sum = add(sum, v);
    Vec x(a.dim());
    for (int i = 0; i < a.dim(); ++i)
        x[i] = (x0[i] + lambda * sum[i]) / (1.0 + lambda * t_total);
    return x;
}

double static_optimal_expected_cost(double lambda, double sigma2, int horizon) {
    if (!(lambda > 0.0)) throw EigvalOutOfRange("static cost: lambda must be positive");
    if (!(sigma2 >= 0.0)) throw InvalidParameter("static cost: sigma2 must be non-negative");
    if (horizon < 1) throw HorizonMismatch("static cost: horizon must be at least 1");
    const double t = horizon;
    const double den = (1.0 + lambda * t) * (1.0 + lambda * t);
    const double hit_var =
        sigma2 * lambda * lambda / 12.0 * ((lambda * t + 2.0) * (t - 1.0) * t * (t + 1.0) / den);
    const double hit_mean = lambda * sigma2 / (2.0 * den) * (t * (t + 1.0) / 2.0);
    const double move = 0.5 * (lambda * lambda * sigma2 / den) * (t * (t + 1.0) * (2.0 * t + 1.0) / 6.0);
    return hit_var + hit_mean + move;
}

// ---------------------------------------------------------------------------
// Offline optimum

double offline_kkt_residual(const SpectralMatrix& a, const Vec& x0, const MinimizerTrace& trace,
                            const std::vector<Vec>& actions) {
    const int t_total = trace.horizon();
    if (static_cast<int>(actions.size()) != t_total)
        throw HorizonMismatch("kkt residual: one action per round required");
    const Mat a_dense = a.reconstruct();
    double worst = 0.0;
    // (A+2I)x_t - x_{t-1} - x_{t+1} = A v_t interior, (A+I)x_T - x_{T-1} = A v_T.
    for (int t = 1; t <= t_total; ++t) {
        const Vec& xt = actions[static_cast<size_t>(t - 1)];
        Vec res = a_dense * sub(xt, trace.v[static_cast<size_t>(t - 1)]);
        res = add(res, sub(xt, (t == 1) ? x0 : actions[static_cast<size_t>(t - 2)]));
        if (t < t_total) res = sub(res, sub(actions[static_cast<size_t>(t)], xt));
        worst = std::max(worst, norm_inf(res));
    }
    return worst;
}

PolicyRun offline_optimal(const SpectralMatrix& a, const Vec& x0, const MinimizerTrace& trace) {
    const int d = a.dim();
    if (static_cast<int>(x0.size()) != d)
        throw DimensionMismatch("offline: x0 length differs from dimension");
    if (trace.v.empty()) throw EmptyInput("offline: empty trace");
    if (trace.dim() != d) throw DimensionMismatch("offline: trace dimension differs from matrix");
    const int t_total = trace.horizon();

    const Mat a_dense = a.reconstruct();
    Mat d_mid = a_dense;  // A + 2I for interior rounds
    Mat d_last = a_dense; // A + I for the final round
    for (int i = 0; i < d; ++i) {
        d_mid(i, i) += 2.0;
        d_last(i, i) += 1.0;
    }

    // Reduced system M_t x_t - x_{t+1} = r_t, eliminated forward.
    std::vector<Mat> m_inv(static_cast<size_t>(t_total));
    std::vector<Vec> r(static_cast<size_t>(t_total));
    Mat m = (t_total == 1) ? d_last : d_mid;
    r[0] = add(a_dense * trace.v[0], x0);
    m_inv[0] = invert(m);
    for (int t = 2; t <= t_total; ++t) {
        Mat base = (t == t_total) ? d_last : d_mid;
        m = base - m_inv[static_cast<size_t>(t - 2)];
        m_inv[static_cast<size_t>(t - 1)] = invert(m);
        r[static_cast<size_t>(t - 1)] =
            add(a_dense * trace.v[static_cast<size_t>(t - 1)],
                m_inv[static_cast<size_t>(t - 2)] * r[static_cast<size_t>(t - 2)]);
    }

    std::vector<Vec> x(static_cast<size_t>(t_total));
    x[static_cast<size_t>(t_total - 1)] =
        m_inv[static_cast<size_t>(t_total - 1)] * r[static_cast<size_t>(t_total - 1)];
    for (int t = t_total - 1; t >= 1; --t)
        x[static_cast<size_t>(t - 1)] =
            m_inv[static_cast<size_t>(t - 1)] * add(r[static_cast<size_t>(t - 1)], x[static_cast<size_t>(t)]);

    double v_scale = 0.0;
    for (const Vec& v : trace.v) v_scale = std::max(v_scale, norm_inf(v));
    if (offline_kkt_residual(a, x0, trace, x) > 1e-10 * (1.0 + v_scale))
        throw SolveFailure("offline: first-order residual above tolerance");

    PolicyRun run;
    run.actions = std::move(x);
    run.hit_costs.resize(static_cast<size_t>(t_total));
    run.switch_costs.resize(static_cast<size_t>(t_total));
    for (int t = 1; t <= t_total; ++t) {
        const Vec& xt = run.actions[static_cast<size_t>(t - 1)];
        const Vec gap = sub(xt, trace.v[static_cast<size_t>(t - 1)]);
        run.hit_costs[static_cast<size_t>(t - 1)] = 0.5 * dot(gap, a_dense * gap);
        const Vec& prev = (t == 1) ? x0 : run.actions[static_cast<size_t>(t - 2)];
        run.switch_costs[static_cast<size_t>(t - 1)] = 0.5 * norm2_sq(sub(xt, prev));
        run.total += run.hit_costs[static_cast<size_t>(t - 1)] +
                     run.switch_costs[static_cast<size_t>(t - 1)];
    }
    return run;
}

// ---------------------------------------------------------------------------
// Policy specs

PolicySpec parse_policy_spec(const std::string& text) {
    PolicySpec spec;
    if (text == "lai") {
        spec.kind = PolicySpec::Kind::Lai;
    } else if (text.rfind("lai-gamma:", 0) == 0) {
        spec.kind = PolicySpec::Kind::LaiGamma;
        try {
            spec.gamma = std::stod(text.substr(10));
        } catch (const std::exception&) {
            throw InvalidParameter("policy spec: bad gamma in '" + text + "'");
        }
        if (!(spec.gamma >= 0.0) || !(spec.gamma <= 1.0))
            throw GammaOutOfRange("policy spec: gamma outside [0, 1]");
    } else if (text == "robd") {
        spec.kind = PolicySpec::Kind::Robd;
    } else if (text.rfind("fi:", 0) == 0) {
        spec.kind = PolicySpec::Kind::Fi;
        std::istringstream ss(text.substr(3));
        std::string item;
        while (std::getline(ss, item, ',')) {
            try {
                spec.fi_eigvals.push_back(std::stod(item));
            } catch (const std::exception&) {
                throw InvalidParameter("policy spec: bad eigenvalue in '" + text + "'");
            }
        }
        if (spec.fi_eigvals.empty())
            throw InvalidParameter("policy spec: fi needs at least one eigenvalue");
    } else if (text == "ftm") {
        spec.kind = PolicySpec::Kind::Ftm;
    } else if (text == "static-opt") {
        spec.kind = PolicySpec::Kind::StaticOpt;
    } else if (text == "offline-opt") {
        spec.kind = PolicySpec::Kind::OfflineOpt;
    } else if (text == "general-opt") {
        spec.kind = PolicySpec::Kind::GeneralOpt;
    } else {
        throw InvalidParameter("policy spec: unknown policy '" + text + "'");
    }
    return spec;
}

std::string to_string(const PolicySpec& spec) {
    std::ostringstream out;
    switch (spec.kind) {
        case PolicySpec::Kind::Lai: return "lai";
        case PolicySpec::Kind::LaiGamma:
            out << "lai-gamma:" << spec.gamma;
            return out.str();
        case PolicySpec::Kind::Robd: return "robd";
        case PolicySpec::Kind::Fi: {
            out << "fi:";
            for (size_t i = 0; i < spec.fi_eigvals.size(); ++i)
                out << (i ? "," : "") << spec.fi_eigvals[i];
            return out.str();
        }
        case PolicySpec::Kind::Ftm: return "ftm";
        case PolicySpec::Kind::StaticOpt: return "static-opt";
        case PolicySpec::Kind::OfflineOpt: return "offline-opt";
        case PolicySpec::Kind::GeneralOpt: return "general-opt";
    }
    throw InvalidParameter("policy spec: unknown kind");
}

namespace {

PolicyRun ledger_for_actions(const SpectralMatrix& a, const MinimizerTrace& trace,
                             std::vector<Vec> actions) {
    const Mat a_dense = a.reconstruct();
    PolicyRun run;
    run.actions = std::move(actions);
    const int t_total = trace.horizon();
    run.hit_costs.resize(static_cast<size_t>(t_total));
    run.switch_costs.resize(static_cast<size_t>(t_total));
    for (int t = 1; t <= t_total; ++t) {
        const Vec& xt = run.actions[static_cast<size_t>(t - 1)];
        const Vec gap = sub(xt, trace.v[static_cast<size_t>(t - 1)]);
        run.hit_costs[static_cast<size_t>(t - 1)] = 0.5 * dot(gap, a_dense * gap);
        const Vec& prev = (t == 1) ? trace.x0 : run.actions[static_cast<size_t>(t - 2)];
        run.switch_costs[static_cast<size_t>(t - 1)] = 0.5 * norm2_sq(sub(xt, prev));
        run.total += run.hit_costs[static_cast<size_t>(t - 1)] +
                     run.switch_costs[static_cast<size_t>(t - 1)];
    }
    return run;
}

}  // namespace

PolicyRun run_policy(const PolicySpec& spec, const SpectralMatrix& a, const MinimizerTrace& trace,
                     const DriftOracle* drift) {
    if (trace.v.empty()) throw EmptyInput("run_policy: empty trace");
    if (trace.dim() != a.dim())
        throw DimensionMismatch("run_policy: trace dimension differs from matrix");
    const int t_total = trace.horizon();

    switch (spec.kind) {
        case PolicySpec::Kind::Ftm:
            return ledger_for_actions(a, trace, trace.v);
        case PolicySpec::Kind::StaticOpt: {
            const Vec x_star = static_optimal_action(a, trace.x0, trace);
            return ledger_for_actions(a, trace,
                                      std::vector<Vec>(static_cast<size_t>(t_total), x_star));
        }
        case PolicySpec::Kind::OfflineOpt:
            return offline_optimal(a, trace.x0, trace);
        default:
            break;
    }

    CoefficientSchedule sched = [&] {
        switch (spec.kind) {
            case PolicySpec::Kind::Lai:
            case PolicySpec::Kind::GeneralOpt:
                return lai_schedule(a, t_total);
            case PolicySpec::Kind::LaiGamma:
                return lai_gamma_schedule(a, t_total, spec.gamma);
            case PolicySpec::Kind::Robd:
                return robd_schedule(a, t_total);
            case PolicySpec::Kind::Fi:
                return fi_schedule(a, spec.fi_eigvals, t_total);
            default:
                throw InvalidParameter("run_policy: unhandled policy kind");
        }
    }();

    PolicyState state(sched, trace.x0);
    std::vector<Vec> actions;
    actions.reserve(static_cast<size_t>(t_total));
    const DriftOracle zero = DriftOracle::zero();
    const DriftOracle& oracle = drift ? *drift : zero;
    for (int t = 1; t <= t_total; ++t) {
        const Vec& v = trace.v[static_cast<size_t>(t - 1)];
        if (spec.kind == PolicySpec::Kind::GeneralOpt)
            actions.push_back(step_general_optimal(state, v, oracle));
        else
            actions.push_back(step_interpolation(state, v));
    }
    return ledger_for_actions(a, trace, std::move(actions));
}

}  // namespace soqo
