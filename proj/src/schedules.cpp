#include "soqo/schedules.hpp"

#include <cmath>
#include <string>

#include "soqo/errors.hpp"

namespace soqo {

CoefficientSchedule::CoefficientSchedule(const SpectralMatrix& base, ScheduleKind kind,
                                         std::vector<Vec> rounds, double gamma)
    : base_(base), kind_(kind), gamma_(gamma), rounds_(std::move(rounds)) {
    if (rounds_.empty()) throw HorizonMismatch("schedule: horizon must be at least 1");
    const int d = base_.dim();
    for (const Vec& r : rounds_) {
        if (static_cast<int>(r.size()) != d)
            throw DimensionMismatch("schedule: round width differs from base dimension");
        for (double v : r)
            if (!(v > 0.0) || !(v < 1.0))
                throw EigvalOutOfRange("schedule: coefficient outside (0, 1)");
    }
}

const Vec& CoefficientSchedule::round(int t) const {
    if (t < 1 || t > horizon())
        throw HorizonMismatch("schedule: round " + std::to_string(t) + " outside 1.." +
                              std::to_string(horizon()));
    return rounds_[static_cast<size_t>(t - 1)];
}

double gamma_shift(double lambda, double gamma) {
    if (!(gamma >= 0.0) || !(gamma <= 1.0))
        throw GammaOutOfRange("gamma_shift: gamma outside [0, 1]");
    if (!(lambda > 0.0)) throw EigvalOutOfRange("gamma_shift: eigenvalue must be positive");
    return 0.5 * lambda * std::expm1(0.5 * gamma * std::log1p(4.0 / lambda));
}

double robd_mu2(double lambda) { return gamma_shift(lambda, 1.0); }

namespace {

std::vector<Vec> backward_rounds(const Vec& eigvals, int horizon, const Vec& terminal) {
    const int d = static_cast<int>(eigvals.size());
    std::vector<Vec> rounds(static_cast<size_t>(horizon), Vec(d));
    rounds[static_cast<size_t>(horizon - 1)] = terminal;
    for (int t = horizon - 1; t >= 1; --t) {
        const Vec& next = rounds[static_cast<size_t>(t)];
        Vec& cur = rounds[static_cast<size_t>(t - 1)];
        for (int i = 0; i < d; ++i) cur[i] = 1.0 / (2.0 + eigvals[i] - next[i]);
    }
    return rounds;
}

void check_horizon(int horizon) {
    if (horizon < 1) throw HorizonMismatch("schedule: horizon must be at least 1");
}

}  // namespace

CoefficientSchedule lai_schedule(const SpectralMatrix& a, int horizon) {
    check_horizon(horizon);
    const Vec& ev = a.eigvals();
    Vec terminal(ev.size());
    for (size_t i = 0; i < ev.size(); ++i) terminal[i] = 1.0 / (1.0 + ev[i]);
    return CoefficientSchedule(a, ScheduleKind::Lai, backward_rounds(ev, horizon, terminal));
}

CoefficientSchedule lai_gamma_schedule(const SpectralMatrix& a, int horizon, double gamma) {
    check_horizon(horizon);
    const Vec& ev = a.eigvals();
    Vec terminal(ev.size());
    for (size_t i = 0; i < ev.size(); ++i)
        terminal[i] = 1.0 / (1.0 + ev[i] + gamma_shift(ev[i], gamma));
    return CoefficientSchedule(a, ScheduleKind::LaiGamma, backward_rounds(ev, horizon, terminal),
                               gamma);
}

CoefficientSchedule robd_schedule(const SpectralMatrix& a, int horizon) {
    check_horizon(horizon);
    const Vec& ev = a.eigvals();
    const double mu = robd_mu2(a.min_eigval());
    Vec row(ev.size());
    for (size_t i = 0; i < ev.size(); ++i) row[i] = 1.0 / (ev[i] + 1.0 + mu);
    return CoefficientSchedule(a, ScheduleKind::Robd,
                               std::vector<Vec>(static_cast<size_t>(horizon), row));
}

CoefficientSchedule fi_schedule(const SpectralMatrix& a, const Vec& c_eigvals, int horizon) {
    check_horizon(horizon);
    if (static_cast<int>(c_eigvals.size()) != a.dim())
        throw DimensionMismatch("fi_schedule: eigenvalue count differs from base dimension");
    for (double c : c_eigvals)
        if (!(c > 0.0) || !(c < 1.0))
            throw EigvalOutOfRange("fi_schedule: coefficient outside (0, 1)");
    return CoefficientSchedule(a, ScheduleKind::Fi,
                               std::vector<Vec>(static_cast<size_t>(horizon), c_eigvals));
}

Vec eigen_gap_bound(const SpectralMatrix& a, int horizon, double gamma, int round) {
    check_horizon(horizon);
    if (round < 1 || round > horizon) throw HorizonMismatch("eigen_gap_bound: round outside 1..T");
    const Vec& ev = a.eigvals();
    Vec out(ev.size());
    for (size_t i = 0; i < ev.size(); ++i) {
        const double terminal = 1.0 / (1.0 + ev[i]);
        out[i] = gamma_shift(ev[i], gamma) *
                 std::pow(terminal, 2.0 * (horizon - round + 1));
    }
    return out;
}

}  // namespace soqo
