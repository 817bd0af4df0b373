#include "soqo/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "soqo/errors.hpp"

namespace soqo {

std::string BoundReport::to_json() const {
    nlohmann::json j;
    auto put = [&](const char* name, const std::optional<double>& v) {
        if (v) j[name] = *v;
    };
    put("lai_cost_exact", lai_cost_exact);
    put("lai_cost_upper", lai_cost_upper);
    put("fi_regret_lower", fi_regret_lower);
    put("lai_gamma_regret_upper", lai_gamma_regret_upper);
    put("lai_gamma_regret_upper_dimsum", lai_gamma_regret_upper_dimsum);
    put("robd_cr", robd_cr);
    put("lai_cr_upper", lai_cr_upper);
    put("lai_gamma_cr_upper", lai_gamma_cr_upper);
    put("lai1_cr_smalllambda", lai1_cr_smalllambda);
    put("ftm_regret_lower", ftm_regret_lower);
    put("framework_cr", framework_cr);
    return j.dump(2);
}

namespace {

// Quadratic forms of sigma through a's eigenvectors: q_i = p_iᵀ Σ p_i.
Vec sigma_quadforms(const SpectralMatrix& a, const Mat& sigma) {
    if (sigma.dim() != a.dim())
        throw DimensionMismatch("bounds: covariance dimension differs from matrix");
    Vec q(a.dim());
    for (int i = 0; i < a.dim(); ++i) {
        const Vec p = a.eigenvector(i);
        q[i] = dot(p, sigma * p);
    }
    return q;
}

double trace_of(const Mat& m) {
    double s = 0.0;
    for (int i = 0; i < m.dim(); ++i) s += m(i, i);
    return s;
}

}  // namespace

std::pair<double, double> lai_expected_cost(const SpectralMatrix& a, const Mat& sigma,
                                            int horizon, const Vec& x0_gap) {
    return lai_expected_cost(a, std::vector<Mat>(static_cast<size_t>(horizon), sigma), horizon,
                             x0_gap);
}

std::pair<double, double> lai_expected_cost(const SpectralMatrix& a,
                                            const std::vector<Mat>& sigma_per_round, int horizon,
                                            const Vec& x0_gap) {
    if (horizon < 1) throw HorizonMismatch("lai_expected_cost: horizon must be at least 1");
    if (static_cast<int>(sigma_per_round.size()) != horizon)
        throw HorizonMismatch("lai_expected_cost: one covariance per round required");
    if (!x0_gap.empty() && static_cast<int>(x0_gap.size()) != a.dim())
        throw DimensionMismatch("lai_expected_cost: x0_gap length differs from dimension");

    const CoefficientSchedule sched = lai_schedule(a, horizon);
    const int d = a.dim();
    Vec fixed(d);
    for (int i = 0; i < d; ++i) fixed[i] = fixed_point_eigenvalue(a.eigvals()[i]);

    double exact = 0.0, upper = 0.0;
    for (int t = 1; t <= horizon; ++t) {
        const Vec q = sigma_quadforms(a, sigma_per_round[static_cast<size_t>(t - 1)]);
        const Vec& rho = sched.round(t);
        for (int i = 0; i < d; ++i) {
            exact += 0.5 * (1.0 - rho[i]) * q[i];
            upper += 0.5 * (1.0 - fixed[i]) * q[i];
        }
    }
    if (!x0_gap.empty()) {
        const Vec g = a.to_eigenbasis(x0_gap);
        const Vec& rho1 = sched.round(1);
        for (int i = 0; i < d; ++i) {
            exact += 0.5 * (1.0 - rho1[i]) * g[i] * g[i];
            upper += 0.5 * (1.0 - fixed[i]) * g[i] * g[i];
        }
    }
    return {exact, upper};
}

double w_interpolation_gap(double alpha, double c) {
    if (!(alpha > 0.0)) throw EigvalOutOfRange("w: alpha must be positive");
    if (!(c > 0.0) || !(c < 1.0)) throw EigvalOutOfRange("w: c outside (0, 1)");
    return (alpha * c * c + (1.0 - c) * (1.0 - c)) / (1.0 - c * c);
}

double fi_regret_lower(const SpectralMatrix& a, const Mat& sigma, const Vec& c_eigvals,
                       int horizon) {
    if (horizon < 1) throw HorizonMismatch("fi_regret_lower: horizon must be at least 1");
    if (static_cast<int>(c_eigvals.size()) != a.dim())
        throw DimensionMismatch("fi_regret_lower: eigenvalue count differs from dimension");
    const Vec q = sigma_quadforms(a, sigma);
    double slope = 0.0;
    double c_max = 0.0;
    for (int i = 0; i < a.dim(); ++i) {
        const double c = c_eigvals[i];
        if (!(c > 0.0) || !(c < 1.0))
            throw EigvalOutOfRange("fi_regret_lower: coefficient outside (0, 1)");
        c_max = std::max(c_max, c);
        const double fixed = fixed_point_eigenvalue(a.eigvals()[i]);
        if (std::abs(c - fixed) <= 1e-12) continue;  // coordinate already at the fixed point
        slope += (w_interpolation_gap(a.eigvals()[i], c) - (1.0 - fixed)) * q[i];
    }
    const double correction = c_max * c_max / (1.0 - c_max * c_max) * trace_of(sigma) / 2.0;
    return 0.5 * horizon * slope - correction;
}

double robd_regret_lower(const SpectralMatrix& a, const Mat& sigma, int horizon) {
    const double mu = robd_mu2(a.min_eigval());
    Vec c(a.dim());
    for (int i = 0; i < a.dim(); ++i) c[i] = 1.0 / (a.eigvals()[i] + 1.0 + mu);
    return fi_regret_lower(a, sigma, c, horizon);
}

double lai_gamma_regret_upper(const SpectralMatrix& a, double sigma2, double gamma,
                              RegretBoundVariant variant) {
    if (!(sigma2 >= 0.0)) throw InvalidParameter("regret bound: sigma2 must be non-negative");
    if (!(gamma >= 0.0) || !(gamma <= 1.0))
        throw GammaOutOfRange("regret bound: gamma outside [0, 1]");
    auto term = [&](double l) {
        return std::expm1(0.5 * gamma * std::log1p(4.0 / l)) / (l + 2.0);
    };
    if (variant == RegretBoundVariant::MinEig) return sigma2 / 4.0 * term(a.min_eigval());
    double s = 0.0;
    for (double l : a.eigvals()) s += term(l);
    return sigma2 / 4.0 * s;
}

BoundReport cr_bounds(const SpectralMatrix& a, std::optional<double> gamma) {
    const double lmin = a.min_eigval();
    const double kappa = a.condition_number();
    BoundReport report;
    report.robd_cr = 1.0 + 0.5 * (std::sqrt(1.0 + 4.0 / lmin) - 1.0);
    report.lai_cr_upper = 1.0 + 1.0 / lmin;
    report.lai1_cr_smalllambda = 1.0 + std::sqrt(kappa / lmin);
    if (gamma) {
        if (!(*gamma >= 0.0) || !(*gamma <= 1.0))
            throw GammaOutOfRange("cr_bounds: gamma outside [0, 1]");
        const double branch1 =
            0.5 * (std::sqrt(kappa * kappa + 4.0 * kappa / lmin) - kappa);
        const double branch2 =
            (2.0 / lmin) / (std::exp(0.5 * *gamma * std::log1p(4.0 / lmin)) + 1.0);
        report.lai_gamma_cr_upper = 1.0 + std::max(branch1, branch2);
    }
    return report;
}

double framework_cr(double m, double alpha, double beta, double alpha_prime_min,
                    double beta_prime_max) {
    if (!(m > 0.0)) throw InvalidParameter("framework_cr: m must be positive");
    if (!(alpha > 0.0) || !(beta >= alpha))
        throw InvalidParameter("framework_cr: need 0 < alpha <= beta");
    if (!(alpha_prime_min >= 0.0) || !(beta_prime_max >= alpha_prime_min))
        throw InvalidParameter("framework_cr: need 0 <= alpha'_min <= beta'_max");
    return 1.0 + std::max(beta_prime_max / m, (beta * beta / alpha) / (alpha_prime_min + m));
}

std::pair<double, double> schedule_strong_smooth(const CoefficientSchedule& schedule, int t) {
    const Vec& rho = schedule.round(t);
    const Vec& ev = schedule.base().eigvals();
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < rho.size(); ++i) {
        const double slack = 1.0 / rho[i] - 1.0 - ev[i];
        lo = std::min(lo, slack);
        hi = std::max(hi, slack);
    }
    return {lo, hi};
}

double ftm_regret_lower(const SpectralMatrix& a, double sigma2, int horizon) {
    if (!(sigma2 >= 0.0)) throw InvalidParameter("ftm bound: sigma2 must be non-negative");
    if (horizon < 1) throw HorizonMismatch("ftm bound: horizon must be at least 1");
    return 0.5 * fixed_point_eigenvalue(a.max_eigval()) * sigma2 * horizon;
}

}  // namespace soqo
