#pragma once

#include <optional>
#include <string>
#include <utility>

#include "soqo/schedules.hpp"
#include "soqo/spectral.hpp"

namespace soqo {

// Closed-form guarantees, gathered so callers (and the CLI) can emit one
// JSON object. Fields are present only when the inputs needed to evaluate
// them were supplied.
struct BoundReport {
    std::optional<double> lai_cost_exact;
    std::optional<double> lai_cost_upper;
    std::optional<double> fi_regret_lower;
    std::optional<double> lai_gamma_regret_upper;
    std::optional<double> lai_gamma_regret_upper_dimsum;
    std::optional<double> robd_cr;
    std::optional<double> lai_cr_upper;
    std::optional<double> lai_gamma_cr_upper;
    std::optional<double> lai1_cr_smalllambda;
    std::optional<double> ftm_regret_lower;
    std::optional<double> framework_cr;

    std::string to_json() const;
};

// Exact expected total cost of the horizon-aware schedule under a
// martingale with per-round increment covariance sigma (constant across
// rounds), plus the matching upper bound with every coefficient replaced by
// its fixed point. x0_gap is the deterministic offset E[v_1] - x0 - E[u_1]
// carrier: its quadratic form through (I - C_1) joins the round-1 term.
std::pair<double, double> lai_expected_cost(const SpectralMatrix& a, const Mat& sigma,
                                            int horizon, const Vec& x0_gap);
// Per-round covariances (size must equal horizon).
std::pair<double, double> lai_expected_cost(const SpectralMatrix& a,
                                            const std::vector<Mat>& sigma_per_round, int horizon,
                                            const Vec& x0_gap);

// Interpolation penalty w(α, c) = (α c² + (1-c)²) / (1 - c²); minimized
// over c at the fixed point, with minimum 1 - c(α).
double w_interpolation_gap(double alpha, double c);

// Lower bound on the expected regret of the constant schedule with
// eigenvalues c_eigvals against the horizon-aware schedule:
// T/2 * Σ_{j∉Z} (w(λⱼ, cⱼ) - (1 - λⱼᴸ)) qⱼ - (c_max²/(1-c_max²)) tr(Σ)/2,
// where Z collects coordinates with cⱼ equal to the fixed point within
// 1e-12 and qⱼ = pⱼᵀ Σ pⱼ.
double fi_regret_lower(const SpectralMatrix& a, const Mat& sigma, const Vec& c_eigvals,
                       int horizon);

// The same bound evaluated at the balanced-regularizer constant schedule.
double robd_regret_lower(const SpectralMatrix& a, const Mat& sigma, int horizon);

enum class RegretBoundVariant { MinEig, DimSum };

// Horizon-independent regret ceiling for the γ-shifted schedule; sigma2 is
// the total increment variance tr(Σ).
double lai_gamma_regret_upper(const SpectralMatrix& a, double sigma2, double gamma,
                              RegretBoundVariant variant);

// Competitive-ratio ceilings computable from the spectrum alone (plus γ for
// the γ-shifted schedule when given).
BoundReport cr_bounds(const SpectralMatrix& a, std::optional<double> gamma = std::nullopt);

// Generic two-branch ceiling 1 + max{β'_max/m, (β²/α)/(α'_min + m)} for
// m-strongly-convex hitting costs, a switching kernel that is α-strongly
// convex and β-smooth, and per-round tracking regularizers whose curvature
// eigenvalues lie in [α'_t, β'_t].
double framework_cr(double m, double alpha, double beta, double alpha_prime_min,
                    double beta_prime_max);

// Extreme eigenvalues (α'_t, β'_t) of C_t^{-1} - I - A for the given round.
std::pair<double, double> schedule_strong_smooth(const CoefficientSchedule& schedule, int t);

// Linear-regret floor for the follow-the-minimizer policy: c(λ_max)/2 * σ² * T.
double ftm_regret_lower(const SpectralMatrix& a, double sigma2, int horizon);

}  // namespace soqo
