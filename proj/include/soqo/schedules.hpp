#pragma once

#include "soqo/spectral.hpp"

namespace soqo {

enum class ScheduleKind { Lai, LaiGamma, Fi, Robd };

// Per-round interpolation coefficients in the eigenbasis of the hitting
// matrix. rho(t, i) is the weight the round-t action puts on the previous
// action along eigendirection i; all values live in (0, 1). Materialized
// eagerly as a T x d table.
class CoefficientSchedule {
  public:
    CoefficientSchedule(const SpectralMatrix& base, ScheduleKind kind,
                        std::vector<Vec> rounds, double gamma = 0.0);

    int horizon() const { return static_cast<int>(rounds_.size()); }
    int dim() const { return base_.dim(); }
    const SpectralMatrix& base() const { return base_; }
    ScheduleKind kind() const { return kind_; }
    double gamma() const { return gamma_; }

    // t is 1-based (rounds 1..T).
    const Vec& round(int t) const;
    double rho(int t, int i) const { return round(t)[i]; }

  private:
    SpectralMatrix base_;
    ScheduleKind kind_;
    double gamma_;
    std::vector<Vec> rounds_;
};

// μ shift applied to the terminal inverse: λ/2 * ((1 + 4/λ)^(γ/2) - 1),
// computed overflow-safely as λ/2 * expm1(γ/2 * log1p(4/λ)).
double gamma_shift(double lambda, double gamma);

// γ = 1 shift, the regularizer weight that balances hitting against
// switching in the worst case: λ/2 * (sqrt(1 + 4/λ) - 1).
double robd_mu2(double lambda);

// Horizon-aware schedule: terminal coefficient 1/(1+λ), then backward
// ρᵗ = 1 / (2 + λ - ρᵗ⁺¹). Monotone decreasing toward the fixed point as
// t moves away from T.
CoefficientSchedule lai_schedule(const SpectralMatrix& a, int horizon);

// Same recursion started from the shifted terminal 1/(1 + λ + γ_shift).
// γ = 0 reproduces lai_schedule exactly; γ = 1 pins every round at the
// fixed point. Throws GammaOutOfRange outside [0, 1].
CoefficientSchedule lai_gamma_schedule(const SpectralMatrix& a, int horizon, double gamma);

// Constant schedule with eigenvalues 1/(λᵢ + 1 + robd_mu2(λ_min)).
CoefficientSchedule robd_schedule(const SpectralMatrix& a, int horizon);

// Constant schedule with caller-chosen eigenvalues; each must lie strictly
// inside (0, 1) (EigvalOutOfRange otherwise) and pair with a's i-th
// ascending eigenvalue.
CoefficientSchedule fi_schedule(const SpectralMatrix& a, const Vec& c_eigvals, int horizon);

// Per-eigendirection upper bound on the gap between the horizon-aware
// coefficient and its γ-shifted variant at the given round:
// λ/2 * ((1+4/λ)^(γ/2) - 1) * (1/(1+λ))^(2(T-t+1)).
Vec eigen_gap_bound(const SpectralMatrix& a, int horizon, double gamma, int round);

}  // namespace soqo
