#pragma once

#include <functional>
#include <string>

#include "soqo/environments.hpp"
#include "soqo/schedules.hpp"
#include "soqo/spectral.hpp"

namespace soqo {

// Realized run of a decision policy on one minimizer trace. Costs per round:
// hit = 1/2 (x-v)ᵀA(x-v), switch = 1/2 ||x - x_prev||².
struct PolicyRun {
    std::vector<Vec> actions;
    Vec hit_costs;
    Vec switch_costs;
    double total = 0.0;
};

// Conditional drift forecast: increments(t, revealed) returns
// E[v_s - v_{s-1} | info at round t] for s = t+1 .. T, i.e. horizon - t
// vectors. The zero oracle encodes the martingale case.
class DriftOracle {
  public:
    using Fn = std::function<std::vector<Vec>(int t, const std::vector<Vec>& revealed)>;

    static DriftOracle zero();
    // Foresees the given trace exactly (deterministic minimizers).
    static DriftOracle perfect(const MinimizerTrace& trace);
    explicit DriftOracle(Fn fn) : fn_(std::move(fn)) {}

    std::vector<Vec> increments(int t, const std::vector<Vec>& revealed, int horizon,
                                int dim) const;

  private:
    Fn fn_;  // empty function = zero oracle
};

// Stepper state: previous action, 1-based next round, revealed minimizers.
class PolicyState {
  public:
    PolicyState(const CoefficientSchedule& schedule, Vec x0);

    const CoefficientSchedule& schedule() const { return *schedule_; }
    const Vec& previous_action() const { return x_prev_; }
    int round() const { return round_; }  // the round the next step will play
    const std::vector<Vec>& revealed() const { return revealed_; }

    void advance(const Vec& v, Vec x);

  private:
    const CoefficientSchedule* schedule_;
    Vec x_prev_;
    int round_ = 1;
    std::vector<Vec> revealed_;
};

// x_t = C_t x_{t-1} + (I - C_t) v_t, evaluated in the eigenbasis.
Vec step_interpolation(PolicyState& state, const Vec& v_t);

// Interpolation plus the forecast correction
// sum_{s>t} (prod_{q=t}^{s-1} C_q)(I - C_s) E[v_s - v_{s-1} | F_t].
Vec step_general_optimal(PolicyState& state, const Vec& v_t, const DriftOracle& drift);

// Single best constant action in hindsight for scalar hitting cost
// (A = λI; NotScalarMatrix otherwise): x* = (x0 + λ Σ v_t) / (1 + λT).
Vec static_optimal_action(const SpectralMatrix& a, const Vec& x0, const MinimizerTrace& trace);

// Expected total cost of the hindsight-constant action under a scalar
// martingale with per-coordinate increment variance sigma2 (d = 1 form);
// grows as Θ(T²).
double static_optimal_expected_cost(double lambda, double sigma2, int horizon);

// Exact clairvoyant minimizer of the full objective via block-tridiagonal
// forward elimination / back substitution on d x d blocks. Verifies the
// first-order conditions to 1e-10 * (1 + ||v||_inf); SolveFailure otherwise.
PolicyRun offline_optimal(const SpectralMatrix& a, const Vec& x0, const MinimizerTrace& trace);

// Max-norm of the full objective's first-order conditions at an arbitrary
// action sequence (zero iff the sequence is the offline optimum).
double offline_kkt_residual(const SpectralMatrix& a, const Vec& x0, const MinimizerTrace& trace,
                            const std::vector<Vec>& actions);

struct PolicySpec {
    enum class Kind { Lai, LaiGamma, Robd, Fi, Ftm, StaticOpt, OfflineOpt, GeneralOpt };
    Kind kind = Kind::Lai;
    double gamma = 0.0;  // LaiGamma
    Vec fi_eigvals;      // Fi
};

// Named strings: lai | lai-gamma:<g> | robd | fi:<c1,c2,...> | ftm |
// static-opt | offline-opt | general-opt.
PolicySpec parse_policy_spec(const std::string& text);
std::string to_string(const PolicySpec& spec);

// Plays the policy over the whole trace and fills the cost ledger.
// general-opt uses the zero oracle when drift is null.
PolicyRun run_policy(const PolicySpec& spec, const SpectralMatrix& a, const MinimizerTrace& trace,
                     const DriftOracle* drift = nullptr);

}  // namespace soqo
