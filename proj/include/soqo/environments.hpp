#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "soqo/linalg.hpp"
#include "soqo/rng.hpp"

namespace soqo {

enum class IncrementFamily {
    Uniform,
    Normal,
    Laplace,
    Logistic,
    Gumbel,
    LognormalSym,
    LomaxSym,
};

// One increment distribution, mean zero by construction, with the scale set
// analytically so each coordinate has variance sigma_c2. The two heavy-tail
// families are symmetrized by an independent +-1 sign.
struct IncrementSpec {
    IncrementFamily family = IncrementFamily::Normal;
    double sigma_c2 = 1.0;
    double lomax_alpha = 2.5;     // tail index, must exceed 2
    double lognormal_sigma = 1.0; // log-scale shape parameter
};

void validate(const IncrementSpec& spec);

// One draw for a single coordinate.
double draw_increment(const IncrementSpec& spec, RngStream& rng);

struct AdversaryRule {
    enum class Kind { AlternatingRay, FixedPoints };
    Kind kind = Kind::AlternatingRay;
    double amplitude = 0.0;
    Vec direction;               // unit vector for AlternatingRay
    std::vector<Vec> points;     // cycled in order for FixedPoints
};

// Minimizers x0 +- R * direction, alternating sign per adversarial round
// (+ first). direction is normalized here; zero direction rejected.
AdversaryRule alternating_ray(Vec direction, double amplitude);

// Replays the given points in adversarial-round order, cycling when the
// list is shorter than the adversarial set.
AdversaryRule fixed_points(std::vector<Vec> points);

enum class TraceModeKind { Martingale, ShiftSchedule, Mixed, PureAdversarial };

struct TraceSpec {
    int dim = 1;
    int horizon = 1;
    Vec x0;  // empty means the origin

    TraceModeKind mode = TraceModeKind::Martingale;
    IncrementSpec base;                     // Martingale and Mixed
    std::vector<IncrementSpec> segments;    // ShiftSchedule: exactly 5
    // Covariance imposed on the concatenated, unit-standardized increments:
    // (d*T)^2 in Martingale mode, (d*T/5)^2 per segment in ShiftSchedule.
    std::optional<Mat> correlation;
    double adversarial_pct = 0.0;           // Mixed: percent of rounds replaced
    std::optional<AdversaryRule> adversary; // Mixed and PureAdversarial

    std::uint64_t seed = 0;
};

void validate(const TraceSpec& spec);

struct MinimizerTrace {
    std::vector<Vec> v;  // v[t-1] is the round-t minimizer
    Vec x0;
    TraceSpec spec;
    int replication = 0;

    int horizon() const { return static_cast<int>(v.size()); }
    int dim() const { return static_cast<int>(x0.size()); }
};

// Applies the Cholesky factor of sigma_block to the concatenation of the
// given unit-variance increments (callers standardize first) so the
// concatenated output has covariance sigma_block.
std::vector<Vec> correlate(const std::vector<Vec>& increments, const Mat& sigma_block);

// The fixed adversarial round subset for (spec.seed, adversarial_pct):
// round(p/100 * T) rounds drawn without replacement, sorted ascending,
// independent of the replication index.
std::vector<int> adversarial_rounds(const TraceSpec& spec);

// Builds minimizers v_t = x0 + sum of increments, each replication on its
// own derived substream; Mixed mode then overwrites the adversarial subset
// with the rule's points (identical across replications).
MinimizerTrace generate_trace(const TraceSpec& spec, int replication);

// CSV with header t,coord,value plus a JSON sidecar <path>.json holding
// dimensions, x0, and replication provenance.
void write_trace_csv(const std::string& path, const MinimizerTrace& trace);
MinimizerTrace read_trace_csv(const std::string& path);

}  // namespace soqo
