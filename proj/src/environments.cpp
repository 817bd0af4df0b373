#include "soqo/environments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "soqo/errors.hpp"

namespace soqo {

// ---------------------------------------------------------------------------
// RngStream

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;
constexpr std::uint64_t kSplitSalt = 0x632BE59BD9B4E019ull;
constexpr double kEulerGamma = 0.57721566490153286;
}  // namespace

std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
}

RngStream RngStream::split(std::uint64_t tag) const {
    return RngStream(mix64(key_ ^ mix64(tag * kGolden + kSplitSalt)));
}

std::uint64_t RngStream::next_u64() {
    ctr_ += 1;
    return mix64(key_ + ctr_ * kGolden);
}

double RngStream::next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::next_unit_open() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

namespace {
// Uniform on the open interval (0, 1); safe input for logit/log-log maps.
double unit_oo(RngStream& rng) {
    return (static_cast<double>(rng.next_u64() >> 11) + 0.5) * 0x1.0p-53;
}
}  // namespace

double RngStream::normal() {
    const double u1 = next_unit_open();
    const double u2 = next_unit();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
}

double RngStream::uniform_sym(double half_width) {
    return (2.0 * next_unit() - 1.0) * half_width;
}

double RngStream::laplace(double scale) {
    const double u = next_unit() - 0.5;
    const double mag = -scale * std::log1p(-2.0 * std::abs(u));
    return u < 0.0 ? -mag : mag;
}

double RngStream::logistic(double scale) {
    const double u = unit_oo(*this);
    return scale * std::log(u / (1.0 - u));
}

double RngStream::gumbel_centered(double scale) {
    const double u = unit_oo(*this);
    return -scale * std::log(-std::log(u)) - scale * kEulerGamma;
}

double RngStream::lognormal(double mu, double sigma) {
    return std::exp(mu + sigma * normal());
}

double RngStream::lomax(double alpha, double scale) {
    const double u = next_unit_open();
    return scale * std::expm1(-std::log(u) / alpha);
}

double RngStream::sign() { return (next_u64() & 1ull) ? 1.0 : -1.0; }

// ---------------------------------------------------------------------------
// Increment families

void validate(const IncrementSpec& spec) {
    if (!(spec.sigma_c2 >= 0.0) || !std::isfinite(spec.sigma_c2))
        throw InvalidParameter("increment: sigma_c2 must be finite and non-negative");
    if (spec.family == IncrementFamily::LomaxSym && !(spec.lomax_alpha > 2.0))
        throw InvalidParameter("increment: lomax_alpha must exceed 2");
    if (spec.family == IncrementFamily::LognormalSym &&
        (!(spec.lognormal_sigma > 0.0) || !std::isfinite(spec.lognormal_sigma)))
        throw InvalidParameter("increment: lognormal_sigma must be positive and finite");
}

double draw_increment(const IncrementSpec& spec, RngStream& rng) {
    if (spec.sigma_c2 == 0.0) return 0.0;
    const double sc = std::sqrt(spec.sigma_c2);
    switch (spec.family) {
        case IncrementFamily::Uniform:
            return rng.uniform_sym(std::sqrt(3.0) * sc);
        case IncrementFamily::Normal:
            return sc * rng.normal();
        case IncrementFamily::Laplace:
            return rng.laplace(sc / std::sqrt(2.0));
        case IncrementFamily::Logistic:
            return rng.logistic(sc * std::sqrt(3.0) / 3.141592653589793238463);
        case IncrementFamily::Gumbel:
            return rng.gumbel_centered(sc * std::sqrt(6.0) / 3.141592653589793238463);
        case IncrementFamily::LognormalSym: {
            // Rescaled so the symmetrized draw has variance sigma_c2 exactly:
            // Var(s k Y) = k^2 E[Y^2] = k^2 exp(2 sigma_ln^2).
            const double k = sc * std::exp(-spec.lognormal_sigma * spec.lognormal_sigma);
            const double y = rng.lognormal(0.0, spec.lognormal_sigma);
            return rng.sign() * k * y;
        }
        case IncrementFamily::LomaxSym: {
            // Var(s Y) = E[Y^2] = 2 scale^2 / ((alpha-1)(alpha-2)).
            const double a = spec.lomax_alpha;
            const double scale = sc * std::sqrt((a - 1.0) * (a - 2.0) / 2.0);
            const double y = rng.lomax(a, scale);
            return rng.sign() * y;
        }
    }
    throw InvalidParameter("increment: unknown family");
}

// ---------------------------------------------------------------------------
// Adversary rules

AdversaryRule alternating_ray(Vec direction, double amplitude) {
    if (direction.empty()) throw EmptyInput("alternating_ray: empty direction");
    if (!(amplitude >= 0.0) || !std::isfinite(amplitude))
        throw InvalidParameter("alternating_ray: amplitude must be finite and non-negative");
    const double n = std::sqrt(norm2_sq(direction));
    if (!(n > 0.0)) throw InvalidParameter("alternating_ray: zero direction");
    for (double& v : direction) v /= n;
    AdversaryRule rule;
    rule.kind = AdversaryRule::Kind::AlternatingRay;
    rule.amplitude = amplitude;
    rule.direction = std::move(direction);
    return rule;
}

AdversaryRule fixed_points(std::vector<Vec> points) {
    if (points.empty()) throw EmptyInput("fixed_points: no points");
    const size_t d = points.front().size();
    for (const Vec& p : points)
        if (p.size() != d) throw DimensionMismatch("fixed_points: ragged point list");
    AdversaryRule rule;
    rule.kind = AdversaryRule::Kind::FixedPoints;
    rule.points = std::move(points);
    return rule;
}

// ---------------------------------------------------------------------------
// Trace specs

void validate(const TraceSpec& spec) {
    if (spec.dim < 1) throw InvalidParameter("trace: dim must be at least 1");
    if (spec.horizon < 1) throw InvalidParameter("trace: horizon must be at least 1");
    if (!spec.x0.empty() && static_cast<int>(spec.x0.size()) != spec.dim)
        throw DimensionMismatch("trace: x0 length differs from dim");
    switch (spec.mode) {
        case TraceModeKind::Martingale:
            validate(spec.base);
            if (spec.adversary)
                throw InvalidParameter("trace: adversary set on a martingale spec");
            if (spec.correlation &&
                spec.correlation->dim() != spec.dim * spec.horizon)
                throw DimensionMismatch("trace: correlation block must be (dim*horizon)^2");
            break;
        case TraceModeKind::ShiftSchedule:
            if (spec.segments.size() != 5)
                throw InvalidParameter("trace: shift schedule needs exactly 5 segments");
            if (spec.horizon % 5 != 0)
                throw InvalidParameter("trace: shift schedule needs horizon divisible by 5");
            for (const IncrementSpec& s : spec.segments) validate(s);
            if (spec.adversary)
                throw InvalidParameter("trace: adversary set on a shift spec");
            if (spec.correlation &&
                spec.correlation->dim() != spec.dim * (spec.horizon / 5))
                throw DimensionMismatch("trace: per-segment correlation block must be (dim*T/5)^2");
            break;
        case TraceModeKind::Mixed:
            validate(spec.base);
            if (!(spec.adversarial_pct >= 0.0) || !(spec.adversarial_pct <= 100.0))
                throw InvalidParameter("trace: adversarial_pct outside [0, 100]");
            if (!spec.adversary) throw InvalidParameter("trace: mixed mode needs an adversary");
            if (spec.correlation)
                throw InvalidParameter("trace: correlation unsupported in mixed mode");
            break;
        case TraceModeKind::PureAdversarial:
            if (!spec.adversary)
                throw InvalidParameter("trace: adversarial mode needs an adversary");
            if (spec.correlation)
                throw InvalidParameter("trace: correlation unsupported in adversarial mode");
            break;
    }
    if (spec.adversary) {
        const AdversaryRule& rule = *spec.adversary;
        if (rule.kind == AdversaryRule::Kind::AlternatingRay &&
            static_cast<int>(rule.direction.size()) != spec.dim)
            throw DimensionMismatch("trace: adversary direction length differs from dim");
        if (rule.kind == AdversaryRule::Kind::FixedPoints &&
            static_cast<int>(rule.points.front().size()) != spec.dim)
            throw DimensionMismatch("trace: adversary point length differs from dim");
    }
}

std::vector<Vec> correlate(const std::vector<Vec>& increments, const Mat& sigma_block) {
    if (increments.empty()) throw EmptyInput("correlate: no increments");
    const int d = static_cast<int>(increments.front().size());
    const int n = static_cast<int>(increments.size());
    if (sigma_block.dim() != n * d)
        throw DimensionMismatch("correlate: block dimension differs from concatenated length");
    const Mat l = cholesky(sigma_block);
    Vec z(static_cast<size_t>(n) * d);
    for (int t = 0; t < n; ++t) {
        if (static_cast<int>(increments[t].size()) != d)
            throw DimensionMismatch("correlate: ragged increment list");
        for (int c = 0; c < d; ++c) z[static_cast<size_t>(t) * d + c] = increments[t][c];
    }
    Vec u(z.size(), 0.0);
    for (size_t i = 0; i < z.size(); ++i) {
        double s = 0.0;
        for (size_t j = 0; j <= i; ++j) s += l(static_cast<int>(i), static_cast<int>(j)) * z[j];
        u[i] = s;
    }
    std::vector<Vec> out(n, Vec(d));
    for (int t = 0; t < n; ++t)
        for (int c = 0; c < d; ++c) out[t][c] = u[static_cast<size_t>(t) * d + c];
    return out;
}

namespace {

constexpr std::uint64_t kTagTrace = 0xA11CEull;
constexpr std::uint64_t kTagAdversary = 0xADEll;

std::uint64_t pct_bits(double p) {
    std::uint64_t b = 0;
    static_assert(sizeof(double) == sizeof(std::uint64_t));
    std::memcpy(&b, &p, sizeof(b));
    return b;
}

std::vector<Vec> draw_segment(const IncrementSpec& inc, int dim, int count, RngStream& rng) {
    std::vector<Vec> out(static_cast<size_t>(count), Vec(dim));
    for (int t = 0; t < count; ++t)
        for (int c = 0; c < dim; ++c) out[static_cast<size_t>(t)][c] = draw_increment(inc, rng);
    return out;
}

}  // namespace

std::vector<int> adversarial_rounds(const TraceSpec& spec) {
    validate(spec);
    if (spec.mode == TraceModeKind::PureAdversarial) {
        std::vector<int> all(spec.horizon);
        for (int t = 1; t <= spec.horizon; ++t) all[t - 1] = t;
        return all;
    }
    if (spec.mode != TraceModeKind::Mixed) return {};
    const int t_total = spec.horizon;
    const int m = static_cast<int>(std::llround(spec.adversarial_pct / 100.0 * t_total));
    // Keyed only by (seed, pct): the subset must not vary across replications.
    RngStream rng = RngStream(spec.seed).split(kTagAdversary).split(pct_bits(spec.adversarial_pct));
    std::vector<int> idx(t_total);
    for (int t = 1; t <= t_total; ++t) idx[t - 1] = t;
    for (int k = 0; k < m; ++k) {
        const int j = k + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(t_total - k));
        std::swap(idx[k], idx[j]);
    }
    std::vector<int> rounds(idx.begin(), idx.begin() + m);
    std::sort(rounds.begin(), rounds.end());
    return rounds;
}

MinimizerTrace generate_trace(const TraceSpec& spec, int replication) {
    validate(spec);
    if (replication < 0) throw InvalidParameter("trace: replication must be non-negative");
    const int d = spec.dim;
    const int t_total = spec.horizon;
    Vec x0 = spec.x0.empty() ? Vec(d, 0.0) : spec.x0;

    // (segment start round, spec) pairs covering 1..T.
    std::vector<std::pair<int, const IncrementSpec*>> segs;
    int seg_len = t_total;
    if (spec.mode == TraceModeKind::ShiftSchedule) {
        seg_len = t_total / 5;
        for (int k = 0; k < 5; ++k) segs.emplace_back(k * seg_len + 1, &spec.segments[k]);
    } else {
        segs.emplace_back(1, &spec.base);
    }

    RngStream repl_stream =
        RngStream(spec.seed).split(kTagTrace).split(static_cast<std::uint64_t>(replication));

    std::vector<Vec> u;
    u.reserve(static_cast<size_t>(t_total));
    for (size_t k = 0; k < segs.size(); ++k) {
        RngStream seg_stream = repl_stream.split(k);
        if (spec.correlation) {
            IncrementSpec unit = *segs[k].second;
            unit.sigma_c2 = 1.0;
            std::vector<Vec> z = draw_segment(unit, d, seg_len, seg_stream);
            std::vector<Vec> cu = correlate(z, *spec.correlation);
            for (Vec& row : cu) u.push_back(std::move(row));
        } else {
            std::vector<Vec> cu = draw_segment(*segs[k].second, d, seg_len, seg_stream);
            for (Vec& row : cu) u.push_back(std::move(row));
        }
    }

    MinimizerTrace trace;
    trace.x0 = x0;
    trace.spec = spec;
    trace.replication = replication;
    trace.v.resize(static_cast<size_t>(t_total));
    Vec level = x0;
    for (int t = 1; t <= t_total; ++t) {
        level = add(level, u[static_cast<size_t>(t - 1)]);
        trace.v[static_cast<size_t>(t - 1)] = level;
    }

    if (spec.mode == TraceModeKind::Mixed || spec.mode == TraceModeKind::PureAdversarial) {
        const std::vector<int> rounds = adversarial_rounds(spec);
        const AdversaryRule& rule = *spec.adversary;
        for (size_t k = 0; k < rounds.size(); ++k) {
            Vec& vt = trace.v[static_cast<size_t>(rounds[k] - 1)];
            if (rule.kind == AdversaryRule::Kind::AlternatingRay) {
                const double s = (k % 2 == 0) ? 1.0 : -1.0;
                vt = add(x0, scaled(rule.direction, s * rule.amplitude));
            } else {
                vt = rule.points[k % rule.points.size()];
            }
        }
    }
    return trace;
}

// ---------------------------------------------------------------------------
// CSV + sidecar round trip

void write_trace_csv(const std::string& path, const MinimizerTrace& trace) {
    std::ofstream out(path);
    if (!out) throw IOFailure("write_trace_csv: cannot open " + path);
    out << "t,coord,value\n";
    char buf[64];
    for (int t = 1; t <= trace.horizon(); ++t)
        for (int c = 0; c < trace.dim(); ++c) {
            std::snprintf(buf, sizeof(buf), "%.17g", trace.v[static_cast<size_t>(t - 1)][c]);
            out << t << ',' << c << ',' << buf << '\n';
        }
    if (!out) throw IOFailure("write_trace_csv: write failed for " + path);

    nlohmann::json side;
    side["dim"] = trace.dim();
    side["horizon"] = trace.horizon();
    side["x0"] = trace.x0;
    side["replication"] = trace.replication;
    side["seed"] = trace.spec.seed;
    std::ofstream jout(path + ".json");
    if (!jout) throw IOFailure("write_trace_csv: cannot open " + path + ".json");
    jout << side.dump(2) << '\n';
    if (!jout) throw IOFailure("write_trace_csv: write failed for " + path + ".json");
}

MinimizerTrace read_trace_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IOFailure("read_trace_csv: cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw EmptyInput("read_trace_csv: empty file");
    std::vector<std::tuple<int, int, double>> rows;
    int max_t = 0, max_c = -1;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string f1, f2, f3;
        if (!std::getline(ss, f1, ',') || !std::getline(ss, f2, ',') || !std::getline(ss, f3))
            throw IOFailure("read_trace_csv: malformed row in " + path);
        const int t = std::stoi(f1);
        const int c = std::stoi(f2);
        rows.emplace_back(t, c, std::stod(f3));
        max_t = std::max(max_t, t);
        max_c = std::max(max_c, c);
    }
    if (rows.empty()) throw EmptyInput("read_trace_csv: no data rows");

    MinimizerTrace trace;
    const int d = max_c + 1;
    trace.v.assign(static_cast<size_t>(max_t), Vec(d, 0.0));
    for (const auto& [t, c, val] : rows) {
        if (t < 1 || c < 0) throw IOFailure("read_trace_csv: row index out of range");
        trace.v[static_cast<size_t>(t - 1)][c] = val;
    }
    trace.x0.assign(d, 0.0);
    trace.spec.dim = d;
    trace.spec.horizon = max_t;

    std::ifstream jin(path + ".json");
    if (jin) {
        nlohmann::json side = nlohmann::json::parse(jin, nullptr, false);
        if (!side.is_discarded()) {
            if (side.contains("x0")) trace.x0 = side["x0"].get<Vec>();
            if (side.contains("replication")) trace.replication = side["replication"].get<int>();
            if (side.contains("seed")) trace.spec.seed = side["seed"].get<std::uint64_t>();
        }
    }
    if (static_cast<int>(trace.x0.size()) != d)
        throw DimensionMismatch("read_trace_csv: sidecar x0 length differs from data");
    return trace;
}

}  // namespace soqo
