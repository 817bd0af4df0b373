#include <cmath>
#include <vector>

#include <doctest.h>

#include "helpers.hpp"
#include "soqo/errors.hpp"
#include "soqo/policies.hpp"

using namespace soqo;
using soqo::testing::random_spd;
using soqo::testing::random_trace;

namespace {

MinimizerTrace fixed_trace(Vec x0, std::vector<Vec> v) {
    MinimizerTrace trace;
    trace.x0 = std::move(x0);
    trace.v = std::move(v);
    trace.spec.dim = trace.dim();
    trace.spec.horizon = trace.horizon();
    return trace;
}

double ledger_sum(const PolicyRun& run) {
    double s = 0.0;
    for (double h : run.hit_costs) s += h;
    for (double w : run.switch_costs) s += w;
    return s;
}

}  // namespace

TEST_SUITE("policies") {

TEST_CASE("a constant trace at the start point costs nothing") {
    SpectralMatrix a = SpectralMatrix::from_eigvals({0.3, 1.0});
    const Vec x0{1.0, -2.0};
    const MinimizerTrace trace = fixed_trace(x0, std::vector<Vec>(6, x0));
    for (const char* name : {"lai", "lai-gamma:0.7", "robd", "ftm", "general-opt"}) {
        const PolicyRun run = run_policy(parse_policy_spec(name), a, trace);
        CHECK(run.total == 0.0);
        for (const Vec& x : run.actions) CHECK(x == x0);
    }
    // The clairvoyant solver goes through a linear solve, so it lands on x0
    // only up to roundoff.
    const PolicyRun off = run_policy(parse_policy_spec("offline-opt"), a, trace);
    CHECK(off.total < 1e-20);
    for (const Vec& x : off.actions)
        for (int i = 0; i < 2; ++i) CHECK(x[i] == doctest::Approx(x0[i]).epsilon(1e-12));
    SpectralMatrix scalar = SpectralMatrix::from_eigvals({0.5, 0.5});
    CHECK(run_policy(parse_policy_spec("static-opt"), scalar, trace).total == 0.0);
}

TEST_CASE("one-round hand example") {
    SpectralMatrix a = SpectralMatrix::from_eigvals({1.0});
    const MinimizerTrace trace = fixed_trace({0.0}, {{2.0}});
    const PolicyRun run = run_policy(parse_policy_spec("lai"), a, trace);
    // rho_1 = 1/2: x = 2 + 0.5 * (0 - 2) = 1, so both cost halves are 1/2.
    CHECK(run.actions[0][0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(run.hit_costs[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(run.switch_costs[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(run.total == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(run.total == doctest::Approx(ledger_sum(run)).epsilon(1e-15));
}

TEST_CASE("balanced-regularizer actions satisfy their stationarity condition") {
    RngStream rng(50);
    SpectralMatrix a = SpectralMatrix::decompose(random_spd(rng, 3));
    const MinimizerTrace trace = random_trace(rng, 3, 12);
    const PolicyRun run = run_policy(parse_policy_spec("robd"), a, trace);
    const Mat a_dense = a.reconstruct();
    const double mu = robd_mu2(a.min_eigval());
    for (int t = 1; t <= 12; ++t) {
        const Vec& x = run.actions[static_cast<size_t>(t - 1)];
        const Vec& v = trace.v[static_cast<size_t>(t - 1)];
        const Vec& prev = (t == 1) ? trace.x0 : run.actions[static_cast<size_t>(t - 2)];
        // A(x-v) + (x-prev) + mu (x-v) = 0: the action minimizes the hit
        // cost plus movement plus the mu-weighted tracking regularizer.
        Vec grad = a_dense * sub(x, v);
        grad = add(grad, sub(x, prev));
        grad = add(grad, scaled(sub(x, v), mu));
        CHECK(norm_inf(grad) < 1e-10);
    }
}

TEST_CASE("follow-the-minimizer plays v and pays only for movement") {
    RngStream rng(51);
    const MinimizerTrace trace = random_trace(rng, 2, 9);
    SpectralMatrix a = SpectralMatrix::from_eigvals({0.3, 2.0});
    const PolicyRun run = run_policy(parse_policy_spec("ftm"), a, trace);
    for (int t = 1; t <= 9; ++t) {
        CHECK(run.actions[static_cast<size_t>(t - 1)] == trace.v[static_cast<size_t>(t - 1)]);
        CHECK(run.hit_costs[static_cast<size_t>(t - 1)] == 0.0);
        const Vec& prev = (t == 1) ? trace.x0 : trace.v[static_cast<size_t>(t - 2)];
        const Vec step = sub(trace.v[static_cast<size_t>(t - 1)], prev);
        CHECK(run.switch_costs[static_cast<size_t>(t - 1)] ==
              doctest::Approx(0.5 * norm2_sq(step)).epsilon(1e-14));
    }
}

TEST_CASE("zero drift forecast reduces to the plain interpolation") {
    RngStream rng(52);
    SpectralMatrix a = SpectralMatrix::decompose(random_spd(rng, 2));
    const MinimizerTrace trace = random_trace(rng, 2, 10);
    const PolicyRun plain = run_policy(parse_policy_spec("lai"), a, trace);
    const PolicyRun general = run_policy(parse_policy_spec("general-opt"), a, trace);
    for (int t = 0; t < 10; ++t)
        for (int i = 0; i < 2; ++i)
            CHECK(general.actions[static_cast<size_t>(t)][i] ==
                  plain.actions[static_cast<size_t>(t)][i]);
}

TEST_CASE("forecast correction by hand on two rounds") {
    SpectralMatrix a = SpectralMatrix::from_eigvals({1.0});
    const double x0 = 0.5, v1 = 1.0, v2 = 4.0, delta = 2.0;
    const MinimizerTrace trace = fixed_trace({x0}, {{v1}, {v2}});
    // Forecast: one future increment delta announced at round 1.
    DriftOracle oracle([&](int t, const std::vector<Vec>&) {
        return (t == 1) ? std::vector<Vec>{{delta}} : std::vector<Vec>{};
    });
    const PolicyRun run = run_policy(parse_policy_spec("general-opt"), a, trace, &oracle);
    // rho_1 = 0.4, rho_2 = 0.5: x1 = 0.4 x0 + 0.6 v1 + 0.4(1-0.5) delta.
    const double x1 = 0.4 * x0 + 0.6 * v1 + 0.2 * delta;
    CHECK(run.actions[0][0] == doctest::Approx(x1).epsilon(1e-14));
    CHECK(run.actions[1][0] == doctest::Approx(v2 + 0.5 * (x1 - v2)).epsilon(1e-14));
}

TEST_CASE("perfect foresight reproduces the clairvoyant optimum") {
    RngStream rng(53);
    for (int trial = 0; trial < 5; ++trial) {
        const int d = 1 + static_cast<int>(rng.next_unit() * 3);
        SpectralMatrix a = SpectralMatrix::decompose(random_spd(rng, d));
        const MinimizerTrace trace = random_trace(rng, d, 15);
        const DriftOracle oracle = DriftOracle::perfect(trace);
        const PolicyRun fore = run_policy(parse_policy_spec("general-opt"), a, trace, &oracle);
        const PolicyRun best = offline_optimal(a, trace.x0, trace);
        for (int t = 0; t < 15; ++t)
            for (int i = 0; i < d; ++i)
                CHECK(fore.actions[static_cast<size_t>(t)][i] ==
                      doctest::Approx(best.actions[static_cast<size_t>(t)][i]).epsilon(1e-8));
        CHECK(fore.total == doctest::Approx(best.total).epsilon(1e-8));
    }
}

TEST_CASE("drift oracle output is validated") {
    SpectralMatrix a = SpectralMatrix::from_eigvals({1.0});
    const MinimizerTrace trace = fixed_trace({0.0}, {{1.0}, {2.0}, {3.0}});
    DriftOracle short_fn([](int, const std::vector<Vec>&) { return std::vector<Vec>{}; });
    CHECK_THROWS_AS(run_policy(parse_policy_spec("general-opt"), a, trace, &short_fn),
                    HorizonMismatch);
    DriftOracle wide_fn([](int t, const std::vector<Vec>&) {
        return std::vector<Vec>(static_cast<size_t>(3 - t), Vec(2, 0.0));
    });
    CHECK_THROWS_AS(run_policy(parse_policy_spec("general-opt"), a, trace, &wide_fn),
                    DimensionMismatch);
}

TEST_CASE("hindsight constant action") {
    SpectralMatrix a = SpectralMatrix::from_eigvals({1.0});
    const MinimizerTrace one = fixed_trace({0.0}, {{2.0}});
    const Vec x_star = static_optimal_action(a, one.x0, one);
    CHECK(x_star[0] == doctest::Approx(1.0).epsilon(1e-15));

    // First-order optimality of the constant play on a random trace.
    RngStream rng(54);
    const MinimizerTrace trace = random_trace(rng, 1, 14);
    SpectralMatrix half = SpectralMatrix::from_eigvals({0.5});
    const Vec x = static_optimal_action(half, trace.x0, trace);
    double grad = x[0] - trace.x0[0];
    for (const Vec& v : trace.v) grad += 0.5 * (x[0] - v[0]);
    CHECK(std::abs(grad) < 1e-10);

    SpectralMatrix skew = SpectralMatrix::from_eigvals({0.3, 1.0});
    const MinimizerTrace wide = fixed_trace({0.0, 0.0}, {{1.0, 1.0}});
    CHECK_THROWS_AS(static_optimal_action(skew, wide.x0, wide), NotScalarMatrix);
    CHECK_THROWS_AS(run_policy(parse_policy_spec("static-opt"), skew, wide), NotScalarMatrix);
}

TEST_CASE("expected cost of the hindsight constant") {
    CHECK(static_optimal_expected_cost(1.0, 0.0, 50) == 0.0);
    CHECK(static_optimal_expected_cost(1.0, 1.0, 1) == doctest::Approx(0.25).epsilon(1e-15));
    // T = 2 by integrating the quadratic forms of (u1, u2) directly:
    // x* = (2u1+u2)/3 gives E hit = (2/9 + 5/9)/2 and E move = 5/18.
    CHECK(static_optimal_expected_cost(1.0, 1.0, 2) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(static_optimal_expected_cost(1.0, 1.0, 100) == doctest::Approx(850.0).epsilon(1e-12));
    // Quadratic growth: 12 v(T) / (lambda sigma^2 T^2) -> 1.
    CHECK(12.0 * static_optimal_expected_cost(1.0, 1.0, 10000) / 1e8 ==
          doctest::Approx(1.0).epsilon(0.01));
    CHECK_THROWS_AS(static_optimal_expected_cost(0.0, 1.0, 5), EigvalOutOfRange);
    CHECK_THROWS_AS(static_optimal_expected_cost(1.0, -1.0, 5), InvalidParameter);
    CHECK_THROWS_AS(static_optimal_expected_cost(1.0, 1.0, 0), HorizonMismatch);
}

TEST_CASE("clairvoyant optimum: one round closes the recursion") {
    RngStream rng(55);
    SpectralMatrix a = SpectralMatrix::decompose(random_spd(rng, 2));
    const MinimizerTrace trace = random_trace(rng, 2, 1);
    const PolicyRun best = offline_optimal(a, trace.x0, trace);
    const PolicyRun lai = run_policy(parse_policy_spec("lai"), a, trace);
    // With T = 1 the interpolation coefficient is (I+A)^{-1}, which is the
    // exact single-round optimum.
    for (int i = 0; i < 2; ++i)
        CHECK(best.actions[0][i] == doctest::Approx(lai.actions[0][i]).epsilon(1e-12));
}

TEST_CASE("clairvoyant optimum beats every policy and passes the residual check") {
    RngStream rng(56);
    SpectralMatrix a = SpectralMatrix::decompose(random_spd(rng, 2));
    const MinimizerTrace trace = random_trace(rng, 2, 20);
    const PolicyRun best = offline_optimal(a, trace.x0, trace);

    double v_scale = 0.0;
    for (const Vec& v : trace.v) v_scale = std::max(v_scale, norm_inf(v));
    CHECK(offline_kkt_residual(a, trace.x0, trace, best.actions) <= 1e-10 * (1.0 + v_scale));

    for (const char* name : {"lai", "lai-gamma:0.5", "robd", "ftm", "general-opt"}) {
        const PolicyRun run = run_policy(parse_policy_spec(name), a, trace);
        CHECK(best.total <= run.total + 1e-9);
    }

    // Any perturbation leaves the first-order conditions visibly violated.
    std::vector<Vec> nudged = best.actions;
    nudged[7][1] += 1e-3;
    CHECK(offline_kkt_residual(a, trace.x0, trace, nudged) > 1e-5);
    nudged.pop_back();
    CHECK_THROWS_AS(offline_kkt_residual(a, trace.x0, trace, nudged), HorizonMismatch);
}

TEST_CASE("policy spec strings round trip") {
    CHECK(to_string(parse_policy_spec("lai")) == "lai");
    CHECK(to_string(parse_policy_spec("lai-gamma:0.5")) == "lai-gamma:0.5");
    CHECK(to_string(parse_policy_spec("robd")) == "robd");
    CHECK(to_string(parse_policy_spec("ftm")) == "ftm");
    CHECK(to_string(parse_policy_spec("static-opt")) == "static-opt");
    CHECK(to_string(parse_policy_spec("offline-opt")) == "offline-opt");
    CHECK(to_string(parse_policy_spec("general-opt")) == "general-opt");

    const PolicySpec fi = parse_policy_spec("fi:0.3,0.5");
    REQUIRE(fi.fi_eigvals.size() == 2);
    CHECK(fi.fi_eigvals[0] == 0.3);
    CHECK(fi.fi_eigvals[1] == 0.5);
    CHECK(to_string(fi) == "fi:0.3,0.5");

    CHECK_THROWS_AS(parse_policy_spec("bogus"), InvalidParameter);
    CHECK_THROWS_AS(parse_policy_spec("lai-gamma:abc"), InvalidParameter);
    CHECK_THROWS_AS(parse_policy_spec("lai-gamma:1.5"), GammaOutOfRange);
    CHECK_THROWS_AS(parse_policy_spec("fi:"), InvalidParameter);
    CHECK_THROWS_AS(parse_policy_spec("fi:0.3,nope"), InvalidParameter);
}

TEST_CASE("run_policy input validation") {
    SpectralMatrix a = SpectralMatrix::from_eigvals({1.0});
    MinimizerTrace empty;
    empty.x0 = {0.0};
    CHECK_THROWS_AS(run_policy(parse_policy_spec("lai"), a, empty), EmptyInput);
    const MinimizerTrace wide = fixed_trace({0.0, 0.0}, {{1.0, 1.0}});
    CHECK_THROWS_AS(run_policy(parse_policy_spec("lai"), a, wide), DimensionMismatch);
}

}  // TEST_SUITE
