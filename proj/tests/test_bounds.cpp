#include <cmath>
#include <optional>

#include <doctest.h>

#include "helpers.hpp"
#include "soqo/bounds.hpp"
#include "soqo/errors.hpp"

using namespace soqo;
using soqo::testing::random_spd;

TEST_SUITE("bounds") {

TEST_CASE("expected schedule cost under a martingale") {
    SpectralMatrix a = SpectralMatrix::from_eigvals({1.0});
    const Vec no_gap;

    auto [exact0, upper0] = lai_expected_cost(a, Mat(1), 5, no_gap);
    CHECK(exact0 == 0.0);
    CHECK(upper0 == 0.0);

    auto [exact, upper] = lai_expected_cost(a, Mat::identity(1), 1, no_gap);
    CHECK(exact == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(upper == doctest::Approx(0.30901699437494745).epsilon(1e-14));

    // T = 3: 1/2 [(1 - 5/13) + (1 - 0.4) + (1 - 0.5)].
    auto [exact3, upper3] = lai_expected_cost(a, Mat::identity(1), 3, no_gap);
    CHECK(exact3 == doctest::Approx(0.5 * (8.0 / 13.0 + 0.6 + 0.5)).epsilon(1e-14));
    CHECK(exact3 <= upper3);
}

TEST_CASE("exact cost never exceeds the fixed-point ceiling") {
    RngStream rng(61);
    for (int trial = 0; trial < 20; ++trial) {
        const int d = 1 + static_cast<int>(rng.next_unit() * 4);
        SpectralMatrix a = SpectralMatrix::decompose(random_spd(rng, d));
        const Mat sigma = random_spd(rng, d, 0.1, 2.0);
        const int horizon = 1 + static_cast<int>(rng.next_unit() * 49);
        auto [exact, upper] = lai_expected_cost(a, sigma, horizon, Vec());
        CHECK(exact > 0.0);
        CHECK(exact <= upper * (1.0 + 1e-12));
    }
}

TEST_CASE("start-point offset joins the first round") {
    SpectralMatrix a = SpectralMatrix::from_eigvals({1.0});
    const Vec gap{2.0};
    auto [exact, upper] = lai_expected_cost(a, Mat(1), 1, gap);
    CHECK(exact == doctest::Approx(1.0).epsilon(1e-15));  // 1/2 (1-0.5) 2^2
    CHECK(upper == doctest::Approx(1.2360679774997897).epsilon(1e-14));
    CHECK_THROWS_AS(lai_expected_cost(a, Mat(1), 1, Vec{1.0, 2.0}), DimensionMismatch);
}

TEST_CASE("per-round covariances") {
    SpectralMatrix a = SpectralMatrix::from_eigvals({0.4, 2.0});
    const Mat sigma = Mat::identity(2);
    auto [flat_exact, flat_upper] = lai_expected_cost(a, sigma, 4, Vec());
    auto [list_exact, list_upper] =
        lai_expected_cost(a, std::vector<Mat>(4, sigma), 4, Vec());
    CHECK(flat_exact == list_exact);
    CHECK(flat_upper == list_upper);

    // Scaling one round's covariance adds exactly that round's share.
    std::vector<Mat> rounds(4, sigma);
    rounds[1] = sigma.scaled(3.0);
    auto [bumped, bumped_upper] = lai_expected_cost(a, rounds, 4, Vec());
    const CoefficientSchedule sched = lai_schedule(a, 4);
    double extra = 0.0;
    for (int i = 0; i < 2; ++i) extra += 0.5 * (1.0 - sched.rho(2, i)) * 2.0;
    CHECK(bumped == doctest::Approx(flat_exact + extra).epsilon(1e-13));
    CHECK(bumped_upper > flat_upper);

    CHECK_THROWS_AS(lai_expected_cost(a, std::vector<Mat>(3, sigma), 4, Vec()), HorizonMismatch);
    CHECK_THROWS_AS(lai_expected_cost(a, Mat::identity(3), 4, Vec()), DimensionMismatch);
}

TEST_CASE("interpolation penalty and its minimizer") {
    CHECK(w_interpolation_gap(1.0, 0.5) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    for (double alpha : {0.01, 0.3, 1.0, 3.0}) {
        const double c_star = fixed_point_eigenvalue(alpha);
        const double floor = w_interpolation_gap(alpha, c_star);
        CHECK(floor == doctest::Approx(1.0 - c_star).epsilon(1e-12));
        for (double delta : {1e-4, 1e-2, 0.1}) {
            if (c_star + delta < 1.0) CHECK(w_interpolation_gap(alpha, c_star + delta) > floor);
            if (c_star - delta > 0.0) CHECK(w_interpolation_gap(alpha, c_star - delta) > floor);
        }
    }
    CHECK_THROWS_AS(w_interpolation_gap(0.0, 0.5), EigvalOutOfRange);
    CHECK_THROWS_AS(w_interpolation_gap(1.0, 0.0), EigvalOutOfRange);
    CHECK_THROWS_AS(w_interpolation_gap(1.0, 1.0), EigvalOutOfRange);
}

TEST_CASE("constant-schedule regret floor") {
    SpectralMatrix a = SpectralMatrix::from_eigvals({0.3, 1.0});
    const Mat sigma = Mat::identity(2);

    // At the fixed-point schedule every coordinate is skipped and only the
    // (negative) correction remains, for any horizon.
    const Vec c_l{fixed_point_eigenvalue(0.3), fixed_point_eigenvalue(1.0)};
    CHECK(fi_regret_lower(a, sigma, c_l, 10) ==
          doctest::Approx(-0.51251854227446739).epsilon(1e-13));
    CHECK(fi_regret_lower(a, sigma, c_l, 500) ==
          doctest::Approx(-0.51251854227446739).epsilon(1e-13));

    // The balanced constant pins only the soft direction, so the stiff one
    // contributes a positive per-round slope.
    CHECK(robd_regret_lower(a, sigma, 100) ==
          doctest::Approx(-0.35465740736663523).epsilon(1e-12));
    CHECK(robd_regret_lower(a, sigma, 100) < 0.0);
    CHECK(robd_regret_lower(a, sigma, 400) > 0.0);

    // Affine in T: value(2T) - 2 value(T) returns exactly one correction.
    const double corr = robd_regret_lower(a, sigma, 200) - 2.0 * robd_regret_lower(a, sigma, 100);
    CHECK(corr == doctest::Approx(0.51251854227446739).epsilon(1e-12));

    // robd_regret_lower is fi_regret_lower at the balanced eigenvalues.
    const double mu = robd_mu2(0.3);
    const Vec c_robd{1.0 / (0.3 + 1.0 + mu), 1.0 / (1.0 + 1.0 + mu)};
    CHECK(robd_regret_lower(a, sigma, 77) == fi_regret_lower(a, sigma, c_robd, 77));

    // Scalar hitting matrices give no separation: bound stays non-positive.
    for (double l : {0.3, 1.0}) {
        SpectralMatrix iso = SpectralMatrix::from_eigvals({l, l});
        CHECK(robd_regret_lower(iso, Mat::identity(2), 1000) <= 0.0);
    }

    CHECK_THROWS_AS(fi_regret_lower(a, sigma, Vec{0.5}, 10), DimensionMismatch);
    CHECK_THROWS_AS(fi_regret_lower(a, sigma, Vec{0.5, 1.0}, 10), EigvalOutOfRange);
    CHECK_THROWS_AS(fi_regret_lower(a, sigma, c_l, 0), HorizonMismatch);
}

TEST_CASE("shifted-schedule regret ceiling") {
    SpectralMatrix one = SpectralMatrix::from_eigvals({1.0});
    CHECK(lai_gamma_regret_upper(one, 1.0, 0.0, RegretBoundVariant::MinEig) == 0.0);
    CHECK(lai_gamma_regret_upper(one, 1.0, 0.0, RegretBoundVariant::DimSum) == 0.0);
    CHECK(lai_gamma_regret_upper(one, 1.0, 1.0, RegretBoundVariant::MinEig) ==
          doctest::Approx(0.10300566479164914).epsilon(1e-14));
    CHECK(lai_gamma_regret_upper(one, 1.0, 1.0, RegretBoundVariant::MinEig) ==
          lai_gamma_regret_upper(one, 1.0, 1.0, RegretBoundVariant::DimSum));

    SpectralMatrix a = SpectralMatrix::from_eigvals({0.3, 1.0});
    const double min_eig = lai_gamma_regret_upper(a, 1.0, 1.0, RegretBoundVariant::MinEig);
    const double dim_sum = lai_gamma_regret_upper(a, 1.0, 1.0, RegretBoundVariant::DimSum);
    CHECK(min_eig == doctest::Approx(0.30281944534784591).epsilon(1e-14));
    // The per-direction sum adds the stiff direction's own term on top of
    // the soft-direction one.
    CHECK(dim_sum == doctest::Approx(min_eig + 0.10300566479164914).epsilon(1e-13));
    CHECK(dim_sum == doctest::Approx(0.40582511013949506).epsilon(1e-14));

    CHECK_THROWS_AS(lai_gamma_regret_upper(a, -1.0, 0.5, RegretBoundVariant::MinEig),
                    InvalidParameter);
    CHECK_THROWS_AS(lai_gamma_regret_upper(a, 1.0, 1.5, RegretBoundVariant::MinEig),
                    GammaOutOfRange);
}

TEST_CASE("competitive-ratio ceilings from the spectrum") {
    SpectralMatrix one = SpectralMatrix::from_eigvals({1.0});
    BoundReport r1 = cr_bounds(one);
    CHECK(*r1.robd_cr == doctest::Approx(1.618033988749895).epsilon(1e-14));
    CHECK(*r1.lai_cr_upper == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(*r1.lai1_cr_smalllambda == doctest::Approx(2.0).epsilon(1e-14));
    CHECK_FALSE(r1.lai_gamma_cr_upper.has_value());

    SpectralMatrix a = SpectralMatrix::from_eigvals({0.3, 1.0});
    BoundReport r2 = cr_bounds(a, 0.5);
    CHECK(*r2.robd_cr == doctest::Approx(2.3929694486000912).epsilon(1e-13));
    CHECK(*r2.lai_cr_upper == doctest::Approx(1.0 + 1.0 / 0.3).epsilon(1e-14));
    CHECK(*r2.lai_gamma_cr_upper == doctest::Approx(3.2631482946778176).epsilon(1e-13));

    // Scalar matrix: condition number 1 collapses the small-lambda form.
    SpectralMatrix iso = SpectralMatrix::from_eigvals({0.04, 0.04});
    CHECK(*cr_bounds(iso).lai1_cr_smalllambda == doctest::Approx(1.0 + 1.0 / 0.2).epsilon(1e-13));

    // Fully shifted schedule on a tiny scalar spectrum: both branches agree.
    SpectralMatrix small = SpectralMatrix::from_eigvals({0.01});
    CHECK(*cr_bounds(small, 1.0).lai_gamma_cr_upper ==
          doctest::Approx(10.512492197250393).epsilon(1e-13));

    CHECK_THROWS_AS(cr_bounds(a, 1.5), GammaOutOfRange);
}

TEST_CASE("two-branch ceiling") {
    // Balanced-regularizer parameters make both branches coincide with the
    // classic ratio for any conditioning.
    for (double lmin : {0.01, 0.1, 1.0}) {
        const double mu = robd_mu2(lmin);
        const double expected = 1.0 + 0.5 * (std::sqrt(1.0 + 4.0 / lmin) - 1.0);
        CHECK(framework_cr(lmin, 1.0, 1.0, mu, mu) ==
              doctest::Approx(expected).epsilon(1e-12));
    }

    // Vanishing regularizers leave only the hitting-strength branch, and
    // strong hitting curvature then drives the ceiling down to 1.
    CHECK(framework_cr(2.0, 1.0, 1.0, 0.0, 0.0) == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(framework_cr(1e9, 1.0, 1.0, 1e-9, 1e-9) == doctest::Approx(1.0).epsilon(1e-8));

    // More regularizer curvature (same smoothness) can only help.
    CHECK(framework_cr(0.5, 1.0, 1.0, 0.1, 0.1) < framework_cr(0.5, 1.0, 1.0, 0.0, 0.1));

    CHECK_THROWS_AS(framework_cr(0.0, 1.0, 1.0, 0.0, 1.0), InvalidParameter);
    CHECK_THROWS_AS(framework_cr(1.0, 0.0, 1.0, 0.0, 1.0), InvalidParameter);
    CHECK_THROWS_AS(framework_cr(1.0, 2.0, 1.0, 0.0, 1.0), InvalidParameter);
    CHECK_THROWS_AS(framework_cr(1.0, 1.0, 1.0, -0.1, 1.0), InvalidParameter);
    CHECK_THROWS_AS(framework_cr(1.0, 1.0, 1.0, 2.0, 1.0), InvalidParameter);
}

TEST_CASE("per-round curvature of the horizon-aware schedule") {
    for (double l : {0.01, 0.1, 1.0}) {
        SpectralMatrix a = SpectralMatrix::from_eigvals({l});
        const int horizon = 40;
        const CoefficientSchedule sched = lai_schedule(a, horizon);

        auto [terminal_lo, terminal_hi] = schedule_strong_smooth(sched, horizon);
        CHECK(std::abs(terminal_lo) < 1e-12);
        CHECK(std::abs(terminal_hi) < 1e-12);

        double lo_min = 0.0, hi_max = 0.0;
        for (int t = 1; t <= horizon; ++t) {
            auto [lo, hi] = schedule_strong_smooth(sched, t);
            CHECK(lo <= hi);
            lo_min = std::min(lo_min, lo);
            hi_max = std::max(hi_max, hi);
        }
        // beta'_max stays below (sqrt(l^2+4l)-l)/2 = 1 - c(l) < 1, so the
        // two-branch ceiling with these inputs lands on 1 + 1/l.
        const double beta_cap = 0.5 * (std::sqrt(l * l + 4.0 * l) - l);
        CHECK(beta_cap == doctest::Approx(1.0 - fixed_point_eigenvalue(l)).epsilon(1e-12));
        CHECK(hi_max <= beta_cap + 1e-12);
        CHECK(hi_max < 1.0);
        CHECK(framework_cr(l, 1.0, 1.0, std::max(lo_min, 0.0), hi_max) ==
              doctest::Approx(1.0 + 1.0 / l).epsilon(1e-12));
    }
}

TEST_CASE("follow-the-minimizer regret floor") {
    SpectralMatrix a = SpectralMatrix::from_eigvals({0.3, 1.0});
    CHECK(ftm_regret_lower(a, 0.0, 100) == 0.0);
    CHECK(ftm_regret_lower(a, 1.0, 100) == doctest::Approx(19.098300562505258).epsilon(1e-13));
    CHECK_THROWS_AS(ftm_regret_lower(a, -1.0, 100), InvalidParameter);
    CHECK_THROWS_AS(ftm_regret_lower(a, 1.0, 0), HorizonMismatch);
}

TEST_CASE("bound report serialization carries only the filled fields") {
    BoundReport report = cr_bounds(SpectralMatrix::from_eigvals({1.0}));
    const std::string text = report.to_json();
    CHECK(text.find("robd_cr") != std::string::npos);
    CHECK(text.find("lai_cr_upper") != std::string::npos);
    CHECK(text.find("lai_gamma_cr_upper") == std::string::npos);
    CHECK(text.find("framework_cr") == std::string::npos);
}

}  // TEST_SUITE
