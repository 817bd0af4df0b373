#include <cmath>

#include <doctest.h>

#include "soqo/errors.hpp"
#include "soqo/linalg.hpp"
#include "soqo/rng.hpp"

using namespace soqo;

TEST_SUITE("linalg") {

TEST_CASE("identity and product") {
    Mat i3 = Mat::identity(3);
    Mat m(3);
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) m(r, c) = r * 3 + c + 1;
    Mat p = i3 * m;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) CHECK(p(r, c) == m(r, c));
    CHECK((m.transpose().transpose() - m).max_abs() == 0.0);
}

TEST_CASE("matvec") {
    Mat m(2);
    m(0, 0) = 2.0;
    m(0, 1) = 1.0;
    m(1, 0) = 1.0;
    m(1, 1) = 2.0;
    Vec y = m * Vec{1.0, -1.0};
    CHECK(y[0] == doctest::Approx(1.0));
    CHECK(y[1] == doctest::Approx(-1.0));
}

TEST_CASE("vector helpers") {
    Vec a{3.0, -4.0};
    CHECK(norm2_sq(a) == doctest::Approx(25.0));
    CHECK(norm_inf(a) == doctest::Approx(4.0));
    CHECK(dot(a, a) == doctest::Approx(25.0));
    CHECK(max_abs_diff(a, scaled(a, 1.0)) == 0.0);
    Vec s = sub(add(a, a), a);
    CHECK(s[0] == doctest::Approx(3.0));
}

TEST_CASE("cholesky of a hand case") {
    // [[4,2],[2,3]] = LLᵀ with L = [[2,0],[1,√2]].
    Mat m(2);
    m(0, 0) = 4.0;
    m(0, 1) = m(1, 0) = 2.0;
    m(1, 1) = 3.0;
    Mat l = cholesky(m);
    CHECK(l(0, 0) == doctest::Approx(2.0));
    CHECK(l(1, 0) == doctest::Approx(1.0));
    CHECK(l(0, 1) == doctest::Approx(0.0));
    CHECK(l(1, 1) == doctest::Approx(std::sqrt(2.0)));
    CHECK((l * l.transpose() - m).max_abs() < 1e-14);
}

TEST_CASE("cholesky rejects indefinite input") {
    Mat m(2);
    m(0, 0) = 1.0;
    m(0, 1) = m(1, 0) = 2.0;
    m(1, 1) = 1.0;  // eigenvalues 3 and -1
    CHECK_THROWS_AS(cholesky(m), NotPositiveDefinite);
}

TEST_CASE("invert round trip") {
    RngStream rng(11);
    Mat m(4);
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) m(r, c) = rng.normal();
    for (int r = 0; r < 4; ++r) m(r, r) += 5.0;  // keep it comfortably nonsingular
    Mat prod = invert(m) * m;
    CHECK((prod - Mat::identity(4)).max_abs() < 1e-12);
}

TEST_CASE("invert rejects a singular matrix") {
    Mat m(2);
    m(0, 0) = 1.0;
    m(0, 1) = 2.0;
    m(1, 0) = 2.0;
    m(1, 1) = 4.0;
    CHECK_THROWS_AS(invert(m), SolveFailure);
}

}  // TEST_SUITE
