#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "prada/matrix.hpp"

using namespace prada;

TEST_CASE("multiplication and power") {
    Matrix p(2, 2);
    p(0, 0) = 0.9;
    p(0, 1) = 0.1;
    p(1, 0) = 0.2;
    p(1, 1) = 0.8;

    const Matrix p2 = p * p;
    CHECK(p2(0, 0) == doctest::Approx(0.9 * 0.9 + 0.1 * 0.2));
    CHECK(p2(0, 1) == doctest::Approx(0.9 * 0.1 + 0.1 * 0.8));

    const Matrix p4a = p2 * p2;
    const Matrix p4b = p.power(4);
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) CHECK(p4a(i, j) == doctest::Approx(p4b(i, j)).epsilon(1e-14));
    }
    const Matrix p0 = p.power(0);
    CHECK(p0(0, 0) == 1.0);
    CHECK(p0(0, 1) == 0.0);
}

TEST_CASE("left apply") {
    Matrix p(2, 2);
    p(0, 0) = 0.5;
    p(0, 1) = 0.5;
    p(1, 0) = 0.25;
    p(1, 1) = 0.75;
    const auto v = p.left_apply({0.4, 0.6});
    CHECK(v[0] == doctest::Approx(0.4 * 0.5 + 0.6 * 0.25));
    CHECK(v[1] == doctest::Approx(0.4 * 0.5 + 0.6 * 0.75));
}

TEST_CASE("row stochastic check") {
    Matrix p(2, 2);
    p(0, 0) = 0.9;
    p(0, 1) = 0.1;
    p(1, 0) = 0.2;
    p(1, 1) = 0.8;
    CHECK(p.is_row_stochastic(1e-12));
    p(1, 1) = 0.9;
    CHECK_FALSE(p.is_row_stochastic(1e-12));
}

TEST_CASE("stationary distribution of an ergodic chain") {
    Matrix p(2, 2);
    p(0, 0) = 0.9;
    p(0, 1) = 0.1;
    p(1, 0) = 0.2;
    p(1, 1) = 0.8;
    const auto pi = stationary_distribution(p);
    REQUIRE(pi.has_value());
    CHECK((*pi)[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK((*pi)[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

    const auto next = p.left_apply(*pi);
    CHECK(next[0] == doctest::Approx((*pi)[0]).epsilon(1e-12));
}

TEST_CASE("reducible chain is rejected") {
    const auto pi = stationary_distribution(Matrix::identity(3));
    CHECK_FALSE(pi.has_value());

    Matrix p(3, 3);
    p(0, 0) = 1.0;  // absorbing block
    p(1, 1) = 0.5;
    p(1, 2) = 0.5;
    p(2, 1) = 0.5;
    p(2, 2) = 0.5;
    CHECK_FALSE(stationary_distribution(p).has_value());
}
