// Cross-checks between the independent reference routes and the library's
// special functions, so every later tolerance rests on agreeing oracles.

#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "subdiff/special.hpp"

using Catch::Approx;

TEST_CASE("erfc closed form matches the literal series at order one half") {
    for (double x : {0.05, 0.2, 0.5, 1.0, 1.8}) {
        CHECK(oracle::ml_half(x) ==
              Approx(oracle::ml_series(0.5, 1.0, x)).epsilon(1e-11));
        CHECK(oracle::ml_half_half(x) ==
              Approx(oracle::ml_series(0.5, 0.5, x)).epsilon(1e-11));
    }
}

TEST_CASE("relaxation values are positive, below one, and decreasing") {
    double prev = 1.0;
    for (double x : {0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0}) {
        const double v = oracle::ml_half(x);
        CHECK(v > 0.0);
        CHECK(v < prev);
        prev = v;
    }
    CHECK(oracle::ml_half(0.0) == 1.0);
    CHECK(oracle::ml_half(1.0) == Approx(0.42758357615580700).epsilon(1e-14));
    CHECK(oracle::ml_half_half(0.0) ==
          Approx(0.56418958354775628).epsilon(1e-14));
}

TEST_CASE("spectral evaluation agrees with the erfc route at order one half") {
    for (double x : {0.01, 0.1, 1.0, 3.0, 10.0, 24.0})
        CHECK(subdiff::mittag_leffler_neg(0.5, x) ==
              Approx(oracle::ml_half(x)).epsilon(1e-9));
}

TEST_CASE("both evaluation branches match scaled erfc around their handover") {
    // e^{x^2} erfc(x) ~ (1 - 1/(2x^2) + 3/(4x^4) - ...) / (x sqrt(pi)),
    // fully converged in double precision for x near 50
    auto erfcx_series = [](double x) {
        const double ix2 = 1.0 / (x * x);
        double term = 1.0, sum = 1.0;
        for (int k = 1; k <= 8; ++k) {
            term *= -(2.0 * k - 1.0) * 0.5 * ix2;
            sum += term;
        }
        return sum / (x * std::sqrt(subdiff::pi));
    };
    CHECK(subdiff::mittag_leffler_neg(0.5, 49.0) ==
          Approx(erfcx_series(49.0)).epsilon(1e-9));
    CHECK(subdiff::mittag_leffler_neg(0.5, 50.0) ==
          Approx(erfcx_series(50.0)).epsilon(1e-12));
    CHECK(subdiff::mittag_leffler_neg(0.5, 64.0) ==
          Approx(erfcx_series(64.0)).epsilon(1e-12));
}

TEST_CASE("spectral evaluation agrees with the series at other orders") {
    for (double a : {0.3, 0.7})
        for (double x : {0.05, 0.3, 1.0})
            CHECK(subdiff::mittag_leffler_neg(a, x) ==
                  Approx(oracle::ml_series(a, 1.0, x)).epsilon(1e-9));
}

TEST_CASE("spectral evaluation reaches the algebraic tail") {
    // E_a(-x) ~ 1/(x Gamma(1-a)) for large x.
    const double x = 1e6;
    for (double a : {0.3, 0.5, 0.7}) {
        const double lead = 1.0 / (x * oracle::gamma_fn(1.0 - a));
        CHECK(subdiff::mittag_leffler_neg(a, x) == Approx(lead).epsilon(1e-2));
    }
}

TEST_CASE("spectral evaluation rejects out-of-range arguments") {
    CHECK_THROWS_AS(subdiff::mittag_leffler_neg(1.2, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(subdiff::mittag_leffler_neg(0.5, -1.0), std::invalid_argument);
}

TEST_CASE("singular convolution quadrature reproduces closed forms") {
    // 1 * 1 = t.
    auto one = [](double) { return 1.0; };
    CHECK(oracle::convolve(one, one, 0.7, 0.0, 0.0) == Approx(0.7).epsilon(1e-10));

    // (t^{-1/2}/G(1/2)) * (t^{-1/2}/G(1/2)) = 1 via the Beta integral.
    auto p = [](double t) { return std::pow(t, -0.5) / oracle::gamma_fn(0.5); };
    for (double t : {0.1, 1.0, 7.0})
        CHECK(oracle::convolve(p, p, t, 0.5, 0.5) == Approx(1.0).epsilon(1e-8));

    // (t^{-0.7}/G(0.3)) * (t^{-0.3}/G(0.7)) = 1 with asymmetric exponents.
    auto k = [](double t) { return std::pow(t, -0.7) / oracle::gamma_fn(0.3); };
    auto l = [](double t) { return std::pow(t, -0.3) / oracle::gamma_fn(0.7); };
    for (double t : {0.05, 0.8, 3.0})
        CHECK(oracle::convolve(k, l, t, 0.7, 0.3) == Approx(1.0).epsilon(1e-8));
}
