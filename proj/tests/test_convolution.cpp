// Product-integration weights, discrete convolution accuracy, and the
// log-log tabulation used to accelerate Laplace-represented kernels.

#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "oracles.hpp"
#include "subdiff/convolution.hpp"
#include "subdiff/interpolation.hpp"

using namespace subdiff;
using Catch::Approx;

namespace {

KernelPair power_pair() {
    KernelSpec s;
    s.family = Family::frac_exp;
    s.alpha = 0.5;
    s.gamma = 0.0;
    return KernelPair(s);
}

} // namespace

TEST_CASE("discrete convolution against a constant telescopes exactly") {
    const KernelPair pair = power_pair();
    const auto mesh = GradedTimeMesh::make(1.0, 64, 2.0);
    const auto w = ConvolutionWeights::make_k(mesh, pair);
    const std::vector<double> ones(mesh.nodes.size(), 1.0);
    const auto out = convolve(w, ones);
    CHECK(out[0] == 0.0);
    for (std::size_t i = 1; i < out.size(); ++i)
        CHECK(out[i] ==
              Approx(pair.one_conv_k(mesh.nodes[i])).epsilon(1e-13));
}

TEST_CASE("discrete convolution of a linear ramp converges above first order") {
    const KernelPair pair = power_pair();
    // (k * s)(t) = t^{3/2} / Gamma(5/2)
    const double exact = 1.0 / oracle::gamma_fn(2.5);
    double prev_err = inf;
    for (int nt : {64, 128, 256}) {
        const auto mesh = GradedTimeMesh::make(1.0, nt, 2.0);
        const auto w = ConvolutionWeights::make_k(mesh, pair);
        std::vector<double> v(mesh.nodes.begin(), mesh.nodes.end());
        const auto out = convolve(w, v);
        const double err = std::abs(out.back() - exact);
        INFO("nt = " << nt << " err = " << err);
        CHECK(err < prev_err);
        if (std::isfinite(prev_err))
            CHECK(std::log2(prev_err / err) >= 1.3); // measured order ~3/2
        prev_err = err;
    }
    CHECK(prev_err < 3e-4);
}

TEST_CASE("convolution rejects mis-sized input") {
    const auto mesh = GradedTimeMesh::make(1.0, 8, 1.0);
    const auto w = ConvolutionWeights::make_k(mesh, power_pair());
    CHECK_THROWS_AS(convolve(w, std::vector<double>(3, 0.0)),
                    std::invalid_argument);
}

TEST_CASE("backward cell masses telescope and their averages are ordered") {
    const KernelPair pair = power_pair();
    const auto mesh = GradedTimeMesh::make(1.0, 48, 3.0);
    const auto w = ConvolutionWeights::make_k(mesh, pair);
    const int n = 48;
    const auto kappa = backward_cell_masses(w, n);
    REQUIRE((int)kappa.size() == n);

    double sum = 0.0;
    for (double m : kappa) {
        CHECK(m >= 0.0);
        sum += m;
    }
    CHECK(sum == Approx(pair.one_conv_k(mesh.nodes[n])).epsilon(1e-12));

    // For a nonincreasing kernel the cell averages grow toward the endpoint.
    double prev = 0.0;
    for (int j = 0; j < n; ++j) {
        const double width = mesh.nodes[j + 1] - mesh.nodes[j];
        const double avg = kappa[j] / width;
        CHECK(avg >= prev * (1.0 - 1e-12));
        prev = avg;
    }
}

TEST_CASE("log-log table is exact on power laws, including extrapolation") {
    const LogLogTable tab([](double t) { return 2.5 * std::pow(t, -0.6); }, 1e-6,
                          10.0);
    for (double t : {1e-9, 1e-6, 3e-4, 0.02, 1.0, 10.0, 500.0})
        CHECK(tab(t) == Approx(2.5 * std::pow(t, -0.6)).epsilon(1e-10));
}

TEST_CASE("log-log table tracks a curved positive function") {
    auto f = [](double t) { return std::exp(-t) * std::pow(t, -0.5); };
    const LogLogTable tab(f, 1e-6, 10.0);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-6.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        const double t = std::pow(10.0, u(rng));
        CHECK(tab(t) == Approx(f(t)).epsilon(1e-6));
    }
}

TEST_CASE("log-log table refuses nonpositive data") {
    CHECK_THROWS_AS(LogLogTable([](double t) { return t - 0.5; }, 1e-3, 1.0),
                    numerical_error);
}

TEST_CASE("monotone interpolation does not overshoot") {
    // Step-like monotone data: pchip must stay within [0, 1].
    std::vector<double> x{0, 1, 2, 3, 4, 5};
    std::vector<double> y{0, 0, 0.02, 0.98, 1, 1};
    const PchipInterpolant p(std::move(x), std::move(y));
    for (double t = 0.0; t <= 5.0; t += 0.01) {
        CHECK(p(t) >= -1e-12);
        CHECK(p(t) <= 1.0 + 1e-12);
    }
    CHECK(p(2.0) == Approx(0.02));
    CHECK_THROWS_AS(PchipInterpolant({1.0, 1.0}, {0.0, 1.0}),
                    std::invalid_argument);
}
