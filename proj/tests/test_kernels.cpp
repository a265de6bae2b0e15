// Kernel pair construction: closed forms, the product identity against
// brute-force quadrature, singularity exponents, and saturation radii.

#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "subdiff/kernels.hpp"

using namespace subdiff;
using Catch::Approx;

namespace {

KernelSpec spec_frac(double a, double g) {
    KernelSpec s;
    s.family = Family::frac_exp;
    s.alpha = a;
    s.gamma = g;
    return s;
}

KernelSpec spec_switched(double a, double g) {
    KernelSpec s;
    s.family = Family::switched_frac_exp;
    s.alpha = a;
    s.gamma = g;
    return s;
}

KernelSpec spec_atoms() {
    KernelSpec s;
    s.family = Family::distributed;
    s.measure.atoms = {{0.3, 0.5}, {0.7, 0.5}};
    return s;
}

} // namespace

TEST_CASE("spec validation rejects out-of-range parameters") {
    CHECK_THROWS_AS(KernelPair(spec_frac(0.0, 0.0)), invariant_error);
    CHECK_THROWS_AS(KernelPair(spec_frac(1.0, 0.0)), invariant_error);
    CHECK_THROWS_AS(KernelPair(spec_frac(0.5, -1.0)), invariant_error);
    KernelSpec empty;
    empty.family = Family::distributed;
    CHECK_THROWS_AS(KernelPair(empty), invariant_error);
}

TEST_CASE("pure power kernels match their closed forms") {
    const KernelPair pair(spec_frac(0.5, 0.0));
    for (double t : {0.01, 0.3, 1.0, 4.0}) {
        CHECK(pair.k(t) ==
              Approx(std::pow(t, -0.5) / oracle::gamma_fn(0.5)).epsilon(1e-13));
        CHECK(pair.l(t) ==
              Approx(std::pow(t, -0.5) / oracle::gamma_fn(0.5)).epsilon(1e-13));
        CHECK(pair.one_conv_k(t) ==
              Approx(std::pow(t, 0.5) / oracle::gamma_fn(1.5)).epsilon(1e-13));
        CHECK(pair.one_conv_l(t) ==
              Approx(std::pow(t, 0.5) / oracle::gamma_fn(1.5)).epsilon(1e-13));
        CHECK(pair.k1(t) == Approx(1.0 / pair.one_conv_l(t)).epsilon(1e-14));
    }
    CHECK(pair.one_conv_k(0.0) == 0.0);
    CHECK(pair.one_conv_l(0.0) == 0.0);
}

TEST_CASE("derivative evaluators match central differences") {
    for (const auto& spec : {spec_frac(0.3, 1.0), spec_switched(0.5, 1.0)}) {
        const KernelPair pair(spec);
        for (double t : {0.05, 0.4, 1.3}) {
            const double h = 1e-6 * t;
            const double fd = (pair.k(t + h) - pair.k(t - h)) / (2.0 * h);
            CHECK(pair.kdot(t) == Approx(fd).epsilon(1e-6));
            const double fl = (pair.l(t + h) - pair.l(t - h)) / (2.0 * h);
            CHECK(pair.ldot(t) == Approx(fl).epsilon(1e-6));
        }
    }
}

TEST_CASE("product identity holds pointwise for every family") {
    struct Case {
        KernelSpec spec;
        double sk, sl; // singularity exponents for the quadrature oracle
    };
    KernelSpec sd = spec_atoms();
    sd.family = Family::switched_distributed;
    const Case cases[] = {
        {spec_frac(0.5, 0.0), 0.5, 0.5},   {spec_frac(0.3, 1.0), 0.3, 0.7},
        {spec_frac(0.7, 1.0), 0.7, 0.3},   {spec_switched(0.5, 1.0), 0.5, 0.5},
        {spec_switched(0.3, 0.5), 0.7, 0.3}, {spec_atoms(), 0.7, 0.3},
        {sd, 0.3, 0.7},
    };
    for (const auto& c : cases) {
        const KernelPair pair(c.spec);
        auto k = [&](double s) { return pair.k(s); };
        auto l = [&](double s) { return pair.l(s); };
        for (double t : {0.05, 0.5, 0.95}) {
            INFO(family_name(c.spec.family) << " t=" << t);
            CHECK(oracle::convolve(k, l, t, c.sk, c.sl) ==
                  Approx(1.0).epsilon(2e-6));
        }
    }
}

TEST_CASE("singularity exponents follow the family") {
    CHECK(KernelPair(spec_frac(0.5, 0.0)).l_singularity_exponent() == Approx(0.5));
    CHECK(KernelPair(spec_frac(0.3, 1.0)).l_singularity_exponent() == Approx(0.7));
    CHECK(KernelPair(spec_switched(0.3, 1.0)).l_singularity_exponent() ==
          Approx(0.3));
    CHECK(KernelPair(spec_atoms()).l_singularity_exponent() == Approx(0.3));
    KernelSpec sd = spec_atoms();
    sd.family = Family::switched_distributed;
    CHECK(KernelPair(sd).l_singularity_exponent() == Approx(0.7));
}

TEST_CASE("saturation radius is finite only for the switched tempered pair") {
    CHECK(std::isinf(KernelPair(spec_frac(0.5, 1.0)).r0()));
    CHECK(std::isinf(KernelPair(spec_atoms()).r0()));
    CHECK(KernelPair(spec_switched(0.5, 1.0)).r0() == Approx(1.0).epsilon(1e-12));
    // (int_0^inf l)^{1/2} = gamma^{(a-1)/2}
    CHECK(KernelPair(spec_switched(0.5, 4.0)).r0() ==
          Approx(std::pow(4.0, -0.25)).epsilon(1e-12));
}

TEST_CASE("single-atom distributed order reduces to the pure power pair") {
    KernelSpec one_atom;
    one_atom.family = Family::distributed;
    one_atom.measure.atoms = {{0.4, 1.0}};
    const KernelPair da(one_atom);
    const KernelPair fe(spec_frac(0.4, 0.0));
    for (double t : {0.01, 0.2, 1.0, 5.0}) {
        CHECK(da.k(t) == Approx(fe.k(t)).epsilon(1e-12));
        CHECK(da.l(t) == Approx(fe.l(t)).epsilon(1e-7));
        CHECK(da.one_conv_l(t) == Approx(fe.one_conv_l(t)).epsilon(1e-7));
    }
}

TEST_CASE("uniform weight kernels stay consistent under the product check") {
    KernelSpec s;
    s.family = Family::distributed;
    const Measure dens = Measure::uniform_density(1.0, 16, 0.0, 1.0);
    s.measure.density = dens.density;
    s.measure.support_lo = dens.support_lo;
    s.measure.support_hi = dens.support_hi;
    const KernelPair pair(s);
    auto k = [&](double x) { return pair.k(x); };
    auto l = [&](double x) { return pair.l(x); };
    // k integrates t^{-a} over a in (0,1): worst singularity near exponent 1.
    for (double t : {0.1, 0.6})
        CHECK(oracle::convolve(k, l, t, 0.97, 0.2) == Approx(1.0).epsilon(2e-4));
}

TEST_CASE("accelerated tables reproduce the direct evaluators") {
    const KernelPair pair(spec_atoms());
    const AcceleratedKernel acc(pair, 1e-9, 10.0);
    for (double t : {1e-8, 1e-5, 1e-2, 0.5, 3.0, 9.0}) {
        CHECK(acc.k(t) == Approx(pair.k(t)).epsilon(1e-6));
        CHECK(acc.l(t) == Approx(pair.l(t)).epsilon(1e-6));
        CHECK(acc.one_conv_k(t) == Approx(pair.one_conv_k(t)).epsilon(1e-6));
        CHECK(acc.one_conv_l(t) == Approx(pair.one_conv_l(t)).epsilon(1e-6));
    }
    CHECK(acc.one_conv_k(0.0) == 0.0);
}

TEST_CASE("kernels are nonnegative and nonincreasing on a wide grid") {
    for (const auto& spec :
         {spec_frac(0.5, 0.0), spec_switched(0.5, 1.0), spec_atoms()}) {
        const KernelPair pair(spec);
        double pk = inf, pl = inf;
        for (double t : logspace(1e-6, 10.0, 60)) {
            const double k = pair.k(t), l = pair.l(t);
            CHECK(k >= 0.0);
            CHECK(l >= 0.0);
            CHECK(k <= pk * (1.0 + 1e-9));
            CHECK(l <= pl * (1.0 + 1e-9));
            pk = k;
            pl = l;
        }
    }
}
