#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "subdiff/common.hpp"
#include "subdiff/interpolation.hpp"
#include "subdiff/kernels.hpp"
#include "subdiff/mesh.hpp"
#include "subdiff/quadrature.hpp"
#include "subdiff/scaling.hpp"

// Certification of the structural hypotheses a kernel pair must satisfy
// before the regularity machinery applies, together with empirical checks
// of the comparison estimates built on them.  Every certifier works on
// plain evaluators so it can run against tabulated, perturbed, or synthetic
// kernels alike; the convenience overloads wire up a KernelPair.

namespace subdiff {

using RealFn = std::function<double(double)>;

// ---------------------------------------------------------------------------
// evaluator bundle
// ---------------------------------------------------------------------------

// The six evaluations the certifiers need, plus hints that steer quadrature.
// Bundles built from an AcceleratedKernel keep a reference to it; the kernel
// object must outlive the bundle.
struct KernelFns {
    RealFn k, l, one_conv_k, one_conv_l, kdot, k1;
    double sigma_l = 0.5; // l(t) ~ t^{-sigma_l} near zero
    double r0 = inf;      // saturation radius, (int_0^inf l)^{1/2}

    static KernelFns from(const KernelPair& pair) {
        KernelFns f;
        f.k = [pair](double t) { return pair.k(t); };
        f.l = [pair](double t) { return pair.l(t); };
        f.one_conv_k = [pair](double t) { return pair.one_conv_k(t); };
        f.one_conv_l = [pair](double t) { return pair.one_conv_l(t); };
        f.kdot = [pair](double t) { return pair.kdot(t); };
        f.k1 = [pair](double t) { return pair.k1(t); };
        f.sigma_l = pair.l_singularity_exponent();
        f.r0 = pair.r0();
        return f;
    }

    static KernelFns from(const AcceleratedKernel& acc) {
        KernelFns f;
        const auto* a = &acc;
        f.k = [a](double t) { return a->k(t); };
        f.l = [a](double t) { return a->l(t); };
        f.one_conv_k = [a](double t) { return a->one_conv_k(t); };
        f.one_conv_l = [a](double t) { return a->one_conv_l(t); };
        f.kdot = [a](double t) { return a->pair().kdot(t); };
        f.k1 = [a](double t) { return 1.0 / a->one_conv_l(t); };
        f.sigma_l = acc.pair().l_singularity_exponent();
        f.r0 = acc.pair().r0();
        return f;
    }
};

// ---------------------------------------------------------------------------
// singular power integrals
// ---------------------------------------------------------------------------

// int_0^t l(s)^p ds for l with an algebraic singularity l ~ s^{-sigma} at
// zero.  The substitution s = t v^m turns the integrand into
// ~ v^{m(1 - sigma p) - 1}, regular once m(1 - sigma p) >= 2.
inline double integral_l_power(const RealFn& l, double t, double p,
                               double sigma_hint) {
    if (!(t > 0.0)) return 0.0;
    if (!(p >= 1.0)) throw std::invalid_argument("integral_l_power: p >= 1");
    const double expo = 1.0 - sigma_hint * p;
    if (!(expo > 0.01))
        throw numerical_error("integral_l_power: l^p is not integrable near "
                              "zero (sigma*p = " +
                              std::to_string(sigma_hint * p) + ")");
    const int m = std::clamp((int)std::ceil(2.0 / expo), 1, 40);
    auto g = [&](double v) {
        const double s = t * std::pow(v, m);
        if (!(s > 1e-100)) return 0.0; // contribution ~ v^{m*expo} already
        return t * m * std::pow(v, m - 1) * std::pow(l(s), p);
    };
    return integrate(g, 0.0, 1.0, 1e-10);
}

// ---------------------------------------------------------------------------
// product rule check: k * l == 1
// ---------------------------------------------------------------------------

struct K0Result {
    double max_residual = inf; // max |(k*l)(t) - 1| on the probe window
    double worst_t = 0.0;
    double tolerance = 1e-3;
    bool nonneg_ok = false;   // k, l >= 0 at log-spaced samples
    bool monotone_ok = false; // k, l nonincreasing at log-spaced samples
    bool pass = false;
};

// Product integration of (k*l)(t_i) on a graded mesh: the k factor enters
// through exact integrals of its cumulative over the reversed cells, the l
// factor through exact cell means, so both endpoint singularities are
// integrated in closed form rather than sampled.
inline K0Result check_K0(const KernelFns& fns, double t_max = 1.0,
                         int n_steps = 2048, double grading = 2.0,
                         double tol = 1e-3) {
    const GradedTimeMesh mesh = GradedTimeMesh::make(t_max, n_steps, grading);
    const auto& t = mesh.nodes;

    K0Result res;
    res.tolerance = tol;
    res.max_residual = 0.0;

    std::vector<double> L(t.size(), 0.0);
    for (std::size_t i = 1; i < t.size(); ++i) L[i] = fns.one_conv_l(t[i]);

    const double t_probe = 0.01 * t_max;
    for (int i = 1; i <= n_steps; ++i) {
        if (t[i] < t_probe) continue;
        double acc = 0.0;
        double k_hi = fns.one_conv_k(t[i]);
        for (int j = 0; j < i; ++j) {
            const double k_lo = (j + 1 == i) ? 0.0 : fns.one_conv_k(t[i] - t[j + 1]);
            const double l_mean = (L[j + 1] - L[j]) / mesh.cell_width(j);
            acc += (k_hi - k_lo) * l_mean;
            k_hi = k_lo;
        }
        const double r = std::abs(acc - 1.0);
        if (r > res.max_residual) {
            res.max_residual = r;
            res.worst_t = t[i];
        }
    }

    res.nonneg_ok = true;
    res.monotone_ok = true;
    const auto samples = logspace(1e-6 * t_max, t_max, 200);
    double prev_k = inf, prev_l = inf;
    for (double s : samples) {
        const double kv = fns.k(s), lv = fns.l(s);
        if (!(kv >= 0.0) || !(lv >= 0.0)) res.nonneg_ok = false;
        if (kv > prev_k * (1 + 1e-9) || lv > prev_l * (1 + 1e-9))
            res.monotone_ok = false;
        prev_k = kv;
        prev_l = lv;
    }

    res.pass = res.max_residual <= tol && res.nonneg_ok && res.monotone_ok;
    return res;
}

// ---------------------------------------------------------------------------
// integrability hypothesis: mean of l^{p0} controlled by l^{p0}
// ---------------------------------------------------------------------------

struct K1Result {
    double p0 = 0.0, t0 = 0.0;
    double c_bar = 0.0;     // sup of (1/t) int_0^t l^{p0} over l(t)^{p0}
    double worst_t = 0.0;   // where the sup is attained
    double sigma_est = 0.0; // measured log-log slope of l at 0+
    double growth = 0.0;    // sup drift when the grid extends toward 0
    bool pass = false;
    std::string note;
};

inline K1Result certify_K1(const KernelFns& fns, double p0, double t0,
                           int points_per_scan = 73) {
    if (!(p0 > 1.0)) throw std::invalid_argument("certify_K1: p0 > 1 required");
    if (!(t0 > 0.0)) throw std::invalid_argument("certify_K1: t0 > 0 required");

    K1Result res;
    res.p0 = p0;
    res.t0 = t0;

    // empirical singularity exponent of l; a nonintegrable l^{p0} fails here
    const double ta = 1e-7 * t0, tb = 1e-6 * t0;
    res.sigma_est =
        (std::log(fns.l(ta)) - std::log(fns.l(tb))) / (std::log(tb) - std::log(ta));
    if (res.sigma_est * p0 >= 0.999) {
        res.note = "l^{p0} diverges near zero (sigma*p0 = " +
                   std::to_string(res.sigma_est * p0) + ")";
        return res;
    }

    const double sigma = std::max(res.sigma_est, 0.0);
    auto sup_over = [&](double decades) {
        double sup = 0.0, arg = t0;
        for (double t : logspace(t0 * std::pow(10.0, -decades), t0,
                                 (int)(points_per_scan * decades / 6.0) + 2)) {
            const double mean = integral_l_power(fns.l, t, p0, sigma) / t;
            const double ratio = mean / std::pow(fns.l(t), p0);
            if (ratio > sup) {
                sup = ratio;
                arg = t;
            }
        }
        return std::pair{sup, arg};
    };

    const auto [sup6, arg6] = sup_over(6.0);
    (void)arg6;
    const auto [sup10, arg10] = sup_over(10.0);
    res.c_bar = std::max(sup6, sup10);
    res.worst_t = arg10;
    res.growth = sup6 > 0 ? sup10 / sup6 : inf;
    if (!(std::isfinite(res.c_bar)) || res.growth > 1.2) {
        res.note = "mean-to-value ratio keeps growing toward t = 0";
        return res;
    }
    res.pass = res.c_bar >= 1.0 - 1e-9;
    return res;
}

// ---------------------------------------------------------------------------
// log-derivative hypothesis: -t k'(t) >= c~ k(t)
// ---------------------------------------------------------------------------

struct K2Result {
    double t_tilde0 = 0.0;
    double inf_ratio = inf; // inf of -t k'(t)/k(t) below t_tilde0
    double worst_t = 0.0;
    double c_tilde = 0.0;
    bool pass = false;
};

inline K2Result certify_K2(const RealFn& k, const RealFn& kdot, double t_tilde0,
                           int n_samples = 240) {
    if (!(t_tilde0 > 0.0))
        throw std::invalid_argument("certify_K2: t_tilde0 > 0 required");
    K2Result res;
    res.t_tilde0 = t_tilde0;
    for (double t : logspace(1e-8 * t_tilde0, t_tilde0 * (1 - 1e-12), n_samples)) {
        const double ratio = -t * kdot(t) / k(t);
        if (!(ratio < res.inf_ratio)) continue;
        res.inf_ratio = ratio;
        res.worst_t = t;
    }
    res.pass = std::isfinite(res.inf_ratio) && res.inf_ratio > 0.0;
    if (res.pass) res.c_tilde = std::min(res.inf_ratio, 1.0 - 1e-6);
    return res;
}

// ---------------------------------------------------------------------------
// scaled tail hypothesis: -xy k'(xy) <= c(D) k1(y) / x^beta
// ---------------------------------------------------------------------------

struct K3Result {
    double beta = 0.0;
    std::vector<double> D_grid;
    std::vector<double> c_of_D; // sup per D at the deepest y floor
    double growth = 0.0;        // worst sup ratio between successive floors
    bool pass = false;
    std::string note;
};

inline K3Result certify_K3(const RealFn& kdot, const RealFn& k1, double beta,
                           std::vector<double> D_grid = {2.0, 5.0, 10.0},
                           int n_grid = 64) {
    if (!(beta > 0.0)) throw std::invalid_argument("certify_K3: beta > 0 required");
    if (D_grid.empty() || !std::is_sorted(D_grid.begin(), D_grid.end()))
        throw std::invalid_argument("certify_K3: D grid must be sorted, nonempty");

    K3Result res;
    res.beta = beta;
    res.D_grid = D_grid;
    res.growth = 0.0;

    const std::array<double, 3> floors = {1e-4, 1e-6, 1e-8};
    for (double D : D_grid) {
        if (!(D >= 1.0)) throw std::invalid_argument("certify_K3: D >= 1 required");
        double prev_sup = -1.0, sup = 0.0;
        for (double y_floor : floors) {
            sup = 0.0;
            for (double y : logspace(y_floor, 1.0, n_grid)) {
                const double k1y = k1(y);
                for (double x : logspace(1.0, std::max(D / y, 1.0 + 1e-12), n_grid)) {
                    const double v = -x * y * kdot(x * y) * std::pow(x, beta) / k1y;
                    sup = std::max(sup, v);
                }
            }
            if (prev_sup > 0.0)
                res.growth = std::max(res.growth, sup / prev_sup);
            prev_sup = sup;
        }
        res.c_of_D.push_back(sup);
    }

    bool finite = true, monotone = true;
    for (std::size_t i = 0; i < res.c_of_D.size(); ++i) {
        if (!std::isfinite(res.c_of_D[i])) finite = false;
        if (i > 0 && res.c_of_D[i] < res.c_of_D[i - 1] * (1 - 1e-9)) monotone = false;
    }
    if (!finite) res.note = "sup is not finite";
    else if (res.growth > 1.5) res.note = "sup keeps growing as y -> 0; beta too large";
    else if (!monotone) res.note = "c(D) is not nondecreasing";
    res.pass = finite && res.growth <= 1.5 && monotone;
    return res;
}

// ---------------------------------------------------------------------------
// certificate
// ---------------------------------------------------------------------------

struct AssumptionCertificate {
    std::string family;
    double p0 = 0.0, t0 = 0.0;       // integrability window and exponent
    double c_bar = 0.0;              // mean-domination constant
    double c_tilde = 0.0, t_tilde0 = 0.0; // log-derivative constant and window
    double beta = 0.0;               // tail decay exponent
    std::vector<std::pair<double, double>> c_of_D; // (D, c(D)) samples
    double max_residual_kl = inf;    // product rule residual

    void validate() const {
        if (!(p0 > 1.0)) throw invariant_error("certificate: p0 must exceed 1");
        if (!(t0 > 0.0)) throw invariant_error("certificate: t0 must be positive");
        if (!(c_bar >= 1.0)) throw invariant_error("certificate: c_bar must be >= 1");
        if (!(c_tilde > 0.0 && c_tilde < 1.0))
            throw invariant_error("certificate: c_tilde must lie in (0,1)");
        if (!(t_tilde0 > 0.0))
            throw invariant_error("certificate: t_tilde0 must be positive");
        if (!(beta > 0.0)) throw invariant_error("certificate: beta must be positive");
        for (std::size_t i = 1; i < c_of_D.size(); ++i)
            if (c_of_D[i].second < c_of_D[i - 1].second * (1 - 1e-9))
                throw invariant_error("certificate: c(D) must be nondecreasing");
        if (!(max_residual_kl <= 1e-3))
            throw invariant_error("certificate: product rule residual exceeds 1e-3");
    }

    double p0_conjugate() const { return p0 / (p0 - 1.0); }
};

// ---------------------------------------------------------------------------
// family defaults
// ---------------------------------------------------------------------------

// Halfway between 1 and the integrability limit 1/sigma of the l-singularity
// (capped at 4 for nearly regular kernels).
inline double default_p0(const KernelPair& pair) {
    const double sigma = pair.l_singularity_exponent();
    const double limit = sigma > 0 ? std::min(1.0 / sigma, 4.0) : 4.0;
    return 0.5 * (1.0 + limit);
}

// Window on which the mean-domination constant is certified.  The exchanged
// tempered pair concentrates its exponential decay, which shrinks the window.
inline double default_t0(const KernelPair& pair, double p0) {
    const auto& s = pair.spec();
    if (s.family == Family::switched_frac_exp && s.gamma > 0.0) {
        const double w = (1.0 / p0 - s.alpha) / (2.0 * s.gamma);
        if (w > 0.0) return w;
    }
    return 1.0;
}

// Tail decay exponent matched to where the pair's k-singularity sits.
inline double default_beta(const KernelPair& pair) {
    const auto& s = pair.spec();
    switch (s.family) {
    case Family::frac_exp: return s.alpha;
    case Family::switched_frac_exp: return 1.0 - s.alpha;
    case Family::distributed: {
        const double lo = s.measure.alpha_min();
        const double guess = lo > 0 ? 0.5 * lo : 0.25 * s.measure.alpha_max();
        return std::clamp(guess, 0.01, 0.49);
    }
    default: return 1.0 - s.measure.alpha_max();
    }
}

// ---------------------------------------------------------------------------
// comparison estimates
// ---------------------------------------------------------------------------

struct LemmaCheck {
    std::string name;
    double worst_margin = inf;    // min over samples of (rhs - lhs)/scale
    std::array<double, 3> at{};   // witnessing sample parameters
    bool pass = false;
};

struct LemmaReport {
    std::vector<LemmaCheck> checks;
    double slack = 1e-8;
    bool all_pass = false;
};

// Randomized verification of the comparison estimates implied by the
// certified constants.  Each check records its smallest relative margin
// (rhs - lhs)/max(|rhs|,|lhs|); a margin below -slack is a violation.
inline LemmaReport check_lemmas(const KernelFns& fns,
                                const AssumptionCertificate& cert,
                                const PhiSolver& phi, std::uint64_t seed = 1,
                                int n_samples = 200) {
    LemmaReport report;
    std::mt19937_64 rng(seed);
    auto uniform = [&](double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(rng);
    };
    auto log_uniform = [&](double lo, double hi) {
        return std::exp(uniform(std::log(lo), std::log(hi)));
    };

    auto run = [&](const std::string& name, auto&& sample) {
        LemmaCheck c;
        c.name = name;
        for (int i = 0; i < n_samples; ++i) {
            // sample() returns {lhs, rhs, p1, p2, p3}
            const std::array<double, 5> s = sample();
            const double scale =
                std::max({std::abs(s[0]), std::abs(s[1]), 1e-300});
            const double margin = (s[1] - s[0]) / scale;
            if (margin < c.worst_margin) {
                c.worst_margin = margin;
                c.at = {s[2], s[3], s[4]};
            }
        }
        c.pass = c.worst_margin >= -report.slack;
        report.checks.push_back(std::move(c));
    };

    const double p0 = cert.p0, t0 = cert.t0, cb = cert.c_bar;
    const double pp = cert.p0_conjugate();
    const double rs = phi.r_star(cert.t0, cert.t_tilde0);
    const double sigma = fns.sigma_l;

    // k is dominated by the reciprocal of 1*l
    run("k_le_k1", [&]() -> std::array<double, 5> {
        const double t = log_uniform(1e-6, 3.0);
        return {fns.k(t), fns.k1(t), t, 0, 0};
    });

    // the running integral of k is dominated by t k1(t) up to c_bar
    run("one_conv_k_le", [&]() -> std::array<double, 5> {
        const double t = log_uniform(1e-6 * t0, t0);
        return {fns.one_conv_k(t), cb * t * fns.k1(t), t, 0, 0};
    });

    // k1 scales at worst like 1/y
    run("k1_scaling", [&]() -> std::array<double, 5> {
        const double x = log_uniform(1e-4, 2.0), y = log_uniform(1e-4, 2.0);
        return {fns.k1(x * y), std::max(1.0, 1.0 / y) * fns.k1(x), x, y, 0};
    });

    // l grows at worst like 1/a under contraction of its argument
    run("l_scaling", [&]() -> std::array<double, 5> {
        const double a = uniform(1e-4, 1.0 - 1e-9);
        const double t = log_uniform(1e-6 * t0, t0);
        return {fns.l(a * t), cb / a * fns.l(t), a, t, 0};
    });

    // 1*l contracts with the conjugate-exponent power
    run("one_conv_l_scaling", [&]() -> std::array<double, 5> {
        const double x = uniform(1e-4, 1.0 - 1e-9);
        const double y = log_uniform(1e-6 * t0, t0);
        return {fns.one_conv_l(x * y),
                std::pow(cb, 1.0 / p0) * std::pow(x, 1.0 / pp) * fns.one_conv_l(y),
                x, y, 0};
    });

    // windowed L^p mass of l is controlled by powers of the radius
    run("lp_window", [&]() -> std::array<double, 5> {
        const double p = uniform(1.0, p0);
        const double r = log_uniform(1e-3 * rs, rs);
        const double w = phi.phi(2.0 * r);
        const double lhs =
            integral_l_power(fns.l, w, p, sigma) * std::pow(w, p - 1.0);
        const double rhs = std::pow(4.0, p0) * cb * std::pow(r, 2.0 * p);
        return {lhs, rhs, p, r, 0};
    });

    // the time scale grows at worst like y^{2 p0'} under dilation
    run("phi_upper", [&]() -> std::array<double, 5> {
        const double x = log_uniform(1e-3 * rs, rs);
        const double y = uniform(1.0 + 1e-9, 2.0);
        return {phi.phi(x * y),
                std::pow(cb, 1.0 / (p0 - 1.0)) * std::pow(y, 2.0 * pp) * phi.phi(x),
                x, y, 0};
    });

    // the time scale shrinks at least quadratically
    run("phi_shrink", [&]() -> std::array<double, 5> {
        const double lam = uniform(1e-3, 1.0);
        const double r = log_uniform(1e-3 * rs, 2.0 * rs);
        return {phi.phi(lam * r), lam * lam * phi.phi(r), lam, r, 0};
    });

    // quantitative lower bound: inf of phi(2r)/r^{2 p0'} over (0, r*]
    {
        LemmaCheck c;
        c.name = "phi_lower_c";
        c.worst_margin = inf;
        for (double r : logspace(1e-4 * rs, rs, n_samples)) {
            const double ratio = phi.phi(2.0 * r) / std::pow(r, 2.0 * pp);
            if (ratio < c.worst_margin) {
                c.worst_margin = ratio;
                c.at = {r, 0, 0};
            }
        }
        c.pass = c.worst_margin > 0.0 && std::isfinite(c.worst_margin);
        report.checks.push_back(std::move(c));
    }

    // L^p norms of l contract with the exponent-gap power
    run("lp_scaling", [&]() -> std::array<double, 5> {
        const double p = 1.0 + (p0 - 1.0) * uniform(0.01, 0.99);
        const double x = uniform(1e-3, 1.0 - 1e-9);
        const double y = log_uniform(1e-4 * t0, t0);
        const double lhs = std::pow(integral_l_power(fns.l, x * y, p, sigma), 1.0 / p);
        const double rhs = std::pow(cb, 1.0 / p + 1.0 / p0) *
                           std::pow(x, 1.0 / p - 1.0 / p0) *
                           std::pow(integral_l_power(fns.l, y, p, sigma), 1.0 / p);
        return {lhs, rhs, p, x, y};
    });

    // mean-value form of the log-derivative bound
    run("k_drop", [&]() -> std::array<double, 5> {
        const double tt = cert.t_tilde0 * (1.0 - 1e-9);
        const double x = log_uniform(1e-6 * tt, tt * (1.0 - 1e-9));
        const double y = x + (tt - x) * uniform(1e-6, 1.0);
        return {cert.c_tilde * fns.k(x) * (y - x) / y, fns.k(x) - fns.k(y), x, y, 0};
    });

    report.all_pass = true;
    for (const auto& c : report.checks) report.all_pass = report.all_pass && c.pass;
    return report;
}

// ---------------------------------------------------------------------------
// driver
// ---------------------------------------------------------------------------

struct CertifyOptions {
    std::optional<double> p0, t0, t_tilde0, beta;
    double t_max = 1.0;
    int n_steps = 2048;
    double grading = 2.0;
    double k0_tol = 1e-3;
    std::uint64_t seed = 1;
    int lemma_samples = 200;
    bool run_lemmas = true;
};

struct CertifyReport {
    AssumptionCertificate cert;
    K0Result k0;
    K1Result k1;
    K2Result k2;
    K3Result k3;
    LemmaReport lemmas;
    bool pass = false;
};

// Runs the full battery for one kernel pair.  Laplace-represented sides get
// log-log tables first so the O(n^2) product check and the randomized lemma
// grids stay cheap.
inline CertifyReport certify(const KernelPair& pair, CertifyOptions opt = {}) {
    const double p0 = opt.p0 ? *opt.p0 : default_p0(pair);
    const double t0 = opt.t0 ? *opt.t0 : default_t0(pair, p0);
    const double t_tilde0 = opt.t_tilde0 ? *opt.t_tilde0 : 1.0;
    const double beta = opt.beta ? *opt.beta : default_beta(pair);

    const double t_lo =
        0.5 * opt.t_max * std::pow(double(opt.n_steps), -opt.grading);
    const AcceleratedKernel acc(pair, std::min(t_lo, 1e-9),
                                std::max(opt.t_max, 10.0) * 1.01);
    KernelFns fns = KernelFns::from(acc);

    // the exchanged spectral family also pays a Laplace integral per kdot
    // evaluation; tabulate -kdot once (positive, power-law tailed)
    std::optional<LogLogTable> neg_kdot;
    if (pair.spec().family == Family::switched_distributed) {
        neg_kdot.emplace([&pair](double t) { return -pair.kdot(t); }, 1e-9, 10.1);
        const auto* tab = &*neg_kdot;
        fns.kdot = [tab](double t) { return -(*tab)(t); };
    }

    CertifyReport rep;
    rep.k0 = check_K0(fns, opt.t_max, opt.n_steps, opt.grading, opt.k0_tol);
    rep.k1 = certify_K1(fns, p0, t0);
    rep.k2 = certify_K2(fns.k, fns.kdot, t_tilde0);
    rep.k3 = certify_K3(fns.kdot, fns.k1, beta);

    rep.cert.family = family_name(pair.spec().family);
    rep.cert.p0 = p0;
    rep.cert.t0 = t0;
    rep.cert.c_bar = rep.k1.c_bar;
    rep.cert.c_tilde = rep.k2.c_tilde;
    rep.cert.t_tilde0 = t_tilde0;
    rep.cert.beta = beta;
    for (std::size_t i = 0; i < rep.k3.D_grid.size(); ++i)
        rep.cert.c_of_D.emplace_back(rep.k3.D_grid[i], rep.k3.c_of_D[i]);
    rep.cert.max_residual_kl = rep.k0.max_residual;

    rep.pass = rep.k0.pass && rep.k1.pass && rep.k2.pass && rep.k3.pass;
    if (opt.run_lemmas && rep.pass) {
        const PhiSolver phi(fns.one_conv_l, fns.l, fns.r0);
        rep.lemmas = check_lemmas(fns, rep.cert, phi, opt.seed, opt.lemma_samples);
        rep.pass = rep.pass && rep.lemmas.all_pass;
    }
    if (rep.pass) rep.cert.validate();
    return rep;
}

} // namespace subdiff
