#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "subdiff/common.hpp"
#include "subdiff/kernels.hpp"
#include "subdiff/pde.hpp"
#include "subdiff/scaling.hpp"

// Empirical comparison harness: measures the constant that bounds an early
// p-mean of a nonnegative supersolution by its late infimum plus a forcing
// shift, and the oscillation decay over nested backward cylinders.

namespace subdiff {

// ---------------------------------------------------------------------------
// critical integrability exponent
// ---------------------------------------------------------------------------

// kappa(p0, N) = (2 p0 + N(p0 - 1)) / (2 + N(p0 - 1)); means with exponent
// below kappa admit the comparison estimate.
inline double critical_exponent(double p0, int N) {
    if (!(p0 > 1.0))
        throw std::invalid_argument("critical_exponent: p0 must exceed 1");
    if (N < 1)
        throw std::invalid_argument("critical_exponent: dimension must be >= 1");
    const double g = N * (p0 - 1.0);
    return (2.0 * p0 + g) / (2.0 + g);
}

// ---------------------------------------------------------------------------
// Harnack-type ratio
// ---------------------------------------------------------------------------

struct HarnackReport {
    CylinderSpec cyl;
    double p = 1.0;
    HarnackBoxes boxes;
    double lhs = 0.0;          // weighted p-mean over the early window
    double ess_inf_plus = 0.0; // grid infimum over the late window
    double f_term = 0.0;       // forcing shift
    double C_empirical = inf;  // lhs / (ess_inf_plus + f_term)
};

namespace detail {

// weighted p-mean of max(u, 0) over a box
inline double box_p_mean(const DiscreteField& u, const Box& box, double p) {
    const auto& t = u.time.nodes;
    double mass = 0.0, acc = 0.0;
    for (int n = 0; n <= u.nt(); ++n) {
        const double wt = clipped_node_weight(t, n, box.t_lo, box.t_hi);
        if (wt <= 0.0) continue;
        for (int i = 0; i < u.nx(); ++i) {
            const double wx = clipped_node_weight(u.x, i, box.x_lo, box.x_hi);
            if (wx <= 0.0) continue;
            acc += wt * wx * std::pow(std::max(u.at(n, i), 0.0), p);
            mass += wt * wx;
        }
    }
    if (!(mass > 0.0))
        throw invariant_error("harnack: the early window holds no grid mass; "
                              "refine the grids or enlarge the cylinder");
    return std::pow(acc / mass, 1.0 / p);
}

// grid infimum over nodes inside a box (time half-open from below)
inline double box_infimum(const DiscreteField& u, const Box& box) {
    double m = inf;
    const auto& t = u.time.nodes;
    for (int n = 0; n <= u.nt(); ++n) {
        if (!(t[n] > box.t_lo && t[n] <= box.t_hi)) continue;
        for (int i = 0; i < u.nx(); ++i) {
            if (u.x[i] < box.x_lo || u.x[i] > box.x_hi) continue;
            m = std::min(m, u.at(n, i));
        }
    }
    if (!std::isfinite(m))
        throw invariant_error("harnack: the late window holds no grid nodes; "
                              "refine the grids or enlarge the cylinder");
    return m;
}

} // namespace detail

// Measures lhs = (mean of u^p over the early window)^{1/p} against
// ess_inf_plus + b over the late window.  Requires a nonnegative field whose
// domain covers the comparison cylinder.  A vanishing denominator with a
// positive numerator reports an infinite constant rather than an error.
inline HarnackReport harnack_ratio(const DiscreteField& u, const CylinderSpec& cyl,
                                   double p, const MixedNormSpec& norm,
                                   double f_norm, const PhiSolver& phi) {
    if (!(p > 0.0)) throw std::invalid_argument("harnack_ratio: p must be > 0");

    HarnackReport rep;
    rep.cyl = cyl;
    rep.p = p;
    rep.boxes = phi.boxes(cyl);

    const Box& full = rep.boxes.full;
    if (full.t_hi > u.time.t_max * (1 + 1e-12) ||
        full.x_lo < u.x.front() - 1e-12 || full.x_hi > u.x.back() + 1e-12)
        throw invariant_error(
            "harnack: comparison window (t <= " + std::to_string(full.t_hi) +
            ", |x - x0| <= " + std::to_string(cyl.r) +
            ") exceeds the computed field");

    const double min_u = u.min_value();
    if (min_u < -1e-10)
        throw invariant_error("harnack: field must be nonnegative, found min = " +
                              std::to_string(min_u));

    rep.lhs = detail::box_p_mean(u, rep.boxes.q_minus, p);
    rep.ess_inf_plus = detail::box_infimum(u, rep.boxes.q_plus);
    rep.f_term = shift_constant_b(f_norm, cyl.r, norm, phi);

    const double denom = rep.ess_inf_plus + rep.f_term;
    rep.C_empirical = denom > 0.0 ? rep.lhs / denom : inf;
    return rep;
}

// ---------------------------------------------------------------------------
// oscillation decay over nested cylinders
// ---------------------------------------------------------------------------

struct HoelderReport {
    std::vector<double> osc;      // oscillation per nesting level
    std::vector<int> used_levels; // levels that enter the decay fit
    double kappa_fit = 0.0;       // fitted dyadic decay exponent
    double seminorm = 0.0;        // sampled seminorm at the fitted exponent
    double error_floor = 0.0;     // discretization noise level
    bool degenerate = false;      // field constant on every level
};

// max-norm distance between a solve and its halved-time-resolution rerun,
// used as the noise floor below which oscillations are discretization
inline double richardson_floor(const DiscreteField& fine,
                               const DiscreteField& coarse) {
    if (fine.nx() != coarse.nx() || fine.nt() != 2 * coarse.nt())
        throw std::invalid_argument(
            "richardson_floor: expected the same space grid and half the steps");
    double m = 0.0;
    for (int n = 0; n <= coarse.nt(); ++n)
        for (int i = 0; i < fine.nx(); ++i)
            m = std::max(m, std::abs(fine.at(2 * n, i) - coarse.at(n, i)));
    return m;
}

namespace detail {

struct BoxRange {
    double min = inf, max = -inf;
    int count = 0;
};

inline BoxRange box_range(const DiscreteField& u, const Box& box) {
    BoxRange r;
    const auto& t = u.time.nodes;
    for (int n = 0; n <= u.nt(); ++n) {
        if (!(t[n] > box.t_lo && t[n] <= box.t_hi)) continue;
        for (int i = 0; i < u.nx(); ++i) {
            if (u.x[i] < box.x_lo || u.x[i] > box.x_hi) continue;
            r.min = std::min(r.min, u.at(n, i));
            r.max = std::max(r.max, u.at(n, i));
            ++r.count;
        }
    }
    return r;
}

} // namespace detail

// Oscillation of u over the nested backward cylinders at (t1, x1), fitted to
// a dyadic decay rate.  Levels whose oscillation sits within 10x the noise
// floor are excluded from the fit; fewer than three usable levels is a
// numerical failure rather than a measurement.
inline HoelderReport hoelder_decay(const DiscreteField& u, double t1, double x1,
                                   double r, double theta, int levels,
                                   const PhiSolver& phi, double p0_conjugate,
                                   double error_floor = 0.0) {
    if (levels < 1)
        throw std::invalid_argument("hoelder_decay: need at least one level");

    HoelderReport rep;
    rep.error_floor = error_floor;

    Box prev;
    for (int j = 0; j < levels; ++j) {
        const Box box = phi.cylinder(t1, x1, r, j, theta);
        if (j > 0 && !(box.t_lo >= prev.t_lo - 1e-15 && box.x_lo >= prev.x_lo &&
                       box.x_hi <= prev.x_hi))
            throw invariant_error("hoelder_decay: nesting violated at level " +
                                  std::to_string(j));
        prev = box;
        const auto range = detail::box_range(u, box);
        if (range.count == 0)
            throw invariant_error("hoelder_decay: no grid nodes at level " +
                                  std::to_string(j) + "; refine the grids");
        rep.osc.push_back(range.max - range.min);
    }

    bool all_zero = true;
    for (double o : rep.osc) all_zero = all_zero && o == 0.0;
    if (all_zero) {
        rep.degenerate = true;
        return rep;
    }

    for (int j = 0; j < levels; ++j)
        if (rep.osc[j] > 10.0 * error_floor && rep.osc[j] > 0.0)
            rep.used_levels.push_back(j);
    if ((int)rep.used_levels.size() < 3)
        throw numerical_error("hoelder_decay: only " +
                              std::to_string(rep.used_levels.size()) +
                              " levels rise above the noise floor; the decay "
                              "fit would be degenerate");

    // least squares slope of log2(osc) against the level index
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int j : rep.used_levels) {
        const double y = std::log2(rep.osc[j]);
        sx += j; sy += y; sxx += double(j) * j; sxy += j * y;
    }
    const double m = (double)rep.used_levels.size();
    rep.kappa_fit = -(m * sxy - sx * sy) / (m * sxx - sx * sx);

    // sampled seminorm sup |du| / (|dt|^{1/(2 p0')} + |dx|)^{kappa}
    const Box box0 = phi.cylinder(t1, x1, r, 0, theta);
    const double t_expo = 1.0 / (2.0 * p0_conjugate);
    std::vector<std::array<double, 3>> nodes; // t, x, u
    const auto& t = u.time.nodes;
    for (int n = 0; n <= u.nt(); ++n) {
        if (!(t[n] > box0.t_lo && t[n] <= box0.t_hi)) continue;
        for (int i = 0; i < u.nx(); ++i) {
            if (u.x[i] < box0.x_lo || u.x[i] > box0.x_hi) continue;
            nodes.push_back({t[n], u.x[i], u.at(n, i)});
        }
    }
    const std::size_t stride = std::max<std::size_t>(1, nodes.size() / 64);
    for (std::size_t a = 0; a < nodes.size(); a += stride) {
        for (std::size_t b = a + stride; b < nodes.size(); b += stride) {
            const double dt = std::abs(nodes[a][0] - nodes[b][0]);
            const double dx = std::abs(nodes[a][1] - nodes[b][1]);
            const double dist = std::pow(dt, t_expo) + dx;
            if (dist <= 0.0) continue;
            const double ratio = std::abs(nodes[a][2] - nodes[b][2]) /
                                 std::pow(dist, rep.kappa_fit);
            rep.seminorm = std::max(rep.seminorm, ratio);
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// configuration sweep
// ---------------------------------------------------------------------------

struct SweepConfig {
    std::string name;
    ProblemSpec problem;
    CylinderSpec cyl;
    double p = 1.0;
    MixedNormSpec norm;
    bool forced = false; // if set, ||f|| is measured over the full window
};

struct SweepRow {
    std::string name;
    std::string family;
    double alpha = 0, gamma = 0;
    double r = 0, delta = 0, tau = 0, p = 0;
    double lhs = 0, ess_inf_plus = 0, f_term = 0, C_empirical = 0;
    std::string status; // "ok" or the error that stopped this config
};

// Runs every configuration, isolating failures into the row status, and
// preserves the input order regardless of thread interleaving.
inline std::vector<SweepRow> sweep(const std::vector<SweepConfig>& configs,
                                   int threads = 1) {
    std::vector<SweepRow> rows(configs.size());
    std::atomic<std::size_t> next{0};

    auto worker = [&]() {
        for (;;) {
            const std::size_t idx = next.fetch_add(1);
            if (idx >= configs.size()) return;
            const SweepConfig& cfg = configs[idx];
            SweepRow& row = rows[idx];
            row.name = cfg.name;
            row.family = family_name(cfg.problem.kernel.family);
            row.alpha = cfg.problem.kernel.alpha;
            row.gamma = cfg.problem.kernel.gamma;
            row.r = cfg.cyl.r;
            row.delta = cfg.cyl.delta;
            row.tau = cfg.cyl.tau;
            row.p = cfg.p;
            try {
                const KernelPair pair(cfg.problem.kernel);
                const AcceleratedKernel acc(pair, 1e-9,
                                            std::max(cfg.problem.t_max, 1.0) * 1.01);
                const PhiSolver phi([&acc](double t) { return acc.one_conv_l(t); },
                                    [&acc](double t) { return acc.l(t); },
                                    pair.r0());
                const DiscreteField u = solve(cfg.problem);
                double f_norm = 0.0;
                if (cfg.forced && cfg.problem.f)
                    f_norm = mixed_norm(cfg.problem.f, phi.boxes(cfg.cyl).full,
                                        cfg.norm);
                const HarnackReport rep =
                    harnack_ratio(u, cfg.cyl, cfg.p, cfg.norm, f_norm, phi);
                row.lhs = rep.lhs;
                row.ess_inf_plus = rep.ess_inf_plus;
                row.f_term = rep.f_term;
                row.C_empirical = rep.C_empirical;
                row.status = "ok";
            } catch (const std::exception& e) {
                row.status = e.what();
            }
        }
    };

    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return rows;
}

} // namespace subdiff
