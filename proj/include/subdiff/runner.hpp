#pragma once

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "subdiff/certify.hpp"
#include "subdiff/config.hpp"
#include "subdiff/csv.hpp"
#include "subdiff/harnack.hpp"
#include "subdiff/kernels.hpp"
#include "subdiff/pde.hpp"
#include "subdiff/presets.hpp"
#include "subdiff/special.hpp"

// Experiment runner: loads a key = value config, executes one mode, and
// writes plot-ready CSV artifacts plus a short human summary on stdout.
// Exit codes: 0 all checks passed, 2 config/usage error, 3 invariant
// violation, 4 numerical failure.

namespace subdiff {

struct RunnerOptions {
    std::string mode;         // empty: read [run] mode from the config
    std::string config_path;  // required except for the preset listing
    std::string out_override; // --out beats SUBDIFF_OUT_DIR beats [output] dir
    int threads = 0;          // <= 0: read [run] threads, default 1
    std::uint64_t seed = 0;
    bool have_seed = false;   // seed flag given on the command line
};

inline std::string resolve_out_dir(const Config& cfg,
                                   const std::string& override_dir) {
    // always consume the config key so an unused [output] dir is not flagged
    const std::string cfg_dir = cfg.get_string("output", "dir", "./out");
    std::string dir = override_dir;
    if (dir.empty())
        if (const char* env = std::getenv("SUBDIFF_OUT_DIR")) dir = env;
    if (dir.empty()) dir = cfg_dir;
    std::filesystem::create_directories(dir);
    return dir;
}

inline std::string bool_cell(bool b) { return b ? "1" : "0"; }

// ---------------------------------------------------------------------------
// certify
// ---------------------------------------------------------------------------

inline int run_certify(const Config& cfg, const std::string& out,
                       std::uint64_t seed) {
    const KernelSpec ks = kernel_from_config(cfg);
    const KernelPair pair(ks);

    CertifyOptions opt;
    opt.seed = seed;
    if (cfg.has("certify", "p0")) opt.p0 = cfg.require_double("certify", "p0");
    if (cfg.has("certify", "t0")) opt.t0 = cfg.require_double("certify", "t0");
    if (cfg.has("certify", "t_tilde0"))
        opt.t_tilde0 = cfg.require_double("certify", "t_tilde0");
    if (cfg.has("certify", "beta")) opt.beta = cfg.require_double("certify", "beta");
    opt.t_max = cfg.get_double("certify", "t_max", opt.t_max);
    opt.n_steps = cfg.get_int("certify", "n_steps", opt.n_steps);
    opt.grading = cfg.get_double("certify", "grading", opt.grading);
    opt.k0_tol = cfg.get_double("certify", "tol", opt.k0_tol);
    opt.lemma_samples = cfg.get_int("certify", "samples", opt.lemma_samples);
    cfg.require_all_consumed();

    const CertifyReport rep = certify(pair, opt);

    CsvWriter cert(out + "/certificate.csv", "subdiff.certificate.v1",
                   {"family", "alpha", "gamma", "p0", "t0", "t_tilde0", "beta",
                    "c_bar", "c_tilde", "max_residual_kl", "c_of_D", "k0_pass",
                    "k1_pass", "k2_pass", "k3_pass", "lemmas_pass", "pass"});
    std::string cd;
    for (const auto& [D, c] : rep.cert.c_of_D) {
        if (!cd.empty()) cd += ';';
        cd += format_g17(D) + ':' + format_g17(c);
    }
    cert.row({family_name(ks.family),
              CsvWriter::num(ks.alpha), CsvWriter::num(ks.gamma),
              CsvWriter::num(rep.cert.p0), CsvWriter::num(rep.cert.t0),
              CsvWriter::num(rep.cert.t_tilde0), CsvWriter::num(rep.cert.beta),
              CsvWriter::num(rep.cert.c_bar), CsvWriter::num(rep.cert.c_tilde),
              CsvWriter::num(rep.cert.max_residual_kl), cd, bool_cell(rep.k0.pass),
              bool_cell(rep.k1.pass), bool_cell(rep.k2.pass), bool_cell(rep.k3.pass),
              bool_cell(rep.lemmas.all_pass), bool_cell(rep.pass)});

    CsvWriter lem(out + "/lemmas.csv", "subdiff.lemmas.v1",
                  {"name", "worst_margin", "at_0", "at_1", "at_2", "pass"});
    for (const auto& c : rep.lemmas.checks)
        lem.row({c.name, CsvWriter::num(c.worst_margin), CsvWriter::num(c.at[0]),
                 CsvWriter::num(c.at[1]), CsvWriter::num(c.at[2]),
                 bool_cell(c.pass)});

    std::cout << "certify " << family_name(ks.family) << ": "
              << (rep.pass ? "PASS" : "FAIL") << "  c_bar=" << rep.cert.c_bar
              << " c_tilde=" << rep.cert.c_tilde
              << " residual=" << rep.cert.max_residual_kl << '\n';
    if (!rep.k0.pass) std::cout << "  product check failed\n";
    if (!rep.k1.pass) std::cout << "  mean-domination check failed: " << rep.k1.note << '\n';
    if (!rep.k2.pass) std::cout << "  log-derivative check failed\n";
    if (!rep.k3.pass) std::cout << "  tail-decay check failed: " << rep.k3.note << '\n';
    for (const auto& c : rep.lemmas.checks)
        if (!c.pass)
            std::cout << "  consequence '" << c.name
                      << "' violated, margin=" << c.worst_margin << '\n';
    return rep.pass ? 0 : 3;
}

// ---------------------------------------------------------------------------
// solve
// ---------------------------------------------------------------------------

inline void write_field_csv(const std::string& path, const DiscreteField& u) {
    std::vector<std::string> cols;
    cols.reserve(u.x.size() + 1);
    cols.push_back("t");
    for (double xi : u.x) cols.push_back(CsvWriter::num(xi));
    CsvWriter w(path, "subdiff.field.v1", cols);
    std::vector<std::string> cells(cols.size());
    for (std::size_t n = 0; n < u.time.nodes.size(); ++n) {
        cells[0] = CsvWriter::num(u.time.nodes[n]);
        for (std::size_t i = 0; i < u.x.size(); ++i)
            cells[i + 1] = CsvWriter::num(u.at((int)n, (int)i));
        w.row(cells);
    }
}

inline int run_solve(const Config& cfg, const std::string& out) {
    const KernelSpec ks = kernel_from_config(cfg);
    const ProblemSpec ps = problem_from_config(cfg, ks);

    const std::string bench = cfg.get_string("run", "benchmark", "");
    if (!bench.empty()) {
        if (bench != "mittag_leffler")
            throw config_error("[run] benchmark: unknown benchmark '" + bench +
                               "'");
        // The closed-form comparison needs the single-order heat problem.
        if (ks.family != Family::frac_exp || ks.gamma != 0.0)
            throw invariant_error(
                "benchmark: requires family frac_exp with gamma = 0");
        const auto expect = [&](const char* sec, const char* key,
                                const char* want) {
            const std::string got = cfg.get_string(sec, key, want);
            if (got != want)
                throw invariant_error(std::string("benchmark: [") + sec + "] " +
                                      key + " must be '" + want + "', got '" +
                                      got + "'");
        };
        expect("problem", "u0", "sin_pi");
        expect("problem", "f", "zero");
        expect("problem", "bc", "dirichlet:0,0");
        expect("problem", "A", "constant_A:1");
    }
    cfg.require_all_consumed();

    const DiscreteField u = solve(ps);
    write_field_csv(out + "/field.csv", u);
    std::cout << "solve: " << ps.nt << " steps x " << ps.nx << " nodes, range ["
              << u.min_value() << ", " << u.max_value() << "]\n";
    if (bench.empty()) return 0;

    double max_err = 0.0, max_exact = 0.0;
    for (std::size_t n = 0; n < u.time.nodes.size(); ++n) {
        const double tn = u.time.nodes[n];
        const double decay =
            mittag_leffler_neg(ks.alpha, pi * pi * std::pow(tn, ks.alpha));
        for (std::size_t i = 0; i < u.x.size(); ++i) {
            const double exact = decay * std::sin(pi * u.x[i]);
            max_err = std::max(max_err, std::abs(u.at((int)n, (int)i) - exact));
            max_exact = std::max(max_exact, std::abs(exact));
        }
    }
    const double rel = max_err / std::max(max_exact, 1e-300);
    CsvWriter bw(out + "/benchmark.csv", "subdiff.benchmark.v1",
                 {"family", "alpha", "t_max", "nt", "nx", "max_error",
                  "rel_error", "status"});
    bw.row({family_name(ks.family), CsvWriter::num(ks.alpha),
            CsvWriter::num(ps.t_max), std::to_string(ps.nt), std::to_string(ps.nx),
            CsvWriter::num(max_err), CsvWriter::num(rel), "ok"});
    std::cout << "benchmark: max-norm error " << max_err << " (relative " << rel
              << ")\n";
    return 0;
}

// ---------------------------------------------------------------------------
// harnack
// ---------------------------------------------------------------------------

inline MixedNormSpec norm_from_config(const Config& cfg, double p0_conjugate) {
    MixedNormSpec norm;
    norm.q2 = cfg.get_double("norm", "q2", 4.0);
    norm.d = cfg.get_double("norm", "d", 0.25);
    const double q1_default =
        p0_conjugate / (1.0 - norm.d - 0.5 / norm.q2);
    norm.q1 = cfg.get_double("norm", "q1", q1_default);
    norm.validate(p0_conjugate);
    return norm;
}

inline int run_harnack(const Config& cfg, const std::string& out) {
    const KernelSpec ks = kernel_from_config(cfg);
    const ProblemSpec ps = problem_from_config(cfg, ks);
    const KernelPair pair(ks);

    const double p0 = cfg.get_double("harness", "p0", default_p0(pair));
    if (!(p0 > 1.0)) throw invariant_error("harness: p0 must exceed 1");
    const double pp = p0 / (p0 - 1.0);
    const MixedNormSpec norm = norm_from_config(cfg, pp);

    CylinderSpec cyl;
    cyl.t0 = cfg.get_double("harness", "t0", 0.0);
    cyl.x0 = cfg.get_double("harness", "x0", 0.5);
    cyl.r = cfg.get_double("harness", "r", 0.1);
    cyl.delta = cfg.get_double("harness", "delta", 0.5);
    cyl.tau = cfg.get_double("harness", "tau", 0.05);
    const double p = cfg.get_double("harness", "p", 1.0);
    cfg.require_all_consumed();

    const DiscreteField u = solve(ps);
    const AcceleratedKernel acc(pair, 1e-9, std::max(ps.t_max, 1.0) * 1.01);
    const PhiSolver phi([&acc](double t) { return acc.one_conv_l(t); },
                        [&acc](double t) { return acc.l(t); }, pair.r0());

    double f_norm = 0.0;
    if (ps.f) {
        Box window;
        window.t_lo = 0.0;
        window.t_hi = ps.t_max;
        window.x_lo = 0.0;
        window.x_hi = 1.0;
        f_norm = mixed_norm(ps.f, window, norm);
    }
    const HarnackReport rep = harnack_ratio(u, cyl, p, norm, f_norm, phi);

    CsvWriter w(out + "/report.csv", "subdiff.report.v1",
                {"family", "alpha", "gamma", "r", "delta", "tau", "p", "lhs",
                 "ess_inf_plus", "f_term", "C_empirical", "status"});
    w.row({family_name(ks.family), CsvWriter::num(ks.alpha),
           CsvWriter::num(ks.gamma), CsvWriter::num(cyl.r),
           CsvWriter::num(cyl.delta), CsvWriter::num(cyl.tau), CsvWriter::num(p),
           CsvWriter::num(rep.lhs), CsvWriter::num(rep.ess_inf_plus),
           CsvWriter::num(rep.f_term), CsvWriter::num(rep.C_empirical), "ok"});

    std::cout << "harnack: lhs=" << rep.lhs << " inf+=" << rep.ess_inf_plus
              << " f_term=" << rep.f_term << " C=" << rep.C_empirical << '\n';
    return 0;
}

// ---------------------------------------------------------------------------
// hoelder
// ---------------------------------------------------------------------------

inline int run_hoelder(const Config& cfg, const std::string& out) {
    const KernelSpec ks = kernel_from_config(cfg);
    const ProblemSpec ps = problem_from_config(cfg, ks);
    const KernelPair pair(ks);

    const double p0 = cfg.get_double("harness", "p0", default_p0(pair));
    if (!(p0 > 1.0)) throw invariant_error("harness: p0 must exceed 1");
    const double pp = p0 / (p0 - 1.0);

    const double t1 = cfg.get_double("harness", "t1", ps.t_max);
    const double x1 = cfg.get_double("harness", "x1", 0.5);
    const double r = cfg.get_double("harness", "r", 0.25);
    const double theta = cfg.get_double("harness", "theta", 0.5);
    const int levels = cfg.get_int("harness", "levels", 6);
    const bool richardson = cfg.get_int("harness", "richardson", 1) != 0;
    cfg.require_all_consumed();

    const DiscreteField u = solve(ps);
    const AcceleratedKernel acc(pair, 1e-9, std::max(ps.t_max, 1.0) * 1.01);
    const PhiSolver phi([&acc](double t) { return acc.one_conv_l(t); },
                        [&acc](double t) { return acc.l(t); }, pair.r0());

    // The outermost cylinder must live inside the computed field.
    const double extent = theta * phi.phi(2.0 * r);
    if (t1 - extent < -1e-12 || t1 > ps.t_max * (1.0 + 1e-12))
        throw invariant_error("harness: base cylinder leaves the time window "
                              "(t1 = " + std::to_string(t1) + ", extent = " +
                              std::to_string(extent) + ")");
    if (x1 - r < -1e-12 || x1 + r > 1.0 + 1e-12)
        throw invariant_error("harness: base cylinder leaves the spatial domain");

    double floor = 0.0;
    if (richardson && ps.nt % 2 == 0) {
        ProblemSpec coarse = ps;
        coarse.nt = ps.nt / 2;
        floor = richardson_floor(u, solve(coarse));
    }

    const HoelderReport rep =
        hoelder_decay(u, t1, x1, r, theta, levels, phi, pp, floor);

    CsvWriter w(out + "/hoelder.csv", "subdiff.hoelder.v1",
                {"level", "rho", "osc", "used"});
    for (std::size_t j = 0; j < rep.osc.size(); ++j) {
        const bool used = std::find(rep.used_levels.begin(), rep.used_levels.end(),
                                    (int)j) != rep.used_levels.end();
        w.row({std::to_string(j), CsvWriter::num(std::ldexp(1.0, -(int)j)),
               CsvWriter::num(rep.osc[j]), bool_cell(used)});
    }
    CsvWriter s(out + "/hoelder_summary.csv", "subdiff.hoelder_summary.v1",
                {"kappa_fit", "seminorm", "used_levels", "error_floor",
                 "degenerate"});
    s.row({CsvWriter::num(rep.kappa_fit), CsvWriter::num(rep.seminorm),
           std::to_string(rep.used_levels.size()), CsvWriter::num(rep.error_floor),
           bool_cell(rep.degenerate)});

    if (rep.degenerate)
        std::cout << "hoelder: constant field, decay exponent undefined\n";
    else
        std::cout << "hoelder: kappa_fit=" << rep.kappa_fit
                  << " seminorm=" << rep.seminorm << " levels used "
                  << rep.used_levels.size() << "/" << rep.osc.size() << '\n';
    return 0;
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

inline int run_sweep(const Config& cfg, const std::string& out, int threads) {
    const std::vector<std::string> families = cfg.get_string_list(
        "sweep", "families",
        {"frac_exp", "switched_frac_exp", "distributed", "switched_distributed"});
    const std::vector<double> radii =
        cfg.get_double_list("sweep", "radii", {0.05, 0.1, 0.2});
    const std::vector<double> ps = cfg.get_double_list("sweep", "p", {0.5, 1.0, 1.2});
    const int nt = cfg.get_int("sweep", "nt", 256);
    const int nx = cfg.get_int("sweep", "nx", 129);
    const double t_max = cfg.get_double("sweep", "t_max", 0.1);
    cfg.require_all_consumed();

    const auto fleet = default_fleet(families, radii, ps, nt, nx, t_max);
    const auto rows = sweep(fleet, threads);

    CsvWriter w(out + "/sweep.csv", "subdiff.sweep.v1",
                {"name", "family", "alpha", "gamma", "r", "delta", "tau", "p",
                 "lhs", "ess_inf_plus", "f_term", "C_empirical", "status"});
    for (const auto& row : rows)
        w.row({row.name, row.family, CsvWriter::num(row.alpha),
               CsvWriter::num(row.gamma), CsvWriter::num(row.r),
               CsvWriter::num(row.delta), CsvWriter::num(row.tau),
               CsvWriter::num(row.p), CsvWriter::num(row.lhs),
               CsvWriter::num(row.ess_inf_plus), CsvWriter::num(row.f_term),
               CsvWriter::num(row.C_empirical), row.status});

    // Aggregate the worst constant per (family, delta, tau, p) cell.
    std::map<std::tuple<std::string, double, double, double>, double> agg;
    for (const auto& row : rows)
        if (row.status == "ok") {
            auto key = std::make_tuple(row.family, row.delta, row.tau, row.p);
            auto it = agg.find(key);
            if (it == agg.end())
                agg.emplace(key, row.C_empirical);
            else
                it->second = std::max(it->second, row.C_empirical);
        }
    CsvWriter s(out + "/sweep_summary.csv", "subdiff.sweep_summary.v1",
                {"family", "delta", "tau", "p", "max_C"});
    for (const auto& [key, maxc] : agg)
        s.row({std::get<0>(key), CsvWriter::num(std::get<1>(key)),
               CsvWriter::num(std::get<2>(key)), CsvWriter::num(std::get<3>(key)),
               CsvWriter::num(maxc)});

    std::size_t ok = 0;
    double worst = 0.0;
    for (const auto& row : rows)
        if (row.status == "ok") {
            ++ok;
            worst = std::max(worst, row.C_empirical);
        } else {
            std::cout << "  " << row.name << ": " << row.status << '\n';
        }
    std::cout << "sweep: " << ok << "/" << rows.size()
              << " configurations ok, max C=" << worst << '\n';
    return ok == rows.size() ? 0 : 3;
}

// ---------------------------------------------------------------------------
// dispatch
// ---------------------------------------------------------------------------

inline int run(const RunnerOptions& options) {
    std::string mode = options.mode;
    if (mode == "presets") {
        std::cout << preset_listing();
        return 0;
    }
    if (options.config_path.empty())
        throw config_error("a config file is required (pass --config <path>)");
    const Config cfg = Config::parse_file(options.config_path);

    const std::string cfg_mode = cfg.get_string("run", "mode", "");
    if (mode.empty()) mode = cfg_mode;
    if (mode.empty())
        throw config_error("no mode selected: pass a subcommand or set key "
                           "'mode' in [run]");

    const int cfg_threads = cfg.get_int("run", "threads", 1);
    const int threads = options.threads > 0 ? options.threads : cfg_threads;
    const std::uint64_t cfg_seed = (std::uint64_t)cfg.get_int("run", "seed", 1);
    const std::uint64_t seed = options.have_seed ? options.seed : cfg_seed;
    const std::string out = resolve_out_dir(cfg, options.out_override);

    int code;
    if (mode == "certify")
        code = run_certify(cfg, out, seed);
    else if (mode == "solve")
        code = run_solve(cfg, out);
    else if (mode == "harnack")
        code = run_harnack(cfg, out);
    else if (mode == "hoelder")
        code = run_hoelder(cfg, out);
    else if (mode == "sweep")
        code = run_sweep(cfg, out, threads);
    else
        throw config_error("unknown mode '" + mode +
                           "' (try certify, solve, harnack, hoelder, sweep, "
                           "presets)");
    cfg.require_all_consumed();
    return code;
}

} // namespace subdiff
