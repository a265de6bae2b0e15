#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "subdiff/certify.hpp"
#include "subdiff/config.hpp"
#include "subdiff/harnack.hpp"
#include "subdiff/kernels.hpp"
#include "subdiff/pde.hpp"

// Named building blocks reachable from configuration files: kernel families,
// diffusion coefficients, initial data, forcings, boundary data, and the
// standard sweep fleet.  Preset values use the form  name  or  name:a,b,c.

namespace subdiff {

struct Preset {
    std::string name;
    std::vector<double> args;
};

inline Preset parse_preset(const std::string& text, const std::string& what) {
    Preset p;
    const auto colon = text.find(':');
    p.name = Config::trim(text.substr(0, colon));
    if (p.name.empty())
        throw config_error(what + ": empty preset name in '" + text + "'");
    if (colon != std::string::npos) {
        for (const auto& piece : Config::split(text.substr(colon + 1), ',')) {
            char* end = nullptr;
            const double v = std::strtod(piece.c_str(), &end);
            if (end == piece.c_str() || *end != '\0')
                throw config_error(what + ": cannot parse argument '" + piece +
                                   "' of preset '" + text + "'");
            p.args.push_back(v);
        }
    }
    return p;
}

inline void require_args(const Preset& p, std::size_t lo, std::size_t hi,
                         const std::string& what, const std::string& usage) {
    if (p.args.size() < lo || p.args.size() > hi)
        throw config_error(what + ": preset '" + p.name + "' expects " + usage);
}

// ---------------------------------------------------------------------------
// kernel
// ---------------------------------------------------------------------------

inline Family family_from_name(const std::string& name, const std::string& what) {
    if (name == "frac_exp") return Family::frac_exp;
    if (name == "distributed") return Family::distributed;
    if (name == "switched_frac_exp") return Family::switched_frac_exp;
    if (name == "switched_distributed") return Family::switched_distributed;
    throw config_error(what + ": unknown kernel family '" + name +
                       "' (try frac_exp, distributed, switched_frac_exp, "
                       "switched_distributed)");
}

// [kernel]  family, alpha, gamma, atoms = a:w,a:w, weight/weight_cells/
// weight_lo/weight_hi for the continuous part of the order measure.
inline KernelSpec kernel_from_config(const Config& cfg,
                                     const std::string& section = "kernel") {
    KernelSpec spec;
    spec.family =
        family_from_name(cfg.require_string(section, "family"), "[" + section + "] family");
    spec.alpha = cfg.get_double(section, "alpha", 0.5);
    spec.gamma = cfg.get_double(section, "gamma", 0.0);

    if (cfg.has(section, "atoms")) {
        for (const auto& piece :
             Config::split(cfg.require_string(section, "atoms"), ',')) {
            const auto colon = piece.find(':');
            if (colon == std::string::npos)
                throw config_error("[" + section + "] atoms: expected "
                                   "alpha:weight pairs, got '" + piece + "'");
            MeasureAtom atom;
            atom.alpha = std::stod(piece.substr(0, colon));
            atom.weight = std::stod(piece.substr(colon + 1));
            spec.measure.atoms.push_back(atom);
        }
    }
    const double w = cfg.get_double(section, "weight", 0.0);
    if (w > 0.0) {
        const int cells = cfg.get_int(section, "weight_cells", 16);
        const double lo = cfg.get_double(section, "weight_lo", 0.0);
        const double hi = cfg.get_double(section, "weight_hi", 1.0);
        const Measure dens = Measure::uniform_density(w, cells, lo, hi);
        spec.measure.density = dens.density;
        spec.measure.support_lo = dens.support_lo;
        spec.measure.support_hi = dens.support_hi;
    }
    try {
        spec.validate();
    } catch (const std::exception& e) {
        throw config_error("[" + section + "]: " + e.what());
    }
    return spec;
}

// ---------------------------------------------------------------------------
// coefficients and data
// ---------------------------------------------------------------------------

struct CoefficientPreset {
    std::function<double(double, double)> A;
    double nu = 1.0, Lambda = 1.0;
};

// constant_A:<value> | checkerboard_A:<nu>,<Lambda>,<period>
inline CoefficientPreset coefficient_from_preset(const std::string& text,
                                                 const std::string& what) {
    const Preset p = parse_preset(text, what);
    CoefficientPreset out;
    if (p.name == "constant" || p.name == "constant_A") {
        require_args(p, 0, 1, what, "at most one argument: value");
        const double v = p.args.empty() ? 1.0 : p.args[0];
        if (!(v > 0)) throw config_error(what + ": coefficient must be positive");
        out.A = [v](double, double) { return v; };
        out.nu = out.Lambda = v;
        return out;
    }
    if (p.name == "checkerboard" || p.name == "checkerboard_A") {
        require_args(p, 3, 3, what, "three arguments: nu, Lambda, period");
        const double nu = p.args[0], La = p.args[1], period = p.args[2];
        if (!(nu > 0) || !(La >= nu) || !(period > 0))
            throw config_error(what + ": need 0 < nu <= Lambda and period > 0");
        out.A = [nu, La, period](double, double x) {
            const long cell = (long)std::floor(x / period);
            return (cell % 2 == 0) ? nu : La;
        };
        out.nu = nu;
        out.Lambda = La;
        return out;
    }
    throw config_error(what + ": unknown coefficient preset '" + p.name +
                       "' (try constant_A, checkerboard_A)");
}

// constant:<c> | sin_pi | one_plus_sin_pi | bump | affine
inline std::function<double(double)> initial_from_preset(const std::string& text,
                                                         const std::string& what) {
    const Preset p = parse_preset(text, what);
    if (p.name == "constant") {
        require_args(p, 1, 1, what, "one argument: value");
        const double c = p.args[0];
        return [c](double) { return c; };
    }
    if (p.name == "sin_pi") return [](double x) { return std::sin(pi * x); };
    if (p.name == "one_plus_sin_pi")
        return [](double x) { return 1.0 + std::sin(pi * x); };
    if (p.name == "bump")
        return [](double x) { return std::exp(-sqr((x - 0.5) / 0.15)); };
    if (p.name == "affine") return [](double x) { return x; };
    throw config_error(what + ": unknown initial-data preset '" + p.name +
                       "' (try constant, sin_pi, one_plus_sin_pi, bump, affine)");
}

// zero | constant:<c> | well:<depth>
inline std::function<double(double, double)>
forcing_from_preset(const std::string& text, const std::string& what) {
    const Preset p = parse_preset(text, what);
    if (p.name == "zero") return nullptr;
    if (p.name == "constant") {
        require_args(p, 1, 1, what, "one argument: value");
        const double c = p.args[0];
        return [c](double, double) { return c; };
    }
    if (p.name == "well") {
        require_args(p, 1, 1, what, "one argument: depth");
        const double depth = p.args[0];
        if (!(depth >= 0)) throw config_error(what + ": well depth must be >= 0");
        return [depth](double, double x) {
            return -depth * std::exp(-sqr((x - 0.5) / 0.1));
        };
    }
    throw config_error(what + ": unknown forcing preset '" + p.name +
                       "' (try zero, constant, well)");
}

// dirichlet:<gl>,<gr> | neumann
inline BoundaryCondition boundary_from_preset(const std::string& text,
                                              const std::string& what) {
    const Preset p = parse_preset(text, what);
    if (p.name == "dirichlet") {
        require_args(p, 2, 2, what, "two arguments: gl, gr");
        return BoundaryCondition::dirichlet(p.args[0], p.args[1]);
    }
    if (p.name == "neumann") {
        require_args(p, 0, 0, what, "no arguments");
        return BoundaryCondition::neumann();
    }
    throw config_error(what + ": unknown boundary preset '" + p.name +
                       "' (try dirichlet, neumann)");
}

// [mesh]  t_max, nt, nx, grading   [problem]  A, u0, f, bc, nu, Lambda
inline ProblemSpec problem_from_config(const Config& cfg, const KernelSpec& kernel,
                                       const std::string& mesh_section = "mesh",
                                       const std::string& section = "problem") {
    ProblemSpec spec;
    spec.kernel = kernel;
    spec.t_max = cfg.get_double(mesh_section, "t_max", 0.1);
    spec.nt = cfg.get_int(mesh_section, "nt", 256);
    spec.nx = cfg.get_int(mesh_section, "nx", 129);
    spec.grading = cfg.get_double(mesh_section, "grading", 0.0);

    const auto coeff = coefficient_from_preset(
        cfg.get_string(section, "A", "constant_A:1"), "[" + section + "] A");
    spec.A = coeff.A;
    spec.nu = cfg.get_double(section, "nu", coeff.nu);
    spec.Lambda = cfg.get_double(section, "Lambda", coeff.Lambda);

    spec.u0 = initial_from_preset(cfg.get_string(section, "u0", "sin_pi"),
                                  "[" + section + "] u0");
    spec.f = forcing_from_preset(cfg.get_string(section, "f", "zero"),
                                 "[" + section + "] f");
    spec.bc = boundary_from_preset(cfg.get_string(section, "bc", "dirichlet:0,0"),
                                   "[" + section + "] bc");
    try {
        spec.validate();
    } catch (const std::exception& e) {
        throw config_error("[" + section + "]: " + e.what());
    }
    return spec;
}

// ---------------------------------------------------------------------------
// sweep fleet
// ---------------------------------------------------------------------------

// The standard nonnegative-solution fleet: for every requested family, one
// homogeneous run with positive data, one forced run with a nonpositive
// well under a rough checkerboard coefficient, and one run driven by raised
// boundary data; radii and mean exponents cycle through their lists.
inline std::vector<SweepConfig>
default_fleet(const std::vector<std::string>& families,
              const std::vector<double>& radii, const std::vector<double>& ps,
              int nt, int nx, double t_max) {
    if (families.empty() || radii.empty() || ps.empty())
        throw config_error("sweep: families, radii, and p lists must be nonempty");

    std::vector<SweepConfig> fleet;
    const char* kinds[3] = {"smooth_positive", "forced_well", "raised_boundary"};
    std::size_t cycle = 0;
    for (const auto& fam : families) {
        KernelSpec kernel;
        kernel.family = family_from_name(fam, "sweep families");
        if (kernel.family == Family::distributed ||
            kernel.family == Family::switched_distributed) {
            kernel.measure.atoms = {{0.3, 0.5}, {0.7, 0.5}};
        } else {
            kernel.alpha = 0.5;
            kernel.gamma = kernel.family == Family::switched_frac_exp ? 1.0 : 0.0;
        }

        for (int kind = 0; kind < 3; ++kind, ++cycle) {
            SweepConfig cfg;
            cfg.name = fam + "/" + kinds[kind];
            cfg.problem.kernel = kernel;
            cfg.problem.t_max = t_max;
            cfg.problem.nt = nt;
            cfg.problem.nx = nx;
            switch (kind) {
            case 0:
                cfg.problem.u0 = initial_from_preset("one_plus_sin_pi", cfg.name);
                cfg.problem.bc = BoundaryCondition::dirichlet(1.0, 1.0);
                break;
            case 1: {
                const auto coeff =
                    coefficient_from_preset("checkerboard_A:0.1,1.0,0.25", cfg.name);
                cfg.problem.A = coeff.A;
                cfg.problem.nu = coeff.nu;
                cfg.problem.Lambda = coeff.Lambda;
                cfg.problem.u0 = initial_from_preset("one_plus_sin_pi", cfg.name);
                cfg.problem.f = forcing_from_preset("well:0.5", cfg.name);
                cfg.problem.bc = BoundaryCondition::dirichlet(1.0, 1.0);
                cfg.forced = true;
                break;
            }
            default:
                cfg.problem.u0 = initial_from_preset("bump", cfg.name);
                cfg.problem.bc = BoundaryCondition::dirichlet(0.2, 0.2);
                break;
            }

            cfg.cyl.t0 = 0.0;
            cfg.cyl.x0 = 0.5;
            cfg.cyl.r = radii[cycle % radii.size()];
            cfg.cyl.delta = 0.5;
            cfg.cyl.tau = 0.5;
            cfg.p = ps[cycle % ps.size()];

            const KernelPair pair(kernel);
            const double pp = default_p0(pair) / (default_p0(pair) - 1.0);
            cfg.norm.q2 = 4.0;
            cfg.norm.d = 0.25;
            cfg.norm.q1 = pp / (1.0 - cfg.norm.d - 1.0 / (2.0 * cfg.norm.q2));
            cfg.norm.validate(pp);
            fleet.push_back(std::move(cfg));
        }
    }
    return fleet;
}

// Text shown by the preset listing mode.
inline std::string preset_listing() {
    return "kernel families:\n"
           "  frac_exp(alpha, gamma)\n"
           "  switched_frac_exp(alpha, gamma)\n"
           "  distributed(atoms, weight)\n"
           "  switched_distributed(atoms, weight)\n"
           "coefficients (key A):\n"
           "  constant_A(value)\n"
           "  checkerboard_A(nu, Lambda, period)\n"
           "initial data (key u0):\n"
           "  constant(value) | sin_pi | one_plus_sin_pi | bump | affine\n"
           "forcing (key f):\n"
           "  zero | constant(value) | well(depth)\n"
           "boundary (key bc):\n"
           "  dirichlet(gl, gr) | neumann\n"
           "sweep fleet kinds:\n"
           "  smooth_positive | forced_well | raised_boundary\n";
}

} // namespace subdiff
