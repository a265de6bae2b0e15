#pragma once

#include <cmath>
#include <vector>

#include "subdiff/common.hpp"

namespace subdiff {

struct MeasureAtom {
    double alpha = 0.5;  // order in (0,1)
    double weight = 1.0; // mass q >= 0
};

// Finite nonnegative measure on the order interval (0,1): a list of atoms
// plus an optional piecewise-constant density on a uniform partition of
// [support_lo, support_hi].  The density is consumed through midpoint
// quadrature, i.e. internally it becomes one atom per cell; using the same
// discretization on both members of a kernel pair keeps their defining
// convolution identity exact for the discretized measure.
struct Measure {
    std::vector<MeasureAtom> atoms;
    std::vector<double> density; // cell values of the weight w(alpha); may be empty
    double support_lo = 0.0;     // density support within (0,1)
    double support_hi = 1.0;

    static Measure dirac(double alpha, double weight = 1.0) {
        Measure m;
        m.atoms.push_back({alpha, weight});
        return m;
    }

    static Measure uniform_density(double weight, int cells,
                                   double lo = 0.0, double hi = 1.0) {
        Measure m;
        m.density.assign(cells, weight);
        m.support_lo = lo;
        m.support_hi = hi;
        return m;
    }

    void validate() const {
        bool any_mass = false;
        for (const auto& a : atoms) {
            if (!(a.alpha > 0.0) || !(a.alpha < 1.0))
                throw invariant_error("measure: atom order must lie in (0,1)");
            if (!(a.weight >= 0.0) || !std::isfinite(a.weight))
                throw invariant_error("measure: atom weight must be >= 0");
            any_mass |= a.weight > 0;
        }
        if (!density.empty()) {
            if (!(support_lo >= 0.0) || !(support_hi <= 1.0) ||
                !(support_hi > support_lo))
                throw invariant_error("measure: density support must be within [0,1]");
            for (double w : density) {
                if (!(w >= 0.0) || !std::isfinite(w))
                    throw invariant_error("measure: density values must be >= 0");
                any_mass |= w > 0;
            }
        }
        if (!any_mass)
            throw invariant_error("measure: total mass must be positive");
    }

    // Atoms plus midpoint-sampled density cells.
    std::vector<MeasureAtom> effective_atoms() const {
        std::vector<MeasureAtom> out = atoms;
        if (!density.empty()) {
            const double h = (support_hi - support_lo) / density.size();
            for (size_t i = 0; i < density.size(); ++i) {
                if (density[i] == 0.0) continue;
                const double mid = support_lo + (i + 0.5) * h;
                out.push_back({mid, density[i] * h});
            }
        }
        return out;
    }

    double total_mass() const {
        double s = 0;
        for (const auto& a : effective_atoms()) s += a.weight;
        return s;
    }

    double alpha_min() const {
        double m = 1.0;
        for (const auto& a : effective_atoms())
            if (a.weight > 0) m = std::min(m, a.alpha);
        return m;
    }

    double alpha_max() const {
        double m = 0.0;
        for (const auto& a : effective_atoms())
            if (a.weight > 0) m = std::max(m, a.alpha);
        return m;
    }
};

} // namespace subdiff
