#pragma once

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <memory>
#include <optional>
#include <string>

#include "subdiff/common.hpp"
#include "subdiff/interpolation.hpp"
#include "subdiff/measure.hpp"
#include "subdiff/quadrature.hpp"

namespace subdiff {

// The four built-in kernel pair families.  Each pairs a nonincreasing,
// locally integrable k with the l that satisfies (k*l)(t) = 1 for t > 0.
enum class Family {
    frac_exp,             // k(t) = t^{-a} e^{-g t} / Gamma(1-a)
    distributed,          // k(t) = integral of t^{-a}/Gamma(1-a) over a measure
    switched_frac_exp,    // frac_exp with the roles of k and l exchanged
    switched_distributed, // distributed with the roles exchanged
};

inline const char* family_name(Family f) {
    switch (f) {
    case Family::frac_exp: return "frac_exp";
    case Family::distributed: return "distributed";
    case Family::switched_frac_exp: return "switched_frac_exp";
    default: return "switched_distributed";
    }
}

struct KernelSpec {
    Family family = Family::frac_exp;
    double alpha = 0.5; // order, single-order families
    double gamma = 0.0; // exponential tempering rate, single-order families
    Measure measure;    // distributed families

    bool is_distributed() const {
        return family == Family::distributed ||
               family == Family::switched_distributed;
    }

    void validate() const {
        if (is_distributed()) {
            measure.validate();
        } else {
            if (!(alpha > 0.0) || !(alpha < 1.0))
                throw invariant_error("kernel: alpha must lie in (0,1)");
            if (!(gamma >= 0.0) || !std::isfinite(gamma))
                throw invariant_error("kernel: gamma must be >= 0");
        }
    }

    // representative order for reporting: atoms' max for distributed families
    double report_alpha() const {
        return is_distributed() ? measure.alpha_max() : alpha;
    }
};

namespace detail {

inline double tgamma_(double x) { return boost::math::tgamma(x); }
// regularized lower incomplete gamma P(a, x)
inline double gamma_p_(double a, double x) { return boost::math::gamma_p(a, x); }

// One-sided members of the single-order tempered pair.
//   base(t)      = t^{a-1} e^{-gt} / Gamma(a)            (the "l" of frac_exp, g=0 part)
//   base_cum(t)  = integral of base                       via P(a, gt)
//   comp(t)      = base(t) + g * base_cum(t)              (the full "l" of frac_exp)
//   comp_cum(t)  = integral of comp
struct Tempered {
    double a, g;
    double base(double t) const {
        return std::exp(-g * t) * std::pow(t, a - 1.0) / tgamma_(a);
    }
    double base_cum(double t) const {
        if (g == 0.0) return std::pow(t, a) / tgamma_(a + 1.0);
        return std::pow(g, -a) * gamma_p_(a, g * t);
    }
    double comp(double t) const {
        return base(t) + g * base_cum(t);
    }
    double comp_cum(double t) const {
        if (g == 0.0) return std::pow(t, a) / tgamma_(a + 1.0);
        // integral of base + g * (t*base_cum(t) - first moment of base)
        const double first_moment =
            a * std::pow(g, -a - 1.0) * gamma_p_(a + 1.0, g * t);
        return (1.0 + g * t) * base_cum(t) - g * first_moment;
    }
    // d/dt comp(t) = (a-1) t^{a-2} e^{-gt} / Gamma(a)  (tempering terms cancel)
    double comp_dot(double t) const {
        return (a - 1.0) * std::pow(t, a - 2.0) * std::exp(-g * t) / tgamma_(a);
    }
    double base_dot(double t) const {
        return -base(t) * ((1.0 - a) / t + g);
    }
};

} // namespace detail

// Evaluations of one kernel pair (k, l) with the derived quantities the
// estimates need: running integrals, derivatives, k1 = 1/(1*l), r0.
// Distributed families route one side through the spectral representation
//   l(t) = (1/pi) Int_0^inf e^{-pt} H(p) dp,
//   H(p) = S(p) / (S(p)^2 + C(p)^2),
//   S(p) = Int p^a sin(pi a) dmu,  C(p) = Int p^a cos(pi a) dmu.
class KernelPair {
  public:
    explicit KernelPair(KernelSpec spec) : spec_(std::move(spec)) {
        spec_.validate();
        if (spec_.is_distributed()) atoms_ = spec_.measure.effective_atoms();
    }

    const KernelSpec& spec() const { return spec_; }

    double k(double t) const {
        require_positive(t);
        switch (spec_.family) {
        case Family::frac_exp: return detail::Tempered{1 - a(), g()}.base(t);
        case Family::switched_frac_exp: return detail::Tempered{a(), g()}.comp(t);
        case Family::distributed: return atom_sum_power(t);
        default: return laplace_point(t);
        }
    }

    double l(double t) const {
        require_positive(t);
        switch (spec_.family) {
        case Family::frac_exp: return detail::Tempered{a(), g()}.comp(t);
        case Family::switched_frac_exp: return detail::Tempered{1 - a(), g()}.base(t);
        case Family::distributed: return laplace_point(t);
        default: return atom_sum_power(t);
        }
    }

    // (1*k)(t) = Integral_0^t k
    double one_conv_k(double t) const {
        if (t == 0.0) return 0.0;
        require_positive(t);
        switch (spec_.family) {
        case Family::frac_exp: return detail::Tempered{1 - a(), g()}.base_cum(t);
        case Family::switched_frac_exp: return detail::Tempered{a(), g()}.comp_cum(t);
        case Family::distributed: return atom_sum_power_cum(t);
        default: return laplace_cumulative(t);
        }
    }

    // (1*l)(t) = Integral_0^t l
    double one_conv_l(double t) const {
        if (t == 0.0) return 0.0;
        require_positive(t);
        switch (spec_.family) {
        case Family::frac_exp: return detail::Tempered{a(), g()}.comp_cum(t);
        case Family::switched_frac_exp: return detail::Tempered{1 - a(), g()}.base_cum(t);
        case Family::distributed: return laplace_cumulative(t);
        default: return atom_sum_power_cum(t);
        }
    }

    // k1(t) = 1/(1*l)(t): the nonincreasing majorant of k.
    double k1(double t) const { return 1.0 / one_conv_l(t); }

    double kdot(double t) const {
        require_positive(t);
        switch (spec_.family) {
        case Family::frac_exp: return detail::Tempered{1 - a(), g()}.base_dot(t);
        case Family::switched_frac_exp: return detail::Tempered{a(), g()}.comp_dot(t);
        case Family::distributed: return atom_sum_power_dot(t);
        default: return -laplace_derivative(t);
        }
    }

    double ldot(double t) const {
        require_positive(t);
        switch (spec_.family) {
        case Family::frac_exp: return detail::Tempered{a(), g()}.comp_dot(t);
        case Family::switched_frac_exp: return detail::Tempered{1 - a(), g()}.base_dot(t);
        case Family::distributed: return -laplace_derivative(t);
        default: return atom_sum_power_dot(t);
        }
    }

    // r0 = (Integral_0^inf l)^{1/2}; +inf when l is not integrable.  Only the
    // exchanged tempered pair (g > 0) has an integrable l among the built-ins.
    double r0() const {
        if (spec_.family == Family::switched_frac_exp && g() > 0.0)
            return std::sqrt(std::pow(g(), a() - 1.0));
        return inf;
    }

    // power of the l-singularity at t -> 0+:  l(t) ~ t^{-sigma}
    double l_singularity_exponent() const {
        switch (spec_.family) {
        case Family::frac_exp: return 1.0 - a();
        case Family::switched_frac_exp: return a();
        case Family::distributed: return 1.0 - spec_.measure.alpha_max();
        default: return spec_.measure.alpha_max();
        }
    }

    // Spectral function H(p) of the Laplace-represented side.  The moment
    // sums are normalized by their larger magnitude before squaring so H
    // stays representable for extreme p.
    double spectral(double p) const {
        double s = 0, c = 0;
        for (const auto& at : atoms_) {
            const double pa = at.weight * std::pow(p, at.alpha);
            s += pa * std::sin(pi * at.alpha);
            c += pa * std::cos(pi * at.alpha);
        }
        const double m = std::max(std::abs(s), std::abs(c));
        if (m == 0.0 || !std::isfinite(m)) return 0.0;
        s /= m;
        c /= m;
        return (s / (s * s + c * c)) / m;
    }

  private:
    double a() const { return spec_.alpha; }
    double g() const { return spec_.gamma; }

    static void require_positive(double t) {
        if (!(t > 0.0))
            throw std::invalid_argument("kernel evaluation requires t > 0");
    }

    double atom_sum_power(double t) const {
        double s = 0;
        for (const auto& at : atoms_)
            s += at.weight * std::pow(t, -at.alpha) / detail::tgamma_(1 - at.alpha);
        return s;
    }
    double atom_sum_power_cum(double t) const {
        double s = 0;
        for (const auto& at : atoms_)
            s += at.weight * std::pow(t, 1 - at.alpha) / detail::tgamma_(2 - at.alpha);
        return s;
    }
    double atom_sum_power_dot(double t) const {
        double s = 0;
        for (const auto& at : atoms_)
            s -= at.weight * at.alpha * std::pow(t, -at.alpha - 1.0) /
                 detail::tgamma_(1 - at.alpha);
        return s;
    }

    double laplace_point(double t) const {
        return laplace_integral([this](double p) { return spectral(p); }, t,
                                LaplaceWeight::point);
    }
    double laplace_cumulative(double t) const {
        return laplace_integral([this](double p) { return spectral(p); }, t,
                                LaplaceWeight::cumulative);
    }
    double laplace_derivative(double t) const {
        return laplace_integral([this](double p) { return spectral(p); }, t,
                                LaplaceWeight::derivative);
    }

    KernelSpec spec_;
    std::vector<MeasureAtom> atoms_;
};

// Table-accelerated view of a pair for O(n^2) inner loops.  Only the sides
// that are Laplace integrals get tabulated; closed-form sides pass through.
// Tables are immutable after construction, hence safe to share across threads.
class AcceleratedKernel {
  public:
    AcceleratedKernel(const KernelPair& pair, double t_lo, double t_hi)
        : pair_(&pair) {
        const bool k_slow = pair.spec().family == Family::switched_distributed;
        const bool l_slow = pair.spec().family == Family::distributed;
        if (k_slow) {
            k_tab_.emplace([&](double t) { return pair.k(t); }, t_lo, t_hi);
            kcum_tab_.emplace([&](double t) { return pair.one_conv_k(t); }, t_lo, t_hi);
        }
        if (l_slow) {
            l_tab_.emplace([&](double t) { return pair.l(t); }, t_lo, t_hi);
            lcum_tab_.emplace([&](double t) { return pair.one_conv_l(t); }, t_lo, t_hi);
        }
    }

    const KernelPair& pair() const { return *pair_; }

    double k(double t) const { return k_tab_ ? (*k_tab_)(t) : pair_->k(t); }
    double l(double t) const { return l_tab_ ? (*l_tab_)(t) : pair_->l(t); }
    double one_conv_k(double t) const {
        if (t == 0.0) return 0.0;
        return kcum_tab_ ? (*kcum_tab_)(t) : pair_->one_conv_k(t);
    }
    double one_conv_l(double t) const {
        if (t == 0.0) return 0.0;
        return lcum_tab_ ? (*lcum_tab_)(t) : pair_->one_conv_l(t);
    }

  private:
    const KernelPair* pair_;
    std::optional<LogLogTable> k_tab_, l_tab_, kcum_tab_, lcum_tab_;
};

} // namespace subdiff
