#ifndef DECOH_REGIMES_HPP
#define DECOH_REGIMES_HPP

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "correlator.hpp"
#include "decoherence.hpp"
#include "errors.hpp"

namespace decoh {

// Time for the coupling to displace record branches by the initial pointer
// spread: t_ent = delta_eff / (eps * delta_s).
inline double entanglement_time(double delta_eff, double eps, double delta_s) {
    if (!(delta_eff > 0.0))
        throw DomainError("entanglement time undefined: delta_eff must be > 0");
    if (!(eps > 0.0))
        throw DomainError("entanglement time undefined: eps must be > 0");
    if (!(delta_s > 0.0))
        throw DomainError("entanglement time undefined: degenerate record "
                          "eigenvalues (delta_s = 0)");
    return delta_eff / (eps * delta_s);
}

// Time for adjacent branches to separate by the barrier distance, after which
// the coupling may be switched off: t_int = w_eff / (eps * delta_s).
// t_int / t_ent = w_eff / delta_eff regardless of the coupling.
inline double interaction_time(double w_eff, double eps, double delta_s) {
    if (!(w_eff > 0.0))
        throw DomainError("interaction time undefined: w_eff must be > 0");
    if (!(eps > 0.0))
        throw DomainError("interaction time undefined: eps must be > 0");
    if (!(delta_s > 0.0))
        throw DomainError("interaction time undefined: degenerate record "
                          "eigenvalues (delta_s = 0)");
    return w_eff / (eps * delta_s);
}

// Dimensionless pointer-bath coupling strength eta = <B^2>^{1/2} delta_eff beta
// (reduced units: just delta_eff) plus the bath it refers to.
struct RegimeInputs {
    double eta = 1.0;
    const BathCorrelator* corr = nullptr;
};

inline RegimeInputs make_regime_inputs(double eta, const BathCorrelator& corr) {
    if (!(eta > 0.0)) throw ConfigError("regime inputs: eta must be > 0");
    return {eta, &corr};
}

// Inversion of D(t_dec) = 1: the entanglement time producing a given
// decoherence time is t_ent = eta sqrt(K(t_dec)) (equivalently eta/eps_ds).
inline double tent_from_tdec(const RegimeInputs& in, double tdec) {
    if (!in.corr) throw ConfigError("regime inputs: missing correlator");
    return in.eta * std::sqrt(kernel_K(*in.corr, tdec).value);
}

inline double tent_from_tdec(const BathCorrelator& corr, double eta, double tdec) {
    return eta * std::sqrt(kernel_K(corr, tdec).value);
}

/* Memory-dominated (slow bath) closed form: while the correlator still sits at
 * its t=0 value, K = t^4/8, so t_dec = 2^{3/4} (t_ent/eta)^{1/2}; decoherence
 * factor e^{-(t/t_dec)^4}. Valid for t_dec well below the bath memory time. */
struct SlowAsymptote {
    double tdec = 0.0;
    int exponent = 4; // decoherence factor e^{-(t/t_dec)^exponent}
    bool valid = false;
};

inline SlowAsymptote asymptotic_tdec_slow(double eta, double t_ent) {
    if (!(eta > 0.0) || !(t_ent > 0.0))
        throw ConfigError("slow asymptote needs eta > 0 and t_ent > 0");
    SlowAsymptote sa;
    sa.tdec = std::pow(2.0, 0.75) * std::sqrt(t_ent / eta);
    sa.valid = sa.tdec < 0.3; // same convention as classify_regime
    return sa;
}

struct MarkovAsymptote {
    double c = 0.0;     // t_dec = (c (t_ent/eta)^2)^{1/gamma}
    double gamma = 0.0; // 3 when the zero-frequency weight survives, else 2
};

/* Long-time growth of the kernel: K ~ (i0/3) t^3 when i0 = int Re h > 0
 * (Ohmic family, m = 1), else K ~ (|i1|/2) t^2 from i1 = int u Re h < 0
 * (super-Ohmic, m >= 3). Gives t_dec = (c x^2)^{1/gamma}, x = t_ent/eta,
 * with c_1 = 3/i0, c_{m>=3} = 2/|i1| -- independent of the coupling. */
inline MarkovAsymptote markov_coefficient(const BathCorrelator& corr) {
    const SpectralModel* sm = corr.model();
    if (!sm)
        throw ConfigError("markov asymptote requires a spectral-density bath");
    if (!corr.tails_converged())
        throw ConvergenceError("markov asymptote needs converged correlator "
                               "tails; increase tau_max");
    MarkovAsymptote ma;
    if (sm->m == 1) {
        const double i0 = corr.i0();
        if (!(i0 > 1e-10))
            throw DomainError("markov asymptote: zero-frequency weight i0 "
                              "vanished unexpectedly");
        ma.gamma = 3.0;
        ma.c = 3.0 / i0;
    } else {
        const double i1 = corr.i1();
        if (!(std::abs(i1) > 1e-10))
            throw DomainError("markov asymptote: first correlator moment "
                              "vanished unexpectedly");
        if (!(i1 < 0.0))
            throw DomainError("markov asymptote: expected negative first "
                              "moment for a super-Ohmic bath");
        ma.gamma = 2.0;
        ma.c = 2.0 / std::abs(i1);
    }
    return ma;
}

struct MarkovAsymptoteResult {
    double tdec = 0.0;
    double gamma = 0.0;
    double c_m = 0.0;
    bool valid = false;
};

inline MarkovAsymptoteResult asymptotic_tdec_markov(const RegimeInputs& in,
                                                    double t_ent) {
    if (!in.corr) throw ConfigError("regime inputs: missing correlator");
    if (!(t_ent > 0.0)) throw ConfigError("markov asymptote needs t_ent > 0");
    const MarkovAsymptote ma = markov_coefficient(*in.corr);
    MarkovAsymptoteResult r;
    r.gamma = ma.gamma;
    r.c_m = ma.c;
    const double x = t_ent / in.eta;
    r.tdec = std::pow(ma.c * x * x, 1.0 / ma.gamma);
    r.valid = r.tdec > 3.0;
    return r;
}

enum class Regime { InteractionDominated, Crossover, Markovian };

// Thresholds in units of the bath memory time (= 1 in reduced units).
inline Regime classify_regime(double tdec) {
    if (!(tdec > 0.0)) throw ConfigError("classify_regime: tdec must be > 0");
    if (tdec < 0.3) return Regime::InteractionDominated;
    if (tdec > 3.0) return Regime::Markovian;
    return Regime::Crossover;
}

inline std::string to_string(Regime r) {
    switch (r) {
        case Regime::InteractionDominated: return "interaction_dominated";
        case Regime::Crossover: return "crossover";
        case Regime::Markovian: return "markovian";
    }
    return "unknown";
}

inline std::vector<double> log_grid(double lo, double hi, std::size_t n) {
    if (!(lo > 0.0) || !(hi > lo)) throw ConfigError("log grid needs 0 < lo < hi");
    if (n < 2) throw ConfigError("log grid needs at least 2 points");
    std::vector<double> g(n);
    const double llo = std::log(lo), lhi = std::log(hi);
    for (std::size_t i = 0; i < n; ++i)
        g[i] = std::exp(llo + (lhi - llo) * double(i) / double(n - 1));
    g.front() = lo;
    g.back() = hi;
    return g;
}

struct Figure1Row {
    double tent_over_eta = 0.0; // x = sqrt(K(t_dec)) = 1/eps_ds
    double tdec_numeric = 0.0;
    double tdec_slow = 0.0;
    double tdec_markov = 0.0;
};

struct Figure1Curve {
    std::vector<Figure1Row> rows; // sorted by tent_over_eta
    int m = 0;
    double cutoff = 0.0;
    double c_m = 0.0;
    double gamma = 0.0;
};

/* Decoherence-time curve traced parametrically: each target t_dec on the grid
 * yields the reduced entanglement time x = sqrt(K(t_dec)) that produces it,
 * plus both asymptotes evaluated at that x. */
inline Figure1Curve figure1_curve(const BathCorrelator& corr,
                                  const std::vector<double>& tdec_grid) {
    const SpectralModel* sm = corr.model();
    if (!sm)
        throw ConfigError("figure1 curve requires a spectral-density bath");
    const MarkovAsymptote ma = markov_coefficient(corr);
    Figure1Curve fc;
    fc.m = sm->m;
    fc.cutoff = sm->cutoff;
    fc.c_m = ma.c;
    fc.gamma = ma.gamma;
    fc.rows.reserve(tdec_grid.size());
    for (double td : tdec_grid) {
        if (!(td > 0.0)) throw ConfigError("figure1: tdec grid must be positive");
        Figure1Row row;
        row.tdec_numeric = td;
        const double k = kernel_K(corr, td).value;
        if (!(k > 0.0))
            throw ConvergenceError("figure1: kernel not positive at tdec=" +
                                   std::to_string(td));
        row.tent_over_eta = std::sqrt(k);
        row.tdec_slow = asymptotic_tdec_slow(1.0, row.tent_over_eta).tdec;
        row.tdec_markov =
            std::pow(ma.c * row.tent_over_eta * row.tent_over_eta, 1.0 / ma.gamma);
        fc.rows.push_back(row);
    }
    std::sort(fc.rows.begin(), fc.rows.end(),
              [](const Figure1Row& a, const Figure1Row& b) {
                  return a.tent_over_eta < b.tent_over_eta;
              });
    return fc;
}

// Convenience overload building the correlator for the grid span.
inline Figure1Curve figure1_curve(const SpectralModel& sm,
                                  const std::vector<double>& tdec_grid) {
    double hi = 0.0;
    for (double td : tdec_grid) hi = std::max(hi, td);
    if (!(hi > 0.0)) throw ConfigError("figure1: empty or non-positive grid");
    const BathCorrelator corr =
        BathCorrelator::from_spectral(sm, 1.02 * hi + 1.0);
    return figure1_curve(corr, tdec_grid);
}

} // namespace decoh

#endif
