#ifndef DECOH_POINTER_HPP
#define DECOH_POINTER_HPP

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "errors.hpp"
#include "quadrature.hpp"

namespace decoh {

/* Massive readout oscillator with an inverted quartic softening:
 *   V(x) = (M Omega^2 / 2) x^2 - (kappa / 4) x^4.
 * Reduced units hbar = beta = 1; the bath coupling strength is normalized
 * into <B^2> = 1, so gamma0 is the only bath number entering here. */
struct PointerModel {
    double mass = 0.0;
    double omega = 0.0;
    double kappa = 0.0;        // quartic softening, >= 0 (0: pure harmonic)
    double delta_class = 0.0;  // required classical distinguishability scale
};

inline PointerModel make_pointer_model(double mass, double omega, double kappa,
                                       double delta_class) {
    if (!(mass > 0.0)) throw ConfigError("pointer: mass must be > 0");
    if (!(omega > 0.0)) throw ConfigError("pointer: omega must be > 0");
    // Adiabatic readout regime: oscillator period well above the thermal time.
    if (omega > 0.4 * M_PI * (1.0 + 1e-12))
        throw ConfigError("pointer: omega must be <= 0.2 * 2*pi (slow readout)");
    if (!(kappa >= 0.0)) throw ConfigError("pointer: kappa must be >= 0");
    if (!(delta_class > 0.0)) throw ConfigError("pointer: delta_class must be > 0");
    return {mass, omega, kappa, delta_class};
}

inline double potential(const PointerModel& pm, double x) {
    return 0.5 * pm.mass * pm.omega * pm.omega * x * x -
           0.25 * pm.kappa * x * x * x * x;
}

// Bath-renormalized potential: the quadratic term is softened by 2 gamma0.
inline double effective_potential(const PointerModel& pm, double gamma0, double x) {
    return 0.5 * (pm.mass * pm.omega * pm.omega - 2.0 * gamma0) * x * x -
           0.25 * pm.kappa * x * x * x * x;
}

// Positive margin <=> the renormalized well confines (gamma0 < M Omega^2 / 4).
inline double stability_margin(const PointerModel& pm, double gamma0) {
    return 0.25 * pm.mass * pm.omega * pm.omega - gamma0;
}

inline void require_stable(const PointerModel& pm, double gamma0) {
    if (!(stability_margin(pm, gamma0) > 0.0))
        throw StabilityError(
            "bath renormalization destabilizes the readout well: gamma0=" +
            std::to_string(gamma0) +
            " >= M*Omega^2/4=" + std::to_string(0.25 * pm.mass * pm.omega * pm.omega));
}

struct ScaleWarning {
    std::string code;
    std::string text;
};

/* Hierarchy of lengths for a valid measurement record. Soft violations are
 * reported as warnings (factor-of-3 margins), not errors: the model still
 * evaluates, the readout is just less sharp than intended. */
struct PointerScales {
    double lambda_th = 0.0;  // thermal coherence length 2*pi/sqrt(M)
    double delta_th = 0.0;   // bare thermal spread (M Omega^2)^{-1/2}
    double delta_eff = 0.0;  // renormalized spread (M Omega^2 - 2 gamma0)^{-1/2}
    double w_eff = 0.0;      // barrier location sqrt((M Omega^2 - 2 gamma0)/kappa)
    double v0_eff = 0.0;     // barrier height (M Omega^2 - 2 gamma0)^2/(4 kappa)
    bool has_barrier = false;
    std::vector<ScaleWarning> warnings;
};

inline PointerScales length_scales(const PointerModel& pm, double gamma0) {
    require_stable(pm, gamma0);
    const double k_eff = pm.mass * pm.omega * pm.omega - 2.0 * gamma0;
    PointerScales sc;
    sc.lambda_th = 2.0 * M_PI / std::sqrt(pm.mass);
    sc.delta_th = 1.0 / std::sqrt(pm.mass * pm.omega * pm.omega);
    sc.delta_eff = 1.0 / std::sqrt(k_eff);
    sc.has_barrier = pm.kappa > 0.0;
    if (sc.has_barrier) {
        sc.w_eff = std::sqrt(k_eff / pm.kappa);
        sc.v0_eff = k_eff * k_eff / (4.0 * pm.kappa);
    } else {
        sc.w_eff = std::numeric_limits<double>::infinity();
        sc.v0_eff = std::numeric_limits<double>::infinity();
        sc.warnings.push_back({"no_barrier",
                               "kappa = 0: harmonic readout has no exit barrier"});
    }
    auto warn = [&sc](const char* code, const std::string& text) {
        sc.warnings.push_back({code, text});
    };
    if (!(3.0 * sc.lambda_th < sc.delta_th))
        warn("thermal_length", "thermal coherence length is not well below the "
                               "thermal spread: 3*lambda_th=" +
                                   std::to_string(3.0 * sc.lambda_th) +
                                   " >= delta_th=" + std::to_string(sc.delta_th));
    // Within the stable domain the widening is at most sqrt(2); beyond 1.3x
    // the well is close to the destabilization point.
    if (!(sc.delta_eff < 1.3 * sc.delta_th))
        warn("effective_width", "renormalization widens the well spread beyond "
                                "1.3x the bare one (near instability): "
                                "delta_eff=" + std::to_string(sc.delta_eff));
    if (sc.has_barrier && !(sc.w_eff > 3.0 * sc.delta_eff))
        warn("barrier_width", "barrier sits within 3 well widths: w_eff=" +
                                  std::to_string(sc.w_eff) + " <= 3*delta_eff=" +
                                  std::to_string(3.0 * sc.delta_eff));
    if (sc.has_barrier && !(pm.delta_class > 3.0 * sc.w_eff))
        warn("classical_separation", "requested pointer separation is not well "
                                     "beyond the barrier: delta_class=" +
                                         std::to_string(pm.delta_class) +
                                         " <= 3*w_eff=" + std::to_string(sc.w_eff * 3.0));
    if (sc.has_barrier && !(sc.v0_eff > 3.0))
        warn("barrier_height", "barrier height is not well above the thermal "
                               "energy: v0_eff=" + std::to_string(sc.v0_eff));
    return sc;
}

/* Pre-measurement pointer state: thermal within the renormalized well,
 * truncated outside it,
 *   rho_P(0)(x,x') = C e^{-(V_eff(x)+V_eff(x'))/2} e^{-M (x-x')^2 / 2},
 * with C fixing the diagonal to unit trace over the support window
 * (|x| <= w_eff, or 10 delta_eff when no barrier exists). */
class InitialPointerState {
public:
    InitialPointerState(const PointerModel& pm, double gamma0)
        : m_pm(pm), m_scales(length_scales(pm, gamma0)) {
        m_a = 0.5 * (pm.mass * pm.omega * pm.omega - 2.0 * gamma0);
        m_b = 0.25 * pm.kappa;
        m_coh = 0.5 * pm.mass;
        m_window = m_scales.has_barrier ? m_scales.w_eff : 10.0 * m_scales.delta_eff;
        QuadResult z = integrate_adaptive(
            [this](double x) { return std::exp(-veff(x)); }, -m_window, m_window,
            1e-14, 1e-12);
        if (!(z.value > 0.0) || !std::isfinite(z.value))
            throw ConvergenceError("pointer state normalization failed");
        m_norm = 1.0 / z.value;
    }

    const PointerModel& pointer() const { return m_pm; }
    const PointerScales& scales() const { return m_scales; }
    double window() const { return m_window; }
    double normalization() const { return m_norm; }

    double density(double x, double xp) const {
        if (std::abs(x) > m_window || std::abs(xp) > m_window) return 0.0;
        const double d = x - xp;
        return m_norm * std::exp(-0.5 * (veff(x) + veff(xp)) - m_coh * d * d);
    }

    double diagonal(double x) const { return density(x, x); }

private:
    PointerModel m_pm;
    PointerScales m_scales;
    double m_a = 0.0, m_b = 0.0, m_coh = 0.0, m_window = 0.0, m_norm = 0.0;

    double veff(double x) const { return (m_a - m_b * x * x) * x * x; }
};

} // namespace decoh

#endif
