#ifndef DECOH_SPECTRAL_HPP
#define DECOH_SPECTRAL_HPP

#include <cmath>
#include <string>
#include <vector>

#include "errors.hpp"
#include "quadrature.hpp"

namespace decoh {

/* Gaussian-cutoff power-law spectral density in reduced units (hbar = beta = 1,
 * bath variance <B^2> = 1):
 *
 *     J(w) = norm * w^m * exp(-(w/cutoff)^2),  w >= 0, odd extension to w < 0.
 *
 * norm is fixed so that Re h(0) = (1/pi) int_0^inf coth(w/2) J(w) dw = 1. */
struct SpectralModel {
    int m = 1;          // 1, 3 or 5
    double cutoff = 5.0;
    double norm = 0.0;  // set by make_spectral_model
};

inline double spectral_density(const SpectralModel& sm, double w) {
    if (w < 0.0) return -spectral_density(sm, -w); // odd extension
    const double r = w / sm.cutoff;
    return sm.norm * std::pow(w, double(sm.m)) * std::exp(-r * r);
}

// coth(w/2) * J(w). Removable w->0 limit handled by series:
// coth(w/2) w^m = 2 w^{m-1} + w^{m+1}/6 - w^{m+3}/360 + ...
inline double kms_weight(const SpectralModel& sm, double w) {
    if (w < 0.0) return kms_weight(sm, -w); // even
    const double r = w / sm.cutoff;
    const double gauss = sm.norm * std::exp(-r * r);
    if (w < 1e-3) {
        const double wm1 = std::pow(w, double(sm.m - 1));
        const double w2 = w * w;
        return gauss * wm1 * (2.0 + w2 / 6.0 - w2 * w2 / 360.0);
    }
    return gauss * std::pow(w, double(sm.m)) / std::tanh(0.5 * w);
}

// Quadrature breakpoints resolving the cutoff scale; the weight is
// negligible beyond ~8*cutoff (Gaussian tail below 1e-27).
inline std::vector<double> spectral_breakpoints(const SpectralModel& sm) {
    const double c = sm.cutoff;
    return {0.0, 0.25 * c, 0.5 * c, c, 2.0 * c, 4.0 * c, 6.0 * c, 10.0 * c};
}

inline SpectralModel make_spectral_model(int m, double cutoff = 5.0) {
    if (m != 1 && m != 3 && m != 5)
        throw ConfigError("spectral model: m must be 1, 3 or 5 (got " +
                          std::to_string(m) + ")");
    if (!(cutoff > 0.0))
        throw ConfigError("spectral model: cutoff must be positive");
    SpectralModel sm{m, cutoff, 1.0};
    QuadResult I = integrate_adaptive_pts(
        [&sm](double w) { return kms_weight(sm, w); }, spectral_breakpoints(sm),
        1e-14, 1e-13);
    if (!(I.value > 0.0))
        throw ConvergenceError("spectral normalization integral is not positive");
    sm.norm = M_PI / I.value;
    return sm;
}

} // namespace decoh

#endif
