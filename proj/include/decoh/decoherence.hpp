#ifndef DECOH_DECOHERENCE_HPP
#define DECOH_DECOHERENCE_HPP

#include <cmath>
#include <string>

#include "correlator.hpp"
#include "errors.hpp"

namespace decoh {

struct KernelValue {
    double value = 0.0;
    double error = 0.0; // absolute, conservative
};

/* Double-time kernel of the decoherence exponent,
 *   K(t) = int_0^t ds int_0^s ds' (s - s')^2 ... collapsed by symmetry to
 *   K(t) = int_0^t A(u,t) Re h(u) du,  A(u,t) = t^3/3 - (t^2/2) u + u^3/6,
 * evaluated in O(1) from the tabulated prefix moments
 *   M_k(t) = int_0^t u^k Re h(u) du  (k = 0,1,3).
 * For the constant-memory preset (Re h = 1) this reduces to t^4/8 exactly. */
inline KernelValue kernel_K(const BathCorrelator& corr, double t) {
    if (!(t >= 0.0)) throw ConfigError("kernel_K: t must be >= 0");
    const double m0 = corr.moment(0, t);
    const double m1 = corr.moment(1, t);
    const double m3 = corr.moment(3, t);
    KernelValue kv;
    kv.value = (t * t * t / 3.0) * m0 - (t * t / 2.0) * m1 + m3 / 6.0;
    kv.error = (t * t * t / 3.0) * corr.moment_error(0) +
               (t * t / 2.0) * corr.moment_error(1) +
               corr.moment_error(3) / 6.0 +
               corr.quad_error() * t * t * t * t / 8.0;
    return kv;
}

/* Gaussian-phase exponent for a pair of linearly driven paths whose
 * coupling difference is f(u) = delta + c u on [0, t]:
 *   D = delta^2 T0(t) + delta c S(t) + c^2 K(t),
 *   T0(t) = t M0 - M1,   S(t) = t^2 M0 - t M1.
 * D >= 0 for any admissible correlator (it is a variance). */
inline double d_path(const BathCorrelator& corr, double delta, double c, double t) {
    if (!(t >= 0.0)) throw ConfigError("d_path: t must be >= 0");
    const double m0 = corr.moment(0, t);
    const double m1 = corr.moment(1, t);
    const double m3 = corr.moment(3, t);
    const double t0 = t * m0 - m1;
    const double s = t * t * m0 - t * m1;
    const double k = (t * t * t / 3.0) * m0 - (t * t / 2.0) * m1 + m3 / 6.0;
    return delta * delta * t0 + delta * c * s + c * c * k;
}

// Branch separation delta_ds(tau) = eps_ds * tau: pure-velocity pair, so the
// exponent is eps_ds^2 K(t). This is the peak (x = x') object-coherence decay.
inline double d_peak(const BathCorrelator& corr, double eps_ds, double t) {
    return eps_ds * eps_ds * kernel_K(corr, t).value;
}

/* Exponent between record branches (s, x) vs (s', x') of the coupled
 * object-pointer propagation: position offset delta = x' - x, velocity
 * offset c = eps (s' - s). The separation along the pair is
 * d(u) = (x' - x) + eps (s' - s) u. */
inline double d_general(const BathCorrelator& corr, double eps, double s,
                        double sp, double x, double xp, double t) {
    return d_path(corr, xp - x, eps * (sp - s), t);
}

// Precomputed exponent coefficients at fixed t, for scanning many (delta, c).
struct ExponentCoeffs {
    double t = 0.0;
    double t0 = 0.0, s = 0.0, k = 0.0;
};

inline ExponentCoeffs make_exponent_coeffs(const BathCorrelator& corr, double t) {
    const double m0 = corr.moment(0, t);
    const double m1 = corr.moment(1, t);
    const double m3 = corr.moment(3, t);
    ExponentCoeffs ec;
    ec.t = t;
    ec.t0 = t * m0 - m1;
    ec.s = t * t * m0 - t * m1;
    ec.k = (t * t * t / 3.0) * m0 - (t * t / 2.0) * m1 + m3 / 6.0;
    return ec;
}

inline double d_of(const ExponentCoeffs& ec, double delta, double c) {
    return delta * delta * ec.t0 + delta * c * ec.s + c * c * ec.k;
}

struct DecoherenceSolve {
    double tdec = 0.0;
    double bracket_lo = 0.0; // sign-change bracket the solve closed in on
    double bracket_hi = 0.0;
    int iterations = 0;
};

/* Decoherence time: the root of eps_ds^2 K(t) = 1, located to
 * |D - 1| <= tol. Starts from the constant-memory guess (8/eps^2)^{1/4},
 * brackets by doubling/halving, then closes in with a secant/bisection
 * hybrid. Needs K to reach 1/eps^2 within the tabulated range. */
inline DecoherenceSolve decoherence_time_solve(const BathCorrelator& corr,
                                               double eps_ds, double tol = 1e-9) {
    if (!(eps_ds > 0.0)) throw ConfigError("decoherence_time: eps_ds must be > 0");
    if (!(tol > 0.0)) throw ConfigError("decoherence_time: tol must be > 0");
    const double e2 = eps_ds * eps_ds;
    auto f = [&](double t) { return e2 * kernel_K(corr, t).value - 1.0; };

    double t0 = std::pow(8.0 / e2, 0.25);
    t0 = std::min(t0, corr.tau_max());
    double lo = t0, hi = t0;
    double flo, fhi;
    try {
        flo = fhi = f(t0);
        if (flo < 0.0) {
            for (int i = 0; fhi < 0.0; ++i) {
                if (i >= 300 || hi >= corr.tau_max())
                    throw ConvergenceError(
                        "decoherence time not reached within tabulated range "
                        "(increase run.tau_max)");
                lo = hi;
                flo = fhi;
                hi = std::min(hi * 2.0, corr.tau_max());
                fhi = f(hi);
            }
        } else {
            for (int i = 0; flo > 0.0; ++i) {
                if (i >= 300)
                    throw ConvergenceError("decoherence time bracketing failed "
                                           "near t = 0");
                hi = lo;
                fhi = flo;
                lo *= 0.5;
                flo = f(lo);
            }
        }
    } catch (const RangeError&) {
        throw ConvergenceError("decoherence time not reached within tabulated "
                               "range (increase run.tau_max)");
    }
    if (flo == 0.0) return {lo, lo, hi, 0};
    if (fhi == 0.0) return {hi, lo, hi, 0};

    // flo < 0 < fhi from here on.
    double a = lo, b = hi, fa = flo, fb = fhi;
    for (int it = 0; it < 200; ++it) {
        double mid = a + (b - a) * (-fa) / (fb - fa); // secant within bracket
        const double safety = 1e-3 * (b - a);
        if (!(mid > a + safety) || !(mid < b - safety)) mid = 0.5 * (a + b);
        const double fm = f(mid);
        if (std::abs(fm) <= tol) return {mid, lo, hi, it + 1};
        if (fm < 0.0) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
            fb = fm;
        }
    }
    throw ConvergenceError("decoherence time solve did not converge to |D-1| "
                           "tolerance");
}

inline double decoherence_time(const BathCorrelator& corr, double eps_ds,
                               double tol = 1e-9) {
    return decoherence_time_solve(corr, eps_ds, tol).tdec;
}

} // namespace decoh

#endif
