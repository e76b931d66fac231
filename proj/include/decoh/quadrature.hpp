#ifndef DECOH_QUADRATURE_HPP
#define DECOH_QUADRATURE_HPP

#include <cmath>
#include <cstddef>
#include <vector>
#include <algorithm>
#include <string>

#include "errors.hpp"

namespace decoh {

struct QuadResult {
    double value = 0.0;
    double error = 0.0; // absolute error estimate
};

namespace detail {

// Gauss-Kronrod 7-15 nodes on [-1,1], positive half (index 0 is the center).
// Even indices are the embedded Gauss-7 points.
inline constexpr double gk15_x[8] = {
    0.000000000000000000000000000000000,
    0.207784955007898467600689403773245,
    0.405845151377397166906606412076961,
    0.586087235467691130294144838258730,
    0.741531185599394439863864773280788,
    0.864864423359769072789712788640926,
    0.949107912342758524526189684047851,
    0.991455371120812639206854697526329};

inline constexpr double gk15_wk[8] = {
    0.209482141084727828012999174891714,
    0.204432940075298892414161999234649,
    0.190350578064785409913256402421014,
    0.169004726639267902826583426598550,
    0.140653259715525918745189590510238,
    0.104790010322250183839876322541518,
    0.063092092629978553290700663189204,
    0.022935322010529224963732008058970};

inline constexpr double gk15_wg[4] = {
    0.417959183673469387755102040816327,
    0.381830050505118944950369775488975,
    0.279705391489276667901467771423780,
    0.129484966168869693270611432679082};

} // namespace detail

// Single Gauss-Kronrod 7-15 panel. error = |K15 - G7| (conservative under
// subdivision; no QUADPACK rescaling needed at the tolerances used here).
template <typename F>
QuadResult gauss_kronrod_15(F&& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double k15 = detail::gk15_wk[0] * fc;
    double g7 = detail::gk15_wg[0] * fc;
    for (int i = 1; i < 8; ++i) {
        const double dx = h * detail::gk15_x[i];
        const double fs = f(c - dx) + f(c + dx);
        k15 += detail::gk15_wk[i] * fs;
        if (i % 2 == 0) g7 += detail::gk15_wg[i / 2] * fs;
    }
    return {k15 * h, std::abs((k15 - g7) * h)};
}

/* Adaptive bisection on an explicit interval stack, worst interval first.
 * Converges when the summed error estimate meets abs_tol + rel_tol*|value|.
 * Throws ConvergenceError when the interval budget is exhausted. */
template <typename F>
QuadResult integrate_adaptive(F&& f, double a, double b,
                              double abs_tol = 1e-12, double rel_tol = 1e-10,
                              std::size_t max_intervals = 4000) {
    struct Seg {
        double a, b, value, error;
    };
    std::vector<Seg> segs;
    QuadResult whole = gauss_kronrod_15(f, a, b);
    segs.push_back({a, b, whole.value, whole.error});
    for (std::size_t iter = 0; iter < max_intervals; ++iter) {
        double total = 0.0, err = 0.0;
        std::size_t worst = 0;
        for (std::size_t i = 0; i < segs.size(); ++i) {
            total += segs[i].value;
            err += segs[i].error;
            if (segs[i].error > segs[worst].error) worst = i;
        }
        if (err <= abs_tol + rel_tol * std::abs(total))
            return {total, err};
        const Seg s = segs[worst];
        const double mid = 0.5 * (s.a + s.b);
        if (mid <= s.a || mid >= s.b) return {total, err}; // roundoff floor
        QuadResult left = gauss_kronrod_15(f, s.a, mid);
        QuadResult right = gauss_kronrod_15(f, mid, s.b);
        segs[worst] = {s.a, mid, left.value, left.error};
        segs.push_back({mid, s.b, right.value, right.error});
    }
    double total = 0.0, err = 0.0;
    for (const auto& s : segs) {
        total += s.value;
        err += s.error;
    }
    throw ConvergenceError("adaptive quadrature did not converge: achieved error " +
                           std::to_string(err) + " on [" + std::to_string(a) + "," +
                           std::to_string(b) + "]");
}

// Adaptive integration split at caller-supplied breakpoints (used for
// integrands with known structure changes, e.g. spectral cutoff scales).
template <typename F>
QuadResult integrate_adaptive_pts(F&& f, const std::vector<double>& pts,
                                  double abs_tol = 1e-12, double rel_tol = 1e-10) {
    QuadResult out;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        QuadResult r = integrate_adaptive(f, pts[i], pts[i + 1],
                                          abs_tol / double(pts.size()), rel_tol);
        out.value += r.value;
        out.error += r.error;
    }
    return out;
}

namespace detail {
// Gauss-Legendre 4 on [0,1]: exact through degree 7, enough for
// (cubic interpolant) * u^3 cell integrals.
inline constexpr double gl4_x[4] = {
    0.069431844202973712388026755553595,
    0.330009478207571867598667120448378,
    0.669990521792428132401332879551622,
    0.930568155797026287611973244446405};
inline constexpr double gl4_w[4] = {
    0.173927422568726928686531974610999,
    0.326072577431273071313468025389001,
    0.326072577431273071313468025389001,
    0.173927422568726928686531974610999};
} // namespace detail

} // namespace decoh

#endif
