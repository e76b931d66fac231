#ifndef DECOH_TABULATED_HPP
#define DECOH_TABULATED_HPP

#include <cmath>
#include <cstddef>
#include <vector>
#include <algorithm>
#include <string>

#include "errors.hpp"
#include "quadrature.hpp"

namespace decoh {

/* Uniform-grid tabulation on [0, tmax] with centered cubic (4-point Lagrange)
 * interpolation and prefix moment integrals of the interpolant,
 *     P_k(t) = int_0^t u^k v(u) du   for k in {0, 1, 3},
 * evaluated cell-exactly (GL4 is exact through degree 7, the integrand is
 * degree <= 6). Interpolation and the prefix integrals use the same stencil
 * per cell, so moment() is the exact integral of the eval() interpolant. */
class UniformTable {
public:
    UniformTable() = default;

    UniformTable(double dt, std::vector<double> values)
        : m_dt(dt), m_v(std::move(values)) {
        if (m_dt <= 0.0 || m_v.size() < 8)
            throw ConfigError("UniformTable: need dt > 0 and at least 8 samples");
        build_prefixes();
    }

    double dt() const { return m_dt; }
    double tmax() const { return m_dt * double(m_v.size() - 1); }
    std::size_t size() const { return m_v.size(); }
    const std::vector<double>& values() const { return m_v; }

    // Cubic interpolation; exact at grid nodes. t must lie in [0, tmax].
    double eval(double t) const {
        check_range(t);
        const std::size_t s = stencil(cell_index(t));
        return cubic(s, t / m_dt - double(s));
    }

    // int_0^t u^k v_interp(u) du for k in {0,1,3}; t in [0, tmax].
    double moment(int k, double t) const {
        check_range(t);
        const std::vector<double>& P = prefix(k);
        const std::size_t j = cell_index(t);
        const double t0 = double(j) * m_dt;
        double part = 0.0;
        if (t > t0) {
            const std::size_t s = stencil(j);
            const double len = t - t0;
            for (int q = 0; q < 4; ++q) {
                const double u = t0 + detail::gl4_x[q] * len;
                part += detail::gl4_w[q] * len * powk(u, k) *
                        cubic(s, u / m_dt - double(s));
            }
        }
        return P[j] + part;
    }

    double end_moment(int k) const { return prefix(k).back(); }

    // Max fourth difference of the samples; ~|v''''|*dt^4, the pointwise
    // cubic-interpolation error scale.
    double max_fourth_difference() const {
        double m = 0.0;
        for (std::size_t i = 0; i + 4 < m_v.size(); ++i)
            m = std::max(m, std::abs(m_v[i] - 4 * m_v[i + 1] + 6 * m_v[i + 2] -
                                     4 * m_v[i + 3] + m_v[i + 4]));
        return m;
    }

    // Table restricted to every other sample (size must be odd). Used to
    // estimate the discretization error of the prefix moments.
    UniformTable coarsened() const {
        std::vector<double> half;
        half.reserve(m_v.size() / 2 + 1);
        for (std::size_t i = 0; i < m_v.size(); i += 2) half.push_back(m_v[i]);
        return UniformTable(2.0 * m_dt, std::move(half));
    }

    // int_0^t w(u) v_interp(u) du with arbitrary smooth weight, GL4 per cell.
    template <typename W>
    double integrate_weighted(W&& w, double t) const {
        check_range(t);
        const std::size_t jend = cell_index(t);
        double acc = 0.0;
        for (std::size_t j = 0; j <= jend; ++j) {
            const double a = double(j) * m_dt;
            const double b = (j == jend) ? t : a + m_dt;
            if (b <= a) continue;
            const std::size_t s = stencil(j);
            if (zero_stencil(s)) continue;
            for (int q = 0; q < 4; ++q) {
                const double u = a + detail::gl4_x[q] * (b - a);
                acc += detail::gl4_w[q] * (b - a) * w(u) *
                       cubic(s, u / m_dt - double(s));
            }
        }
        return acc;
    }

private:
    double m_dt = 0.0;
    std::vector<double> m_v;
    std::vector<double> m_p0, m_p1, m_p3;

    static double powk(double u, int k) {
        switch (k) {
            case 0: return 1.0;
            case 1: return u;
            case 3: return u * u * u;
            default: throw ConfigError("UniformTable: moment order must be 0, 1 or 3");
        }
    }

    void check_range(double t) const {
        if (!(t >= -1e-12) || t > tmax() * (1.0 + 1e-12) + 1e-300)
            throw RangeError("tabulated range exceeded: t=" + std::to_string(t) +
                             " outside [0," + std::to_string(tmax()) + "]");
    }

    std::size_t cell_index(double t) const {
        const double x = std::max(0.0, t) / m_dt;
        std::size_t j = std::size_t(x);
        return std::min(j, m_v.size() - 2);
    }

    std::size_t stencil(std::size_t cell) const {
        if (cell == 0) return 0;
        return std::min(cell - 1, m_v.size() - 4);
    }

    bool zero_stencil(std::size_t s) const {
        return m_v[s] == 0.0 && m_v[s + 1] == 0.0 && m_v[s + 2] == 0.0 &&
               m_v[s + 3] == 0.0;
    }

    // Lagrange cubic through samples s..s+3; x is in grid units from node s.
    double cubic(std::size_t s, double x) const {
        const double x1 = x - 1.0, x2 = x - 2.0, x3 = x - 3.0;
        const double l0 = -x1 * x2 * x3 / 6.0;
        const double l1 = x * x2 * x3 / 2.0;
        const double l2 = -x * x1 * x3 / 2.0;
        const double l3 = x * x1 * x2 / 6.0;
        return l0 * m_v[s] + l1 * m_v[s + 1] + l2 * m_v[s + 2] + l3 * m_v[s + 3];
    }

    const std::vector<double>& prefix(int k) const {
        switch (k) {
            case 0: return m_p0;
            case 1: return m_p1;
            default: break;
        }
        if (k == 3) return m_p3;
        throw ConfigError("UniformTable: moment order must be 0, 1 or 3");
    }

    void build_prefixes() {
        const std::size_t n = m_v.size();
        m_p0.assign(n, 0.0);
        m_p1.assign(n, 0.0);
        m_p3.assign(n, 0.0);
        for (std::size_t j = 0; j + 1 < n; ++j) {
            const std::size_t s = stencil(j);
            double c0 = 0.0, c1 = 0.0, c3 = 0.0;
            if (!zero_stencil(s)) {
                const double a = double(j) * m_dt;
                for (int q = 0; q < 4; ++q) {
                    const double u = a + detail::gl4_x[q] * m_dt;
                    const double pv = detail::gl4_w[q] * m_dt *
                                      cubic(s, u / m_dt - double(s));
                    c0 += pv;
                    c1 += pv * u;
                    c3 += pv * u * u * u;
                }
            }
            m_p0[j + 1] = m_p0[j] + c0;
            m_p1[j + 1] = m_p1[j] + c1;
            m_p3[j + 1] = m_p3[j] + c3;
        }
    }
};

} // namespace decoh

#endif
