#ifndef DECOH_CORRELATOR_HPP
#define DECOH_CORRELATOR_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "quadrature.hpp"
#include "spectral.hpp"
#include "tabulated.hpp"

namespace decoh {

// One harmonic environment mode; g absorbs the 1/sqrt(N) of collective coupling.
struct BathMode {
    double omega = 0.0;
    double g = 0.0;
};

/* Two-time bath coupling-agent correlator h(tau) = <B~(tau) B>_beta in reduced
 * units (hbar = beta = 1). For a spectral density J:
 *
 *     Re h(tau) = (1/pi) int_0^inf cos(w tau) coth(w/2) J(w) dw
 *     Im h(tau) = -(1/pi) int_0^inf sin(w tau) J(w) dw
 *
 * Values are tabulated on a uniform tau grid with cubic interpolation and
 * prefix moments int_0^t u^k Re h du (k = 0,1,3) plus int_0^t Im h du, which
 * the decoherence kernel and linear-response operations consume in O(1).
 *
 * Evaluation outside [-tau_max, tau_max] raises RangeError: no extrapolation.
 * Symmetry h(-tau) = conj(h(tau)) maps negative arguments. */
class BathCorrelator {
public:
    enum class Source { Spectral, Constant, Exponential, Gaussian, Discrete };

    static BathCorrelator from_spectral(SpectralModel sm, double tau_max,
                                        std::size_t n = 0) {
        if (sm.norm <= 0.0) sm = make_spectral_model(sm.m, sm.cutoff);
        BathCorrelator bc(Source::Spectral, tau_max, n);
        bc.m_model = sm;
        bc.build_spectral_tables();
        bc.m_variance = bc.m_re.values().front();
        bc.m_gamma0 = bc.gamma0_frequency_route(sm);
        bc.m_gamma0_flag = false;
        bc.m_tails_converged = true;
        bc.finish();
        return bc;
    }

    static BathCorrelator constant(double tau_max, std::size_t n = 0) {
        BathCorrelator bc(Source::Constant, tau_max, n);
        bc.fill_closed_form([](double) { return 1.0; }, [](double) { return 0.0; });
        bc.m_variance = 1.0;
        bc.m_gamma0 = 0.0;
        bc.m_gamma0_flag = true; // no imaginary part defined for this preset
        bc.m_tails_converged = false;
        bc.finish();
        return bc;
    }

    static BathCorrelator exponential(double tau_c, double tau_max,
                                      std::size_t n = 0) {
        require_tau_c(tau_c);
        BathCorrelator bc(Source::Exponential, tau_max, n);
        bc.m_tau_c = tau_c;
        bc.fill_closed_form([tau_c](double t) { return std::exp(-t / tau_c); },
                            [](double) { return 0.0; });
        bc.m_variance = 1.0;
        bc.m_gamma0 = 0.0;
        bc.m_gamma0_flag = true;
        bc.m_tails_converged = tau_max >= 30.0 * tau_c;
        bc.finish();
        return bc;
    }

    static BathCorrelator gaussian(double tau_c, double tau_max,
                                   std::size_t n = 0) {
        require_tau_c(tau_c);
        BathCorrelator bc(Source::Gaussian, tau_max, n);
        bc.m_tau_c = tau_c;
        bc.fill_closed_form(
            [tau_c](double t) { return std::exp(-0.5 * (t / tau_c) * (t / tau_c)); },
            [](double) { return 0.0; });
        bc.m_variance = 1.0;
        bc.m_gamma0 = 0.0;
        bc.m_gamma0_flag = true;
        bc.m_tails_converged = tau_max >= 9.0 * tau_c;
        bc.finish();
        return bc;
    }

    static BathCorrelator from_modes(std::vector<BathMode> modes, double tau_max,
                                     std::size_t n = 0) {
        if (modes.empty() || modes.size() > 8)
            throw ConfigError("discrete bath: need 1..8 modes");
        for (const auto& md : modes) {
            if (!(md.omega > 0.0) || !std::isfinite(md.g))
                throw ConfigError("discrete bath: modes need omega > 0, finite g");
        }
        BathCorrelator bc(Source::Discrete, tau_max, n);
        bc.m_modes = std::move(modes);
        double var = 0.0, g0 = 0.0;
        for (const auto& md : bc.m_modes) {
            var += md.g * md.g / std::tanh(0.5 * md.omega);
            g0 += md.g * md.g / md.omega;
        }
        bc.fill_closed_form(
            [&bc](double t) {
                double s = 0.0;
                for (const auto& md : bc.m_modes)
                    s += md.g * md.g * std::cos(md.omega * t) /
                         std::tanh(0.5 * md.omega);
                return s;
            },
            [&bc](double t) {
                double s = 0.0;
                for (const auto& md : bc.m_modes)
                    s += -md.g * md.g * std::sin(md.omega * t);
                return s;
            });
        bc.m_variance = var;
        bc.m_gamma0 = g0; // sum g^2/omega, exact frequency route
        bc.m_gamma0_flag = false;
        bc.m_tails_converged = false; // quasi-periodic, no decay
        bc.finish();
        return bc;
    }

    Source source() const { return m_src; }
    double tau_max() const { return m_re.tmax(); }
    const SpectralModel* model() const { return m_model ? &*m_model : nullptr; }
    const std::vector<BathMode>& modes() const { return m_modes; }

    double re_at(double tau) const { return m_re.eval(map_range(tau)); }
    double im_at(double tau) const {
        const double a = map_range(tau);
        const double v = m_im.eval(a);
        return tau < 0.0 ? -v : v; // h(-tau) = conj h(tau)
    }
    std::complex<double> at(double tau) const { return {re_at(tau), im_at(tau)}; }

    double variance() const { return m_variance; }
    double gamma0() const { return m_gamma0; }
    bool gamma0_flagged() const { return m_gamma0_flag; }
    bool tails_converged() const { return m_tails_converged; }

    // int_0^tau_max Re h and int_0^tau_max tau' Re h; equal to the infinite
    // integrals only when tails_converged().
    double i0() const { return m_re.end_moment(0); }
    double i1() const { return m_re.end_moment(1); }

    double moment(int k, double t) const { return m_re.moment(k, t); }

    // int_0^t Im h dtau. Even in t since Im h is odd.
    double int_im(double t) const { return m_im.moment(0, std::abs(t)); }

    double tab_error() const { return m_tab_err; }
    double moment_error(int k) const {
        switch (k) {
            case 0: return m_err0;
            case 1: return m_err1;
            case 3: return m_err3;
            default: throw ConfigError("moment_error: k must be 0, 1 or 3");
        }
    }
    double quad_error() const { return m_quad_err; }

    /* Abel-regularized time route for gamma0:
     *   A(eps) = -int_0^taumax Im h(tau) e^{-eps tau} dtau,
     * Richardson-extrapolated over eps0, eps0/2, eps0/4 assuming
     * A = gamma0 + c1 eps + c2 eps^2. Independent cross-check of gamma0().
     * Residual scales as eps0^3; 0.02 leaves ~3e-8 relative on the m=1..5
     * spectral families. */
    double gamma0_time_route(double eps0 = 0.02) const {
        if (!(eps0 > 0.0)) throw ConfigError("gamma0_time_route: eps0 must be > 0");
        auto A = [this](double eps) {
            return -m_im.integrate_weighted(
                [eps](double u) { return std::exp(-eps * u); }, m_im.tmax());
        };
        const double a0 = A(eps0), a1 = A(0.5 * eps0), a2 = A(0.25 * eps0);
        return (a0 - 6.0 * a1 + 8.0 * a2) / 3.0;
    }

    // <B~(t)>_y = -2y (gamma0 + int_0^t Im h)  [linear response of the shifted
    // bath; tends to 0 for t beyond the memory time since int_0^inf Im h = -gamma0]
    double linear_response_mean(double y, double t) const {
        return -2.0 * y * (m_gamma0 + int_im(t));
    }

    // Z_{B,y}/Z_{B,0} = exp(gamma0 y^2)
    double partition_ratio(double y) const {
        return std::exp(m_gamma0 * y * y);
    }

private:
    Source m_src;
    std::optional<SpectralModel> m_model;
    std::vector<BathMode> m_modes;
    double m_tau_c = 0.0;
    UniformTable m_re, m_im;
    std::size_t m_n;
    double m_dt;
    double m_variance = 0.0, m_gamma0 = 0.0;
    bool m_gamma0_flag = false, m_tails_converged = false;
    double m_quad_err = 0.0, m_tab_err = 0.0;
    double m_err0 = 0.0, m_err1 = 0.0, m_err3 = 0.0;

    BathCorrelator(Source src, double tau_max, std::size_t n) : m_src(src) {
        if (!(tau_max > 0.0) || !std::isfinite(tau_max))
            throw ConfigError("correlator: tau_max must be positive and finite");
        std::size_t cells;
        if (n == 0) {
            cells = std::size_t(std::ceil(tau_max / 1e-3));
        } else {
            if (n < 16) throw ConfigError("correlator: need at least 16 grid points");
            cells = n - 1;
        }
        cells = std::max<std::size_t>(cells, 64);
        if (cells % 2 == 1) ++cells; // even cell count so coarsened() is exact
        m_n = cells + 1;
        m_dt = tau_max / double(cells);
    }

    static void require_tau_c(double tau_c) {
        if (!(tau_c > 0.0)) throw ConfigError("preset: tau_c must be positive");
    }

    double map_range(double tau) const {
        const double a = std::abs(tau);
        if (a > m_re.tmax() * (1.0 + 1e-12))
            throw RangeError("correlator range exceeded: |tau|=" + std::to_string(a) +
                             " > tau_max=" + std::to_string(m_re.tmax()));
        return std::min(a, m_re.tmax());
    }

    template <typename FRe, typename FIm>
    void fill_closed_form(FRe&& fre, FIm&& fim) {
        std::vector<double> re(m_n), im(m_n);
        for (std::size_t i = 0; i < m_n; ++i) {
            const double t = double(i) * m_dt;
            re[i] = fre(t);
            im[i] = fim(t);
        }
        m_re = UniformTable(m_dt, std::move(re));
        m_im = UniformTable(m_dt, std::move(im));
        m_quad_err = 4e-16 * (std::abs(m_variance) + 1.0);
    }

    double gamma0_frequency_route(const SpectralModel& sm) const {
        // (1/pi) int_0^inf J(w)/w dw; J/w = norm w^{m-1} e^{-(w/c)^2} is smooth.
        QuadResult r = integrate_adaptive_pts(
            [&sm](double w) {
                return sm.norm * std::pow(w, double(sm.m - 1)) *
                       std::exp(-(w / sm.cutoff) * (w / sm.cutoff));
            },
            spectral_breakpoints(sm), 1e-14, 1e-12);
        return r.value / M_PI;
    }

    /* Cosine/sine transforms of the KMS weight on the tau grid.
     *
     * A fixed composite G7K15 panel set in omega is shared by every tau; the
     * per-node phase advances by a rotation recurrence along the grid (reseeded
     * every 256 steps against drift). Panel width resolves one half oscillation
     * at tau_resolve, beyond which h is identically zero in double precision:
     * the weight is analytic in |Im w| < 2pi (first coth pole), so
     * |h(tau)| <~ e^{-2 pi tau}, and the Gaussian cutoff factor adds
     * e^{-(cutoff tau / 2)^2}; at tau_resolve = max(25, 50/cutoff) both bounds
     * are below 1e-60. Those samples are pinned to exact zero. */
    void build_spectral_tables() {
        const SpectralModel& sm = *m_model;
        const double tmax = double(m_n - 1) * m_dt;
        const double resolve = std::min(tmax, std::max(25.0, 50.0 / sm.cutoff));
        const double wmax = 8.0 * sm.cutoff;
        const double width = std::min(sm.cutoff / 4.0, M_PI / std::max(resolve, 1.0));
        const std::size_t panels = std::size_t(std::ceil(wmax / width));

        std::vector<double> wnode, wkg, wkj, wgg, wgj; // node, K15/G7 x weight
        wnode.reserve(panels * 15);
        wkg.reserve(panels * 15);
        wkj.reserve(panels * 15);
        wgg.reserve(panels * 15);
        wgj.reserve(panels * 15);
        for (std::size_t p = 0; p < panels; ++p) {
            const double a = wmax * double(p) / double(panels);
            const double b = wmax * double(p + 1) / double(panels);
            const double c = 0.5 * (a + b), h = 0.5 * (b - a);
            auto push = [&](double x, double wk, double wg) {
                const double w = c + x * h;
                const double kg = kms_weight(sm, w);
                const double jj = spectral_density(sm, w);
                wnode.push_back(w);
                wkg.push_back(wk * h * kg);
                wkj.push_back(wk * h * jj);
                wgg.push_back(wg * h * kg);
                wgj.push_back(wg * h * jj);
            };
            push(0.0, detail::gk15_wk[0], detail::gk15_wg[0]);
            for (int i = 1; i < 8; ++i) {
                const double wg = (i % 2 == 0) ? detail::gk15_wg[i / 2] : 0.0;
                push(-detail::gk15_x[i], detail::gk15_wk[i], wg);
                push(+detail::gk15_x[i], detail::gk15_wk[i], wg);
            }
        }
        const std::size_t nn = wnode.size();

        // Positivity of the spectral weight on the quadrature grid (KMS).
        for (std::size_t j = 0; j < nn; ++j)
            if (kms_weight(sm, wnode[j]) < 0.0)
                throw ConvergenceError("negative KMS spectral weight at w=" +
                                       std::to_string(wnode[j]));

        std::vector<double> re(m_n, 0.0), im(m_n, 0.0);
        std::vector<double> ca(nn), sa(nn), cd(nn), sd(nn);
        for (std::size_t j = 0; j < nn; ++j) {
            cd[j] = std::cos(wnode[j] * m_dt);
            sd[j] = std::sin(wnode[j] * m_dt);
        }
        const std::size_t ilast = std::min<std::size_t>(
            m_n - 1, std::size_t(std::ceil(resolve / m_dt)));
        for (std::size_t i = 0; i <= ilast; ++i) {
            if (i % 256 == 0) {
                const double t = double(i) * m_dt;
                for (std::size_t j = 0; j < nn; ++j) {
                    ca[j] = std::cos(wnode[j] * t);
                    sa[j] = std::sin(wnode[j] * t);
                }
            }
            double sre = 0.0, sim = 0.0;
            for (std::size_t j = 0; j < nn; ++j) {
                const double c = ca[j], s = sa[j];
                sre += wkg[j] * c;
                sim += wkj[j] * s;
                ca[j] = c * cd[j] - s * sd[j];
                sa[j] = s * cd[j] + c * sd[j];
            }
            re[i] = sre / M_PI;
            im[i] = -sim / M_PI;
        }

        if (ilast < m_n - 1) {
            // Verify the decay actually happened before pinning zeros.
            double tail = 0.0;
            for (std::size_t i = ilast - std::min<std::size_t>(ilast, 50); i <= ilast; ++i)
                tail = std::max(tail, std::max(std::abs(re[i]), std::abs(im[i])));
            if (tail > 1e-12)
                throw ConvergenceError(
                    "correlator tail has not decayed at tau_resolve: max |h| = " +
                    std::to_string(tail));
        }

        m_re = UniformTable(m_dt, std::move(re));
        m_im = UniformTable(m_dt, std::move(im));

        // Quadrature error estimate: K15 vs embedded G7, worst sampled tau.
        double qerr = 0.0;
        for (double ts : {0.0, 1.0, resolve / 8.0, resolve / 2.0, 0.98 * resolve}) {
            double dre = 0.0, dim = 0.0;
            for (std::size_t p = 0; p < panels; ++p) {
                double kre = 0.0, gre = 0.0, kim = 0.0, gim = 0.0;
                for (std::size_t j = 15 * p; j < 15 * (p + 1); ++j) {
                    const double c = std::cos(wnode[j] * ts);
                    const double s = std::sin(wnode[j] * ts);
                    kre += wkg[j] * c;
                    gre += wgg[j] * c;
                    kim += wkj[j] * s;
                    gim += wgj[j] * s;
                }
                dre += std::abs(kre - gre);
                dim += std::abs(kim - gim);
            }
            qerr = std::max(qerr, std::max(dre, dim) / M_PI);
        }
        m_quad_err = qerr;
    }

    void finish() {
        m_tab_err = m_quad_err +
                    0.024 * std::max(m_re.max_fourth_difference(),
                                     m_im.max_fourth_difference());
        // Discretization error of the prefix moments from a 2x-coarsened
        // rebuild; both converge at O(dt^4), so the difference is ~15x the
        // fine-grid error.
        const UniformTable coarse = m_re.coarsened();
        m_err0 = std::abs(m_re.end_moment(0) - coarse.end_moment(0)) / 15.0 +
                 1e-16 * std::abs(m_re.end_moment(0)) + 1e-17;
        m_err1 = std::abs(m_re.end_moment(1) - coarse.end_moment(1)) / 15.0 +
                 1e-16 * std::abs(m_re.end_moment(1)) + 1e-17;
        m_err3 = std::abs(m_re.end_moment(3) - coarse.end_moment(3)) / 15.0 +
                 1e-16 * std::abs(m_re.end_moment(3)) + 1e-17;
    }
};

} // namespace decoh

#endif
