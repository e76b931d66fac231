#ifndef DECOH_MEASUREMENT_HPP
#define DECOH_MEASUREMENT_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "correlator.hpp"
#include "decoherence.hpp"
#include "errors.hpp"
#include "pointer.hpp"
#include "quadrature.hpp"
#include "regimes.hpp"

namespace decoh {

/* Microscopic measured object: record observable spectrum {s_k} (diagonal in
 * the stored basis), initial state rho_S(0), and optional self-Hamiltonian. */
struct ObjectSystem {
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXcd rho0;
    Eigen::MatrixXcd hs;
    bool has_hs = false;
    std::optional<double> t_s_override; // explicit system time scale, if given
};

inline ObjectSystem make_object_system(
    const Eigen::VectorXd& eigenvalues, const Eigen::MatrixXcd& rho0,
    const std::optional<Eigen::MatrixXcd>& hs = std::nullopt,
    std::optional<double> t_s_override = std::nullopt) {
    const Eigen::Index n = eigenvalues.size();
    if (n < 2) throw ConfigError("object: need at least 2 record eigenvalues");
    if (n > 16) throw ConfigError("object: record space capped at dim 16");
    if (rho0.rows() != n || rho0.cols() != n)
        throw ConfigError("object: rho0 must be square with the spectrum's dim");
    for (Eigen::Index i = 0; i < n; ++i)
        if (!std::isfinite(eigenvalues[i]))
            throw ConfigError("object: eigenvalues must be finite");
    // Non-degenerate record spectrum: arbitrarily close eigenvalues cannot
    // leave a record, so coincident inputs are rejected outright.
    std::vector<double> sorted(eigenvalues.data(), eigenvalues.data() + n);
    std::sort(sorted.begin(), sorted.end());
    double scale = std::max(std::abs(sorted.front()), std::abs(sorted.back()));
    for (Eigen::Index i = 0; i + 1 < n; ++i)
        if (!(sorted[i + 1] - sorted[i] > 1e-12 * (1.0 + scale)))
            throw ConfigError("object: record eigenvalues must be distinct");

    if ((rho0 - rho0.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
        throw ConfigError("object: rho0 must be Hermitian (within 1e-10)");
    if (std::abs(rho0.trace().real() - 1.0) > 1e-10 ||
        std::abs(rho0.trace().imag()) > 1e-10)
        throw ConfigError("object: rho0 must have unit trace (within 1e-10)");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho0);
    if (es.info() != Eigen::Success)
        throw ConfigError("object: rho0 eigendecomposition failed");
    if (es.eigenvalues().minCoeff() < -1e-10)
        throw ConfigError("object: rho0 must be positive semidefinite "
                          "(within -1e-10)");

    ObjectSystem sys;
    sys.eigenvalues = eigenvalues;
    sys.rho0 = rho0;
    sys.t_s_override = t_s_override;
    if (hs) {
        if (hs->rows() != n || hs->cols() != n)
            throw ConfigError("object: hs must match the record dimension");
        if ((*hs - hs->adjoint()).cwiseAbs().maxCoeff() > 1e-10)
            throw ConfigError("object: hs must be Hermitian (within 1e-10)");
        sys.hs = *hs;
        sys.has_hs = true;
    } else {
        sys.hs = Eigen::MatrixXcd::Zero(n, n);
        sys.has_hs = false;
    }
    return sys;
}

struct TimescaleRatio {
    std::string name;
    double value = 0.0;
    bool flagged = false;
};

struct TimescaleReport {
    double t_dec = 0.0; // max over adjacent record pairs
    double t_ent = 0.0;
    double t_int = 0.0;
    double t_s = 0.0;
    double t_p = 0.0;
    double requested_t = 0.0;
    Regime regime = Regime::Crossover;
    std::vector<TimescaleRatio> ratios;
    bool ok = false;
};

/* Full object-pointer measurement at coupling H_int = eps * S p_coupling:
 * holds the object, readout oscillator, bath, and the derived scales, and
 * assembles the factorized joint state
 *   |<s,x| rho(t) |s',x'>| = |rho_S0(t)_{ss'}| * rho_P(0)(x_s(t), x'_{s'}(t))
 *                             * e^{-D},
 * with x_s(t) = x - eps s t and D the Gaussian exponent of the pair of
 * ramped paths (x_s + eps s u, x'_{s'} + eps s' u). */
class MeasurementSetup {
public:
    MeasurementSetup(ObjectSystem sys, PointerModel pm, double eps,
                     BathCorrelator corr)
        : m_sys(std::move(sys)),
          m_pm(pm),
          m_eps(eps),
          m_corr(std::move(corr)),
          m_state(pm, m_corr.gamma0()) {
        if (!(eps > 0.0)) throw ConfigError("coupling: eps must be > 0");
        const Eigen::Index n = m_sys.eigenvalues.size();
        std::vector<double> sorted(m_sys.eigenvalues.data(),
                                   m_sys.eigenvalues.data() + n);
        std::sort(sorted.begin(), sorted.end());
        m_sorted_s = sorted;
        m_delta_s = std::numeric_limits<double>::infinity();
        for (Eigen::Index i = 0; i + 1 < n; ++i)
            m_delta_s = std::min(m_delta_s, sorted[i + 1] - sorted[i]);
        m_s_min = sorted.front();
        m_s_max = sorted.back();

        m_t_p = 2.0 * M_PI / pm.omega;
        if (m_sys.t_s_override) {
            if (!(*m_sys.t_s_override > 0.0))
                throw ConfigError("object: explicit t_s must be > 0");
            m_t_s = *m_sys.t_s_override;
        } else {
            m_t_s = derive_t_s();
        }
        if (m_sys.has_hs) {
            m_hs_solver.compute(m_sys.hs);
            if (m_hs_solver.info() != Eigen::Success)
                throw ConfigError("object: hs eigendecomposition failed");
        }
    }

    const ObjectSystem& object() const { return m_sys; }
    const PointerModel& pointer() const { return m_pm; }
    const BathCorrelator& bath() const { return m_corr; }
    const InitialPointerState& initial_state() const { return m_state; }
    const PointerScales& scales() const { return m_state.scales(); }
    double eps() const { return m_eps; }
    double delta_s() const { return m_delta_s; }
    double t_p() const { return m_t_p; }
    double t_s() const { return m_t_s; }

    // rho_S0(t) = e^{-i H_S t} rho_S(0) e^{+i H_S t} (free object evolution).
    Eigen::MatrixXcd object_free_evolution(double t) const {
        if (!(t >= 0.0)) throw ConfigError("object evolution: t must be >= 0");
        if (!m_sys.has_hs || t == 0.0) return m_sys.rho0;
        const Eigen::VectorXd& ev = m_hs_solver.eigenvalues();
        Eigen::VectorXcd phases(ev.size());
        for (Eigen::Index i = 0; i < ev.size(); ++i)
            phases[i] = std::exp(std::complex<double>(0.0, -ev[i] * t));
        const Eigen::MatrixXcd u = m_hs_solver.eigenvectors() *
                                   phases.asDiagonal() *
                                   m_hs_solver.eigenvectors().adjoint();
        return u * m_sys.rho0 * u.adjoint();
    }

    std::size_t index_of(double s) const {
        for (Eigen::Index i = 0; i < m_sys.eigenvalues.size(); ++i)
            if (std::abs(m_sys.eigenvalues[i] - s) <=
                1e-9 * (1.0 + std::abs(m_sys.eigenvalues[i])))
                return std::size_t(i);
        throw DomainError("record value s=" + std::to_string(s) +
                          " is not in the object spectrum");
    }

    double joint_matrix_element(double s, double x, double sp, double xp,
                                double t) const {
        if (!(t >= 0.0)) throw ConfigError("joint element: t must be >= 0");
        const std::size_t i = index_of(s), j = index_of(sp);
        const Eigen::MatrixXcd rho = object_free_evolution(t);
        return joint_element_by_index(rho, i, j, x, xp, t);
    }

    // Probability density of pointer positions for record value s.
    double pointer_marginal(double s, double x, double t) const {
        if (!(t >= 0.0)) throw ConfigError("pointer marginal: t must be >= 0");
        const std::size_t i = index_of(s);
        const Eigen::MatrixXcd rho = object_free_evolution(t);
        const double p = rho(Eigen::Index(i), Eigen::Index(i)).real();
        return p * m_state.diagonal(x - m_eps * m_sys.eigenvalues[Eigen::Index(i)] * t);
    }

    // Sum over s of the integrated pointer marginal; 1 up to quadrature.
    double marginal_norm(double t) const {
        const Eigen::MatrixXcd rho = object_free_evolution(t);
        const double w = m_state.window();
        double total = 0.0;
        for (Eigen::Index i = 0; i < m_sys.eigenvalues.size(); ++i) {
            const double shift = m_eps * m_sys.eigenvalues[i] * t;
            const double p = rho(i, i).real();
            QuadResult q = integrate_adaptive(
                [this, shift](double x) { return m_state.diagonal(x - shift); },
                -w + shift, w + shift, 1e-12, 1e-10);
            total += p * q.value;
        }
        return total;
    }

    std::vector<double> born_weights() const {
        std::vector<double> p(std::size_t(m_sys.eigenvalues.size()));
        for (Eigen::Index i = 0; i < m_sys.eigenvalues.size(); ++i)
            p[std::size_t(i)] = m_sys.rho0(i, i).real();
        return p;
    }

    /* Suppression factor of the reduced object coherence <s| tr_P rho |s'> /
     * <s| rho_S0(t) |s'>, in [0, 1]:
     *   e^{-d_peak(t)} * int rho_P(0)(y, y - eps (s'-s) t) dy.
     * The small-t decay is the pointer's own thermal coherence Gaussian
     * e^{-M (eps (s'-s) t)^2 / 2}. */
    double reduced_object_coherence(double s, double sp, double t) const {
        if (!(t >= 0.0)) throw ConfigError("reduced coherence: t must be >= 0");
        const std::size_t i = index_of(s), j = index_of(sp);
        if (i == j)
            throw DomainError("reduced coherence needs two distinct record "
                              "values");
        const double si = m_sys.eigenvalues[Eigen::Index(i)];
        const double sj = m_sys.eigenvalues[Eigen::Index(j)];
        const double d = m_eps * (sj - si) * t; // relative branch displacement
        const double w = m_state.window();
        const double lo = std::max(-w, -w + d);
        const double hi = std::min(w, w + d);
        if (!(hi > lo)) return 0.0;
        QuadResult q = integrate_adaptive(
            [this, d](double y) { return m_state.density(y, y - d); }, lo, hi,
            1e-13, 1e-11);
        const double dp = d_peak(m_corr, m_eps * std::abs(sj - si), t);
        return std::exp(-dp) * q.value;
    }

    /* Largest off-record joint element over the readout grid
     * [-w_eff + eps s_min t, w_eff + eps s_max t]^2, sampled at >= 16 points
     * per delta_eff. The separable-mixture endpoint drives this to zero. */
    double max_offdiag_modulus(double t) const {
        if (!(t >= 0.0)) throw ConfigError("max offdiag: t must be >= 0");
        const Eigen::MatrixXcd rho = object_free_evolution(t);
        const double w = m_state.window();
        const double lo = -w + m_eps * m_s_min * t;
        const double hi = w + m_eps * m_s_max * t;
        const double step = m_state.scales().delta_eff / 16.0;
        const std::size_t npts =
            std::size_t(std::ceil((hi - lo) / step)) + 1;
        const ExponentCoeffs ec = make_exponent_coeffs(m_corr, t);
        double best = 0.0;
        for (Eigen::Index i = 0; i < m_sys.eigenvalues.size(); ++i) {
            for (Eigen::Index j = i + 1; j < m_sys.eigenvalues.size(); ++j) {
                const double mod = std::abs(rho(i, j));
                if (mod == 0.0) continue;
                const double si = m_sys.eigenvalues[i];
                const double sj = m_sys.eigenvalues[j];
                const double c = m_eps * (sj - si);
                for (std::size_t a = 0; a < npts; ++a) {
                    const double x = lo + double(a) * step;
                    const double as = x - m_eps * si * t;
                    if (std::abs(as) > w) continue;
                    for (std::size_t b = 0; b < npts; ++b) {
                        const double xp = lo + double(b) * step;
                        const double bs = xp - m_eps * sj * t;
                        if (std::abs(bs) > w) continue;
                        const double dexp = d_of(ec, bs - as, c);
                        const double v =
                            mod * m_state.density(as, bs) * std::exp(-dexp);
                        if (v > best) best = v;
                    }
                }
            }
        }
        return best;
    }

    /* Regime validity report: the measurement scales against the object and
     * readout times, each ratio flagged above 0.1 (reporting convention for
     * the "much smaller than" requirements; not an error). */
    TimescaleReport validate_timescales(double t) const {
        TimescaleReport rep;
        rep.requested_t = t;
        rep.t_s = m_t_s;
        rep.t_p = m_t_p;
        rep.t_ent = entanglement_time(m_state.scales().delta_eff, m_eps, m_delta_s);
        rep.t_int = interaction_time(m_state.scales().w_eff, m_eps, m_delta_s);
        rep.t_dec = 0.0;
        for (std::size_t k = 0; k + 1 < m_sorted_s.size(); ++k) {
            const double gap = m_sorted_s[k + 1] - m_sorted_s[k];
            rep.t_dec = std::max(
                rep.t_dec, decoherence_time(m_corr, m_eps * gap));
        }
        rep.regime = classify_regime(rep.t_dec);
        auto push = [&rep](const std::string& name, double num, double den) {
            TimescaleRatio r;
            r.name = name;
            r.value = std::isinf(den) ? 0.0 : num / den;
            r.flagged = !(r.value <= 0.1);
            rep.ratios.push_back(r);
        };
        push("t_dec/t_s", rep.t_dec, m_t_s);
        push("t_int/t_s", rep.t_int, m_t_s);
        push("t_ent/t_s", rep.t_ent, m_t_s);
        push("t/t_s", t, m_t_s);
        push("t_dec/t_p", rep.t_dec, m_t_p);
        push("t_int/t_p", rep.t_int, m_t_p);
        push("t_ent/t_p", rep.t_ent, m_t_p);
        push("t/t_p", t, m_t_p);
        push("hbar_beta/t_p", 1.0, m_t_p);
        rep.ok = std::none_of(rep.ratios.begin(), rep.ratios.end(),
                              [](const TimescaleRatio& r) { return r.flagged; });
        return rep;
    }

    double joint_element_by_index(const Eigen::MatrixXcd& rho_t, std::size_t i,
                                  std::size_t j, double x, double xp,
                                  double t) const {
        const double si = m_sys.eigenvalues[Eigen::Index(i)];
        const double sj = m_sys.eigenvalues[Eigen::Index(j)];
        const double as = x - m_eps * si * t;
        const double bs = xp - m_eps * sj * t;
        const double dexp =
            d_path(m_corr, bs - as, m_eps * (sj - si), t);
        return std::abs(rho_t(Eigen::Index(i), Eigen::Index(j))) *
               m_state.density(as, bs) * std::exp(-dexp);
    }

private:
    ObjectSystem m_sys;
    PointerModel m_pm;
    double m_eps;
    BathCorrelator m_corr;
    InitialPointerState m_state;
    std::vector<double> m_sorted_s;
    double m_delta_s = 0.0, m_s_min = 0.0, m_s_max = 0.0;
    double m_t_s = 0.0, m_t_p = 0.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> m_hs_solver;

    // T_S = infinity when H_S commutes with the record observable (diagonal
    // H_S, given a non-degenerate spectrum), else 2 pi over the largest
    // object level splitting.
    double derive_t_s() const {
        if (!m_sys.has_hs) return std::numeric_limits<double>::infinity();
        const Eigen::Index n = m_sys.hs.rows();
        double offdiag = 0.0, scale = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = 0; j < n; ++j) {
                scale = std::max(scale, std::abs(m_sys.hs(i, j)));
                if (i != j) offdiag = std::max(offdiag, std::abs(m_sys.hs(i, j)));
            }
        }
        if (offdiag <= 1e-12 * (1.0 + scale))
            return std::numeric_limits<double>::infinity();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m_sys.hs);
        if (es.info() != Eigen::Success)
            throw ConfigError("object: hs eigendecomposition failed");
        const double gap =
            es.eigenvalues().maxCoeff() - es.eigenvalues().minCoeff();
        if (!(gap > 0.0)) return std::numeric_limits<double>::infinity();
        return 2.0 * M_PI / gap;
    }
};

} // namespace decoh

#endif
