#ifndef DECOH_ORACLE_HPP
#define DECOH_ORACLE_HPP

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "correlator.hpp"
#include "decoherence.hpp"
#include "errors.hpp"

namespace decoh {

// Linear coupling ramp f(tau) = a + b tau seen by the bath along one branch.
struct LinearDrive {
    double a = 0.0;
    double b = 0.0;
};

// Branch (s, x) observed at time t couples through f(tau) = x_s(t - tau)
// = (x - eps s t) + eps s tau.
inline LinearDrive make_drive(double x, double eps, double s, double t) {
    return {x - eps * s * t, eps * s};
}

/* Brute-force harmonic bath: every mode kept as a dense truncated Fock-space
 * matrix, thermally averaged exactly. Exists to validate the Gaussian
 * decoherence formula: for linear coupling the second-order cumulant is the
 * whole answer, so |<U'~dag U~>| must equal e^{-D} up to truncation and
 * time-step error. Deliberately naive matrix algebra throughout. */
class DiscreteBath {
public:
    explicit DiscreteBath(std::vector<BathMode> modes, int n_fock = 30)
        : m_n(n_fock) {
        if (modes.empty() || modes.size() > 8)
            throw ConfigError("oracle bath: need 1..8 modes");
        if (n_fock < 10 || n_fock > 128)
            throw ConfigError("oracle bath: n_fock must be in [10, 128]");
        for (const auto& md : modes) {
            if (!(md.omega > 0.0) || !std::isfinite(md.g))
                throw ConfigError("oracle bath: modes need omega > 0, finite g");
            // Truncation adequacy: thermal weight of the top retained level.
            const double top = std::exp(-md.omega * double(n_fock - 1)) *
                               (1.0 - std::exp(-md.omega));
            if (!(top < 1e-8))
                throw ConfigError(
                    "oracle bath: thermal occupation " + std::to_string(top) +
                    " at the top Fock level exceeds 1e-8; increase n_fock");
        }
        for (const auto& md : modes) m_modes.push_back(prepare_mode(md));
    }

    int n_fock() const { return m_n; }
    std::vector<BathMode> modes() const {
        std::vector<BathMode> out;
        for (const auto& pm : m_modes) out.push_back({pm.omega, pm.g});
        return out;
    }

    // h(t) = sum_nu g^2 [coth(omega/2) cos(omega t) - i sin(omega t)].
    std::complex<double> correlator(double t) const {
        std::complex<double> h(0.0, 0.0);
        for (const auto& pm : m_modes) {
            h += pm.g * pm.g *
                 std::complex<double>(std::cos(pm.omega * t) /
                                          std::tanh(0.5 * pm.omega),
                                      -std::sin(pm.omega * t));
        }
        return h;
    }

    // Same correlator by direct trace tr(B~(t) B rho) in the Fock basis.
    std::complex<double> correlator_fock(double t) const {
        std::complex<double> h(0.0, 0.0);
        for (const auto& pm : m_modes) {
            Eigen::MatrixXcd bt(m_n, m_n);
            for (int j = 0; j < m_n; ++j)
                for (int k = 0; k < m_n; ++k)
                    bt(j, k) = pm.b(j, k) *
                               std::exp(std::complex<double>(
                                   0.0, pm.omega * double(j - k) * t));
            const Eigen::MatrixXcd prod = bt * pm.b.cast<std::complex<double>>();
            for (int k = 0; k < m_n; ++k) h += pm.w[k] * prod(k, k);
        }
        return h;
    }

    /* <U~_b(t)^dag U~_a(t)>_thermal by midpoint ordered product:
     *   U~ = T prod_k exp(-i dtau f(tau_k) B~(tau_k)),  tau_k = (k - 1/2) dtau.
     * Each slice is exp(i H tau_k) exp(-i dtau f B) exp(-i H tau_k); adjacent
     * boundary phases merge into one free step exp(-i H dtau), and the outer
     * ones cancel against the thermal state and the other branch. Per mode, in
     * the eigenbasis of B, the core is
     *   A = D_s (W D_{s-1}) ... (W D_1),  W = V^T exp(-i H dtau) V,
     * and the factor is tr(B_core^dag A_core Sigma), Sigma = V^T rho V.
     * Every factor is unitary, so the accumulation is stable. */
    std::complex<double> exact_factor(const LinearDrive& da,
                                      const LinearDrive& db, double t,
                                      int steps) const {
        if (!(t >= 0.0)) throw ConfigError("oracle: t must be >= 0");
        if (steps < 2 || steps % 2 != 0)
            throw ConfigError("oracle: steps must be even and >= 2");
        if (t == 0.0) return {1.0, 0.0};
        const std::complex<double> fine = ordered_product(da, db, t, steps);
        const std::complex<double> coarse = ordered_product(da, db, t, steps / 2);
        const double delta =
            std::abs(fine - coarse) / std::max(std::abs(fine), 1e-30);
        if (!(delta < 1e-5))
            throw ConvergenceError(
                "oracle ordered product not step-converged: halving changed "
                "the result by relative " +
                std::to_string(delta) + "; increase steps");
        return fine;
    }

private:
    struct ModeData {
        double omega = 0.0, g = 0.0;
        Eigen::MatrixXd b;      // g (a + a^dag) in the Fock basis
        Eigen::MatrixXd v;      // eigenvectors of b
        Eigen::VectorXd lam;    // eigenvalues of b
        Eigen::VectorXd w;      // thermal weights, renormalized on truncation
        Eigen::MatrixXd sigma;  // V^T diag(w) V
    };
    std::vector<ModeData> m_modes;
    int m_n;

    ModeData prepare_mode(const BathMode& md) const {
        ModeData pm;
        pm.omega = md.omega;
        pm.g = md.g;
        pm.b = Eigen::MatrixXd::Zero(m_n, m_n);
        for (int k = 0; k + 1 < m_n; ++k) {
            const double e = md.g * std::sqrt(double(k + 1));
            pm.b(k, k + 1) = e;
            pm.b(k + 1, k) = e;
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(pm.b);
        if (es.info() != Eigen::Success)
            throw ConvergenceError("oracle bath: coupling eigensolve failed");
        pm.v = es.eigenvectors();
        pm.lam = es.eigenvalues();
        pm.w = Eigen::VectorXd(m_n);
        double z = 0.0;
        for (int k = 0; k < m_n; ++k) {
            pm.w[k] = std::exp(-md.omega * double(k));
            z += pm.w[k];
        }
        pm.w /= z;
        pm.sigma = pm.v.transpose() * pm.w.asDiagonal() * pm.v;
        return pm;
    }

    std::complex<double> ordered_product(const LinearDrive& da,
                                         const LinearDrive& db, double t,
                                         int steps) const {
        const double dtau = t / double(steps);
        std::complex<double> total(1.0, 0.0);
        for (const auto& pm : m_modes) {
            // Free half-step phases; the zero-point term cancels between the
            // two branches, so H = omega * n suffices.
            Eigen::VectorXcd free_step(m_n);
            for (int k = 0; k < m_n; ++k)
                free_step[k] = std::exp(
                    std::complex<double>(0.0, -pm.omega * double(k) * dtau));
            const Eigen::MatrixXcd w_step =
                pm.v.transpose() * free_step.asDiagonal() *
                pm.v.cast<std::complex<double>>();

            auto slice = [&](const LinearDrive& dr, int k) {
                const double tau = (double(k) - 0.5) * dtau;
                const double f = dr.a + dr.b * tau;
                Eigen::VectorXcd d(m_n);
                for (int i = 0; i < m_n; ++i)
                    d[i] = std::exp(
                        std::complex<double>(0.0, -dtau * f * pm.lam[i]));
                return d;
            };

            Eigen::MatrixXcd acc_a =
                Eigen::MatrixXcd(slice(da, 1).asDiagonal());
            Eigen::MatrixXcd acc_b =
                Eigen::MatrixXcd(slice(db, 1).asDiagonal());
            for (int k = 2; k <= steps; ++k) {
                acc_a = slice(da, k).asDiagonal() * (w_step * acc_a);
                acc_b = slice(db, k).asDiagonal() * (w_step * acc_b);
            }
            total *= (acc_b.adjoint() * acc_a * pm.sigma).trace();
        }
        return total;
    }
};

inline std::complex<double> discrete_correlator(const DiscreteBath& bath,
                                                double t) {
    return bath.correlator(t);
}

inline std::complex<double> exact_decoherence_factor(const DiscreteBath& bath,
                                                     const LinearDrive& drive_a,
                                                     const LinearDrive& drive_b,
                                                     double t, int steps) {
    return bath.exact_factor(drive_a, drive_b, t, steps);
}

// Record-branch fragment driving the oracle comparison.
struct OracleSetup {
    double eps = 1.0;
    double s = 0.0, sp = 1.0;
    double x = 0.0, xp = 0.0;
};

struct OracleRow {
    double t = 0.0;
    double exact_mod = 0.0;
    double exact_phase = 0.0;
    double gauss_mod = 0.0;
    double rel_dev = 0.0;
};

struct OracleReport {
    std::vector<OracleRow> rows;
    double max_rel_dev = 0.0;
};

/* Batch comparison of the brute-force factor against the Gaussian formula fed
 * with the same bath's correlator. For linear coupling the two agree exactly
 * in principle; the residual is truncation plus time-step error. */
inline OracleReport compare_with_qclt(const DiscreteBath& bath,
                                      const OracleSetup& setup,
                                      const std::vector<double>& t_grid,
                                      int steps) {
    if (t_grid.empty()) throw ConfigError("oracle: empty time grid");
    double tmax = 0.0;
    for (double t : t_grid) {
        if (!(t >= 0.0)) throw ConfigError("oracle: times must be >= 0");
        tmax = std::max(tmax, t);
    }
    const BathCorrelator corr =
        BathCorrelator::from_modes(bath.modes(), std::max(1.05 * tmax, 1.0));
    OracleReport rep;
    rep.rows.reserve(t_grid.size());
    for (double t : t_grid) {
        const LinearDrive da = make_drive(setup.x, setup.eps, setup.s, t);
        const LinearDrive db = make_drive(setup.xp, setup.eps, setup.sp, t);
        const std::complex<double> exact =
            exact_decoherence_factor(bath, da, db, t, steps);
        OracleRow row;
        row.t = t;
        row.exact_mod = std::abs(exact);
        row.exact_phase = std::arg(exact);
        row.gauss_mod =
            std::exp(-d_path(corr, db.a - da.a, db.b - da.b, t));
        row.rel_dev = std::abs(row.exact_mod - row.gauss_mod) / row.gauss_mod;
        rep.rows.push_back(row);
        rep.max_rel_dev = std::max(rep.max_rel_dev, row.rel_dev);
    }
    return rep;
}

} // namespace decoh

#endif
