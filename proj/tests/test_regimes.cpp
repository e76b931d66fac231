#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "decoh/correlator.hpp"
#include "decoh/errors.hpp"
#include "decoh/regimes.hpp"
#include "decoh/spectral.hpp"
#include "helpers.hpp"

using Catch::Approx;
using namespace decoh;
using testutil::rel_err;

namespace {

const BathCorrelator& spectral_corr(int m) {
    static const BathCorrelator c1 =
        BathCorrelator::from_spectral(make_spectral_model(1, 5.0), 12.0);
    static const BathCorrelator c3 =
        BathCorrelator::from_spectral(make_spectral_model(3, 5.0), 12.0);
    static const BathCorrelator c5 =
        BathCorrelator::from_spectral(make_spectral_model(5, 5.0), 12.0);
    switch (m) {
        case 1: return c1;
        case 3: return c3;
        default: return c5;
    }
}

const Figure1Curve& curve(int m) {
    static const std::vector<double> grid = log_grid(0.01, 100.0, 25);
    static const Figure1Curve f1 = figure1_curve(make_spectral_model(1, 5.0), grid);
    static const Figure1Curve f3 = figure1_curve(make_spectral_model(3, 5.0), grid);
    static const Figure1Curve f5 = figure1_curve(make_spectral_model(5, 5.0), grid);
    switch (m) {
        case 1: return f1;
        case 3: return f3;
        default: return f5;
    }
}

// Least-squares slope of ln(x) against ln(t) over rows with t >= t_lo.
double log_slope(const Figure1Curve& fc, double t_lo) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (const Figure1Row& r : fc.rows) {
        if (r.tdec_numeric < t_lo) continue;
        const double lx = std::log(r.tdec_numeric);
        const double ly = std::log(r.tent_over_eta);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    REQUIRE(n >= 4);
    return (double(n) * sxy - sx * sy) / (double(n) * sxx - sx * sx);
}

} // namespace

TEST_CASE("entanglement and interaction times", "[regimes]") {
    REQUIRE(entanglement_time(0.5, 2.0, 1.0) == Approx(0.25).epsilon(1e-15));
    REQUIRE(interaction_time(20.0, 2.0, 1.0) == Approx(10.0).epsilon(1e-15));

    // The ratio t_int / t_ent is the barrier-to-spread ratio, coupling-free.
    const double w = 17.0, de = 1.3;
    REQUIRE(interaction_time(w, 0.7, 2.0) / entanglement_time(de, 0.7, 2.0) ==
            Approx(w / de).epsilon(1e-13));

    REQUIRE_THROWS_AS(entanglement_time(0.0, 1.0, 1.0), DomainError);
    REQUIRE_THROWS_AS(entanglement_time(1.0, 0.0, 1.0), DomainError);
    REQUIRE_THROWS_AS(entanglement_time(1.0, 1.0, 0.0), DomainError);
    REQUIRE_THROWS_AS(interaction_time(-2.0, 1.0, 1.0), DomainError);
    REQUIRE_THROWS_AS(interaction_time(1.0, -1.0, 1.0), DomainError);
    REQUIRE_THROWS_WITH(interaction_time(1.0, 1.0, 0.0),
                        Catch::Matchers::ContainsSubstring("degenerate"));
}

TEST_CASE("long-time growth coefficients match the spectral moments", "[regimes]") {
    const MarkovAsymptote m1 = markov_coefficient(spectral_corr(1));
    const MarkovAsymptote m3 = markov_coefficient(spectral_corr(3));
    const MarkovAsymptote m5 = markov_coefficient(spectral_corr(5));

    REQUIRE(m1.gamma == 3.0);
    REQUIRE(m3.gamma == 2.0);
    REQUIRE(m5.gamma == 2.0);

    // Independently computed from high-precision quadrature of the
    // zero-frequency weight (m = 1) / first correlator moment (m >= 3).
    REQUIRE(rel_err(m1.c, 14.706416703176137) < 1e-9);
    REQUIRE(rel_err(m3.c, 41.556532813890816) < 1e-9);
    REQUIRE(rel_err(m5.c, 98.151989061835889) < 1e-9);

    // c is built from the correlator integrals themselves.
    REQUIRE(m1.c == Approx(3.0 / spectral_corr(1).i0()).epsilon(1e-14));
    REQUIRE(m3.c == Approx(2.0 / std::abs(spectral_corr(3).i1())).epsilon(1e-14));
}

TEST_CASE("growth-law coefficients reject unsuitable baths", "[regimes]") {
    const BathCorrelator expc = BathCorrelator::exponential(1.0, 40.0);
    REQUIRE_THROWS_AS(markov_coefficient(expc), ConfigError);
    const BathCorrelator disc =
        BathCorrelator::from_modes({{0.7, 0.3}, {1.3, 0.3}}, 12.0);
    REQUIRE_THROWS_AS(markov_coefficient(disc), ConfigError);
}

TEST_CASE("decoherence-time curves: order, bounds, asymptotic slopes", "[regimes]") {
    for (int m : {1, 3, 5}) {
        const Figure1Curve& fc = curve(m);
        REQUIRE(fc.m == m);
        REQUIRE(fc.cutoff == 5.0);
        REQUIRE(fc.rows.size() == 25);
        REQUIRE(fc.gamma == (m == 1 ? 3.0 : 2.0));

        for (std::size_t i = 0; i + 1 < fc.rows.size(); ++i) {
            REQUIRE(fc.rows[i].tent_over_eta < fc.rows[i + 1].tent_over_eta);
            REQUIRE(fc.rows[i].tdec_numeric < fc.rows[i + 1].tdec_numeric);
        }
        for (const Figure1Row& r : fc.rows) {
            /* Re h <= Re h(0) = 1 forces K(t) <= t^4/8, so the numeric
             * decoherence time can never undercut the slow closed form. */
            REQUIRE(r.tdec_numeric >= r.tdec_slow * (1.0 - 1e-12));
            REQUIRE(r.tdec_slow ==
                    Approx(std::pow(2.0, 0.75) * std::sqrt(r.tent_over_eta))
                        .epsilon(1e-12));
            REQUIRE(r.tdec_markov ==
                    Approx(std::pow(fc.c_m * r.tent_over_eta * r.tent_over_eta,
                                    1.0 / fc.gamma))
                        .epsilon(1e-12));
        }

        // Both closed forms meet the numeric curve at their ends of validity.
        REQUIRE(rel_err(fc.rows.front().tdec_slow,
                        fc.rows.front().tdec_numeric) < 0.02);
        REQUIRE(rel_err(fc.rows.back().tdec_markov,
                        fc.rows.back().tdec_numeric) < 0.10);

        // Fitted long-time power: x ~ t^{gamma/2} over the top decade.
        const double gamma_est = 2.0 * log_slope(fc, 20.0);
        REQUIRE(std::abs(gamma_est - fc.gamma) < 0.05);
    }
}

TEST_CASE("only the zero-frequency family overtakes the entanglement time",
          "[regimes]") {
    const Figure1Curve& f1 = curve(1);
    // Deep in the fast-bath region the m = 1 decoherence time drops below
    // t_ent (eta = 1); near the memory time it sits above.
    REQUIRE(f1.rows.back().tdec_numeric < f1.rows.back().tent_over_eta);
    REQUIRE(f1.rows.front().tdec_numeric > f1.rows.front().tent_over_eta);

    // Asymptotically the crossing sits exactly at x = c_1.
    const RegimeInputs in1 = make_regime_inputs(1.0, spectral_corr(1));
    const double c1 = markov_coefficient(spectral_corr(1)).c;
    REQUIRE(asymptotic_tdec_markov(in1, 1.2 * c1).tdec < 1.2 * c1);
    REQUIRE(asymptotic_tdec_markov(in1, 0.8 * c1).tdec > 0.8 * c1);

    // Super-Ohmic curves stay above t_ent everywhere (c_m > 1, gamma = 2).
    for (int m : {3, 5}) {
        REQUIRE(curve(m).c_m > 1.0);
        for (const Figure1Row& r : curve(m).rows)
            REQUIRE(r.tdec_numeric > r.tent_over_eta);
    }
}

TEST_CASE("inverting the decoherence condition closes the loop", "[regimes]") {
    const BathCorrelator& c1 = spectral_corr(1);
    for (double td : {0.3, 1.7, 8.0}) {
        const double x = tent_from_tdec(c1, 1.0, td); // sqrt(K(td))
        REQUIRE(x == Approx(std::sqrt(kernel_K(c1, td).value)).epsilon(1e-14));
        REQUIRE(rel_err(decoherence_time(c1, 1.0 / x), td) < 1e-6);
    }
    const RegimeInputs in2 = make_regime_inputs(2.0, c1);
    REQUIRE(tent_from_tdec(in2, 1.7) ==
            Approx(2.0 * tent_from_tdec(c1, 1.0, 1.7)).epsilon(1e-14));
}

TEST_CASE("regime classification thresholds", "[regimes]") {
    REQUIRE(classify_regime(0.29) == Regime::InteractionDominated);
    REQUIRE(classify_regime(0.3) == Regime::Crossover);
    REQUIRE(classify_regime(1.0) == Regime::Crossover);
    REQUIRE(classify_regime(3.0) == Regime::Crossover);
    REQUIRE(classify_regime(3.1) == Regime::Markovian);
    REQUIRE_THROWS_AS(classify_regime(0.0), ConfigError);
    REQUIRE_THROWS_AS(classify_regime(-2.0), ConfigError);

    REQUIRE(to_string(Regime::InteractionDominated) == "interaction_dominated");
    REQUIRE(to_string(Regime::Crossover) == "crossover");
    REQUIRE(to_string(Regime::Markovian) == "markovian");
}

TEST_CASE("asymptote helpers: values, validity flags, rejections", "[regimes]") {
    const SlowAsymptote fast = asymptotic_tdec_slow(2.0, 0.02);
    REQUIRE(fast.tdec == Approx(std::pow(2.0, 0.75) * 0.1).epsilon(1e-14));
    REQUIRE(fast.exponent == 4);
    REQUIRE(fast.valid);

    const SlowAsymptote slow = asymptotic_tdec_slow(1.0, 2.0);
    REQUIRE_FALSE(slow.valid); // 2^{3/4} sqrt(2) ~ 2.4 exceeds the memory time
    REQUIRE_THROWS_AS(asymptotic_tdec_slow(0.0, 1.0), ConfigError);
    REQUIRE_THROWS_AS(asymptotic_tdec_slow(1.0, -1.0), ConfigError);

    const RegimeInputs in1 = make_regime_inputs(1.0, spectral_corr(1));
    const MarkovAsymptoteResult far = asymptotic_tdec_markov(in1, 10.0);
    REQUIRE(far.gamma == 3.0);
    REQUIRE(far.tdec == Approx(std::cbrt(far.c_m * 100.0)).epsilon(1e-14));
    REQUIRE(far.valid);
    REQUIRE_FALSE(asymptotic_tdec_markov(in1, 0.1).valid);
    REQUIRE_THROWS_AS(asymptotic_tdec_markov(in1, 0.0), ConfigError);
    REQUIRE_THROWS_AS(make_regime_inputs(0.0, spectral_corr(1)), ConfigError);

    RegimeInputs missing;
    missing.eta = 1.0;
    REQUIRE_THROWS_AS(tent_from_tdec(missing, 1.0), ConfigError);
    REQUIRE_THROWS_AS(asymptotic_tdec_markov(missing, 1.0), ConfigError);
}

TEST_CASE("log grid contract", "[regimes]") {
    const std::vector<double> g = log_grid(0.02, 50.0, 9);
    REQUIRE(g.size() == 9);
    REQUIRE(g.front() == 0.02);
    REQUIRE(g.back() == 50.0);
    const double ratio = g[1] / g[0];
    for (std::size_t i = 0; i + 1 < g.size(); ++i) {
        REQUIRE(g[i] < g[i + 1]);
        REQUIRE(g[i + 1] / g[i] == Approx(ratio).epsilon(1e-12));
    }
    REQUIRE(log_grid(1.0, 2.0, 2) == std::vector<double>{1.0, 2.0});
    REQUIRE_THROWS_AS(log_grid(0.0, 1.0, 5), ConfigError);
    REQUIRE_THROWS_AS(log_grid(-1.0, 1.0, 5), ConfigError);
    REQUIRE_THROWS_AS(log_grid(2.0, 2.0, 5), ConfigError);
    REQUIRE_THROWS_AS(log_grid(3.0, 2.0, 5), ConfigError);
    REQUIRE_THROWS_AS(log_grid(1.0, 2.0, 1), ConfigError);
}

TEST_CASE("curve construction rejects unusable inputs", "[regimes]") {
    const BathCorrelator expc = BathCorrelator::exponential(1.0, 40.0);
    REQUIRE_THROWS_AS(figure1_curve(expc, {1.0, 2.0}), ConfigError);
    REQUIRE_THROWS_AS(figure1_curve(spectral_corr(1), {1.0, 0.0}), ConfigError);
    REQUIRE_THROWS_AS(figure1_curve(spectral_corr(1), {-1.0}), ConfigError);
    REQUIRE_THROWS_AS(figure1_curve(make_spectral_model(1, 5.0), {}), ConfigError);

    // Convenience overload builds the same deterministic tables.
    const std::vector<double> grid = {0.5, 1.0, 2.0};
    const Figure1Curve a = figure1_curve(make_spectral_model(3, 5.0), grid);
    const BathCorrelator manual =
        BathCorrelator::from_spectral(make_spectral_model(3, 5.0), 1.02 * 2.0 + 1.0);
    const Figure1Curve b = figure1_curve(manual, grid);
    REQUIRE(a.rows.size() == b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        REQUIRE(a.rows[i].tent_over_eta ==
                Approx(b.rows[i].tent_over_eta).epsilon(1e-13));
        REQUIRE(a.rows[i].tdec_numeric == b.rows[i].tdec_numeric);
    }
}
