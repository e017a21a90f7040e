#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "qmarket/errors.hpp"
#include "qmarket/risk.hpp"
#include "qmarket/wigner.hpp"
#include "testutil.hpp"

using namespace qmarket;

namespace {

const RiskParams kUnit{};

PhaseGrid square_grid(double half, int n) { return PhaseGrid{Grid(-half, half, n), Grid(-half, half, n)}; }

// Gibbs partial sum sum_{n<=n_max} w_n W_n assembled from the per-level
// route; the series oracle against the closed form.
std::vector<double> gibbs_partial_sum(double beta, const RiskParams& params,
                                      const PhaseGrid& pg, int n_max) {
    const GibbsWeights gw = gibbs_weights(beta, params, n_max);
    std::vector<double> acc(pg.size(), 0.0);
    for (int n = 0; n <= n_max; ++n) {
        const PhaseDensity w = wigner_excited(n, params, pg);
        for (size_t i = 0; i < acc.size(); ++i) {
            acc[i] += gw.w[static_cast<size_t>(n)] * w.values[i];
        }
    }
    return acc;
}

double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

} // namespace

TEST_CASE("laguerre recurrence") {
    CHECK(laguerre(0, 3.7) == 1.0);
    CHECK(laguerre(0, -12.0) == 1.0);
    CHECK(laguerre(1, 2.0) == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(laguerre(5, 1.7) == doctest::Approx(testutil::laguerre_series(5, 1.7)).epsilon(1e-12));
    // the explicit series cancels heavily as n*x grows; compare at its own
    // conditioning, not the recurrence's
    for (int n : {2, 7, 13}) {
        for (double x : {0.1, 1.0, 4.5, 9.0}) {
            CHECK(laguerre(n, x) ==
                  doctest::Approx(testutil::laguerre_series(n, x)).epsilon(1e-9));
        }
    }
    CHECK_THROWS_AS(laguerre(-1, 0.0), DomainError);
}

TEST_CASE("weighted laguerre stays bounded at extreme arguments") {
    for (int n : {0, 5, 60}) {
        for (double x : {0.0, 10.0, 500.0, 3000.0}) {
            const double g = weighted_laguerre(n, x);
            CHECK(std::isfinite(g));
            CHECK(std::abs(g) <= 1.0 + 1e-12);
        }
    }
    CHECK(weighted_laguerre(7, 2.3) ==
          doctest::Approx(std::exp(-1.15) * laguerre(7, 2.3)).epsilon(1e-12));
}

TEST_CASE("wigner measures have unit mass and alternating centers") {
    const PhaseGrid pg = square_grid(10.0, 512);
    const int iq = pg.q_axis.nearest_index(0.0);
    const int ip = pg.p_axis.nearest_index(0.0);
    for (int n = 0; n <= 10; ++n) {
        const PhaseDensity w = wigner_excited(n, kUnit, pg);
        CHECK(std::abs(w.mass() - 1.0) < 1e-6);
        const double center = (n % 2 == 0 ? 1.0 : -1.0) / testutil::kPi;
        CHECK(std::abs(w.value(iq, ip) - center) < 1e-8);
    }
}

TEST_CASE("wigner q-marginal matches the eigensolver density") {
    const Grid axis(-10.0, 10.0, 512);
    const PhaseGrid pg{axis, axis};
    const SpectralResult sr = spectrum(kUnit, axis, 4);
    for (int n = 0; n < 4; ++n) {
        const PhaseDensity w = wigner_excited(n, kUnit, pg);
        const auto marginal = w.q_marginal();
        double sup = 0.0;
        for (int i = 0; i < axis.n_points(); ++i) {
            const double density = std::norm(sr.eigenstates[static_cast<size_t>(n)].amplitude(i));
            sup = std::max(sup, std::abs(marginal[static_cast<size_t>(i)] - density));
        }
        CHECK(sup < 1e-5);
    }
}

TEST_CASE("wigner rejects grids with live boundaries") {
    CHECK_THROWS_AS(wigner_excited(3, kUnit, square_grid(3.0, 64)), GridTooSmall);
    CHECK_THROWS_AS(wigner_excited(-1, kUnit, square_grid(10.0, 64)), DomainError);
}

TEST_CASE("gibbs weights form the geometric ladder") {
    // e^{-beta hbar omega} = 1/2
    const double beta = std::log(2.0);
    const GibbsWeights gw = gibbs_weights(beta, kUnit, 10);
    CHECK(gw.w[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(gw.w[1] == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(gw.w[2] == doctest::Approx(0.125).epsilon(1e-12));

    const GibbsWeights cold = gibbs_weights(50.0, kUnit, 4);
    CHECK(std::abs(cold.w[0] - 1.0) < 1e-20);

    const GibbsWeights any = gibbs_weights(0.8, kUnit, 60);
    double total = any.tail;
    for (const double w : any.w) total += w;
    CHECK(std::abs(total - 1.0) < 1e-12);

    CHECK_THROWS_AS(gibbs_weights(0.0, kUnit, 10), DomainError);
    CHECK_THROWS_AS(gibbs_weights(-1.0, kUnit, 10), DomainError);
}

TEST_CASE("thermal density: closed form against the series oracle") {
    // wide enough to hold W_60, whose turning radius is sqrt(2 * 60 + 1)
    const PhaseGrid pg = square_grid(16.0, 256);
    const double beta = 1.0; // beta hbar omega = 1 at unit config

    const PhaseDensity rho = thermal_density(beta, kUnit, pg);
    CHECK(std::abs(rho.mass() - 1.0) < 1e-6);
    CHECK(rho.min_value() >= 0.0);

    const auto series = gibbs_partial_sum(beta, kUnit, pg, 60);
    CHECK(sup_diff(series, rho.values) < 1e-6);

    // partial-sum error decreases monotonically with the truncation order,
    // until both sides sit on the floating-point floor
    double prev = 1e300;
    for (const int n_max : {5, 10, 20, 40, 60}) {
        const double err = sup_diff(gibbs_partial_sum(beta, kUnit, pg, n_max), rho.values);
        CHECK((err < prev || (err < 1e-12 && prev < 1e-12)));
        prev = err;
    }
}

TEST_CASE("cold thermal density collapses to the ground wigner measure") {
    const PhaseGrid pg = square_grid(10.0, 256);
    const PhaseDensity cold = thermal_density(50.0, kUnit, pg);
    const PhaseDensity w0 = wigner_excited(0, kUnit, pg);
    CHECK(sup_diff(cold.values, w0.values) < 1e-6);
}

TEST_CASE("mean risk of thermal and pure densities") {
    const PhaseGrid pg = square_grid(12.0, 256);
    for (const double beta : {0.5, 1.0, 2.0}) {
        const PhaseDensity rho = thermal_density(beta, kUnit, pg);
        const double x = thermal_params(beta, kUnit).x;
        CHECK(mean_risk(rho, kUnit) == doctest::Approx(1.0 / x).epsilon(1e-5));
    }
    CHECK(mean_risk(wigner_excited(0, kUnit, pg), kUnit) == doctest::Approx(0.5).epsilon(1e-5));
    CHECK(mean_risk(wigner_excited(1, kUnit, pg), kUnit) == doctest::Approx(1.5).epsilon(1e-5));
}

TEST_CASE("entropy of the ground measure and thermal ordering") {
    const PhaseGrid pg = square_grid(12.0, 256);
    const PhaseDensity w0 = wigner_excited(0, kUnit, pg);
    CHECK(entropy(w0) == doctest::Approx(1.0 + std::log(testutil::kPi)).epsilon(1e-4));

    const PhaseDensity warm = thermal_density(1.0, kUnit, pg);
    CHECK(entropy(warm) > entropy(w0));

    CHECK_THROWS_AS(entropy(wigner_excited(1, kUnit, pg)), DomainError);
}

TEST_CASE("thermal density maximizes entropy at fixed mean risk") {
    const PhaseGrid pg = square_grid(16.0, 512);

    // mixture of two thermals with the same mean risk as the reference
    const PhaseDensity hot = thermal_density(0.5, kUnit, pg);
    const PhaseDensity cool = thermal_density(2.0, kUnit, pg);
    PhaseDensity mix = hot;
    for (size_t i = 0; i < mix.values.size(); ++i) {
        mix.values[i] = 0.5 * (hot.values[i] + cool.values[i]);
    }
    const double target_mean = mean_risk(mix, kUnit);
    // invert mean = 1/x for the matching thermal state
    const double x_star = 1.0 / target_mean;
    const double beta_star = 2.0 * std::atanh(0.5 * x_star);
    const PhaseDensity reference = thermal_density(beta_star, kUnit, pg);
    CHECK(mean_risk(reference, kUnit) == doctest::Approx(target_mean).epsilon(1e-5));
    CHECK(entropy(mix) < entropy(reference));

    // flat-top comparison: uniform on {H <= R} with the same mean risk R/2
    const double radius_h = 2.0 * target_mean;
    PhaseDensity disc = reference;
    for (int iq = 0; iq < pg.nq(); ++iq) {
        for (int ip = 0; ip < pg.np(); ++ip) {
            const double h = kUnit.classical_energy(pg.q_axis.point(iq), pg.p_axis.point(ip));
            disc.values[pg.index(iq, ip)] =
                h <= radius_h ? 1.0 / (2.0 * testutil::kPi * radius_h) : 0.0;
        }
    }
    CHECK(mean_risk(disc, kUnit) == doctest::Approx(target_mean).epsilon(1e-2));
    CHECK(entropy(disc) < entropy(reference));
}

TEST_CASE("auto-sized phase grids hold their states") {
    const PhaseGrid for_n = phase_grid_for_level(kUnit, 10, 256);
    CHECK(std::abs(wigner_excited(10, kUnit, for_n).mass() - 1.0) < 1e-6);

    const PhaseGrid for_beta = phase_grid_for_thermal(kUnit, 0.25, 256);
    CHECK(std::abs(thermal_density(0.25, kUnit, for_beta).mass() - 1.0) < 1e-6);

    CHECK_THROWS_AS(mean_risk(thermal_density(0.25, kUnit, square_grid(3.0, 64)), kUnit),
                    GridTooSmall);
}
