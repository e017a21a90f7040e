#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "qmarket/errors.hpp"
#include "qmarket/risk.hpp"
#include "qmarket/strategies.hpp"
#include "testutil.hpp"

using namespace qmarket;

namespace {

// Wide enough that even the eta = 2 states keep their edge amplitudes below
// the 1e-8 eigenrelation residual target.
const Grid kGrid(-20.0, 20.0, 1024);

} // namespace

TEST_CASE("coherent params validation") {
    CHECK_THROWS_AS((CoherentParams{1.0, 1.0}.validate()), DomainError);
    CHECK_THROWS_AS((CoherentParams{-1.0, 1.0}.validate()), DomainError);
    CHECK_THROWS_AS((CoherentParams{0.0, 0.0}.validate()), DomainError);
    CHECK_THROWS_AS((coherent_strategy(CoherentParams{1.2, 1.0}, kGrid, 1.0)), DomainError);
}

TEST_CASE("uncorrelated coherent state is the minimal-uncertainty gaussian") {
    const CoherentParams cp{0.0, 1.0, 0.0, 0.0};
    const Wavefunction psi = coherent_strategy(cp, kGrid, 1.0);
    CHECK(annihilation_residual(psi, cp) < 1e-8);
    const Dispersions d = dispersions(psi);
    CHECK(d.delta_q * d.delta_p == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(std::abs(d.covariance) < 1e-9);
}

TEST_CASE("correlated coherent lattice: residual, saturation, correlation") {
    for (const double r : {-0.9, -0.5, 0.0, 0.5, 0.9}) {
        for (const double eta : {0.5, 1.0, 2.0}) {
            CAPTURE(r);
            CAPTURE(eta);
            const CoherentParams cp{r, eta, 0.0, 0.0};
            const Wavefunction psi = coherent_strategy(cp, kGrid, 1.0);
            CHECK(annihilation_residual(psi, cp) < 1e-8);
            const Dispersions d = dispersions(psi);
            CHECK(d.delta_p * d.delta_q * std::sqrt(1.0 - r * r) ==
                  doctest::Approx(0.5).epsilon(1e-6));
            CHECK(d.corr == doctest::Approx(r).epsilon(1e-5));
        }
    }
}

TEST_CASE("coherent centers follow q0 and p0") {
    const CoherentParams cp{0.4, 1.3, 1.5, -0.8};
    const Wavefunction psi = coherent_strategy(cp, kGrid, 1.0);
    CHECK(moments(psi).mean == doctest::Approx(1.5).epsilon(1e-8));
    CHECK(moments(change_representation(psi)).mean == doctest::Approx(-0.8).epsilon(1e-8));
    CHECK(annihilation_residual(psi, cp) < 1e-8);
}

TEST_CASE("covariance agrees with the wigner-transform oracle") {
    const Grid grid(-16.0, 16.0, 256);
    const Grid p_axis(-5.0, 5.0, 256); // 8 sigma_p, well below the alias limit
    const CoherentParams cp{0.6, 1.0, 0.0, 0.0};
    const Wavefunction psi = coherent_strategy(cp, grid, 1.0);

    const auto w = testutil::wigner_of_state(psi, p_axis);
    const auto stats = testutil::wigner_stats(w, grid, p_axis);
    CHECK(stats.mass == doctest::Approx(1.0).epsilon(1e-8));

    const Dispersions d = dispersions(psi);
    CHECK(stats.cov_qp == doctest::Approx(d.covariance).epsilon(1e-5));
    const double oracle_corr = stats.cov_qp / std::sqrt(stats.var_q * stats.var_p);
    CHECK(oracle_corr == doctest::Approx(0.6).epsilon(1e-5));
    CHECK(d.corr == doctest::Approx(0.6).epsilon(1e-6));
}

TEST_CASE("coherent strategy rejects grids it does not fit") {
    CHECK_THROWS_AS((coherent_strategy(CoherentParams{0.0, 2.0}, Grid(-10.0, 10.0, 1024), 1.0)),
                    GridTooSmall);
}

TEST_CASE("dispersions of risk eigenstates") {
    const Grid grid(-10.0, 10.0, 512);
    const SpectralResult sr = spectrum(RiskParams{}, grid, 2);

    const Dispersions ground = dispersions(sr.eigenstates[0]);
    CHECK(ground.delta_q == doctest::Approx(std::sqrt(0.5)).epsilon(1e-6));
    CHECK(ground.delta_p == doctest::Approx(std::sqrt(0.5)).epsilon(1e-6));
    CHECK(std::abs(ground.covariance) < 1e-8);

    const Dispersions excited = dispersions(sr.eigenstates[1]);
    CHECK(excited.delta_q * excited.delta_p == doctest::Approx(1.5).epsilon(1e-5));
}

TEST_CASE("heisenberg-like bound holds for random superpositions") {
    const Grid grid(-10.0, 10.0, 512);
    const SpectralResult sr = spectrum(RiskParams{}, grid, 6);
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const Wavefunction psi = testutil::random_superposition(sr.eigenstates, seed);
        const Dispersions d = dispersions(psi);
        CHECK(d.delta_p * d.delta_q * std::sqrt(1.0 - d.corr * d.corr) >= 0.5 - 1e-9);
    }
}

TEST_CASE("delta strategies quote exp(a)") {
    const Grid grid(-10.0, 10.0, 1024);
    CHECK(delta_strategy(0.0, 0.5, grid).price == doctest::Approx(1.0));
    CHECK(delta_strategy(std::log(2.0), 0.5, grid).price == doctest::Approx(2.0));

    const Moments wide = moments(delta_strategy(0.0, 0.4, grid).state);
    const Moments narrow = moments(delta_strategy(0.0, 0.2, grid).state);
    CHECK(std::sqrt(narrow.variance) ==
          doctest::Approx(0.5 * std::sqrt(wide.variance)).epsilon(1e-8));

    CHECK_THROWS_AS(delta_strategy(0.0, 0.5 * grid.spacing(), grid), DomainError);
    CHECK_THROWS_AS(delta_strategy(-11.0, 0.5, grid), DomainError);
}

TEST_CASE("intention density is a separable unit-mass product") {
    const Grid grid(-10.0, 10.0, 256);
    const Wavefunction alice =
        gaussian_state(grid, 0.0, std::sqrt(0.5), Representation::Position, 1.0);
    const Wavefunction bob =
        gaussian_state(grid, 0.0, std::sqrt(0.5), Representation::Momentum, 1.0);

    const IntentionDensity d = intention_density(alice, bob);
    CHECK(d.mass() == doctest::Approx(1.0).epsilon(1e-8));

    // |psi(0)|^2 = 1/sqrt(pi) per factor
    const int iq = grid.nearest_index(0.0);
    CHECK(d.value(iq, iq) == doctest::Approx(1.0 / testutil::kPi).epsilon(1e-6));

    // same state both sides: symmetric under (q, p) swap
    double asym = 0.0;
    for (int a = 0; a < d.grid.nq(); ++a) {
        for (int b = 0; b < d.grid.np(); ++b) {
            asym = std::max(asym, std::abs(d.value(a, b) - d.value(b, a)));
        }
    }
    CHECK(asym < 1e-12);

    // marginals reproduce the single-player densities
    const auto mq = d.q_marginal();
    const double sa = alice.squared_norm();
    double marg_err = 0.0;
    for (int i = 0; i < grid.n_points(); ++i) {
        marg_err = std::max(marg_err, std::abs(mq[static_cast<size_t>(i)] -
                                               std::norm(alice.amplitude(i)) / sa));
    }
    CHECK(marg_err < 1e-10);

    CHECK_THROWS_AS(intention_density(bob, bob), DomainError);
    CHECK_THROWS_AS(intention_density(alice, alice), DomainError);
}

TEST_CASE("demand profile matches the error-function oracle") {
    const Grid grid(-10.0, 10.0, 1024);
    const Wavefunction psi = gaussian_state(grid, 0.0, 1.0, Representation::Position, 1.0);

    CHECK(demand_profile(psi, 0.0) == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(demand_profile(psi, grid.q_max()) == doctest::Approx(1.0).epsilon(1e-10));
    const double phi1 = 0.5 * (1.0 + std::erf(1.0 / std::sqrt(2.0)));
    CHECK(demand_profile(psi, 1.0) == doctest::Approx(phi1).epsilon(1e-6));
    CHECK(demand_profile(psi, -2.5) ==
          doctest::Approx(0.5 * (1.0 + std::erf(-2.5 / std::sqrt(2.0)))).epsilon(1e-6));
}

TEST_CASE("profiles are monotone and complementary") {
    const Grid grid(-10.0, 10.0, 512);
    const Wavefunction pos = gaussian_state(grid, 0.3, 0.9, Representation::Position, 1.0);
    const Wavefunction mom = gaussian_state(grid, -0.2, 1.4, Representation::Momentum, 1.0);

    double prev_d = -1.0;
    double prev_s = 2.0;
    for (int i = 0; i <= 200; ++i) {
        const double x = -10.0 + 20.0 * i / 200.0;
        const double dmd = demand_profile(pos, x);
        const double sup = supply_profile(mom, x);
        CHECK(dmd >= prev_d - 1e-14);
        CHECK(sup <= prev_s + 1e-14);
        CHECK(dmd >= 0.0);
        CHECK(dmd <= 1.0);
        CHECK(sup >= 0.0);
        CHECK(sup <= 1.0);
        prev_d = dmd;
        prev_s = sup;
    }

    CHECK_THROWS_AS(demand_profile(mom, 0.0), DomainError);
    CHECK_THROWS_AS(supply_profile(pos, 0.0), DomainError);

    const Wavefunction dead(grid, std::vector<std::complex<double>>(512, 0.0),
                            Representation::Position, 1.0);
    CHECK_THROWS_AS(demand_profile(dead, 0.0), DegenerateState);
}
