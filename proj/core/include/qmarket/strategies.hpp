#pragma once

#include <complex>
#include <vector>

#include "qmarket/grid.hpp"
#include "qmarket/phase_grid.hpp"
#include "qmarket/wavefunction.hpp"

namespace qmarket {

// Correlated coherent strategy parameters: correlation r in (-1, 1), scale
// eta > 0, and the demand/supply centers q0/p0 that fix the eigenvalue of the
// annihilation operator.
struct CoherentParams {
    double r = 0.0;
    double eta = 1.0;
    double q0 = 0.0;
    double p0 = 0.0;

    void validate() const;
};

// Annihilation operator of the correlated coherent family,
//   C(r, eta) = (1 / 2 eta) (1 - i r / sqrt(1 - r^2)) Q + i eta P.
// With the forward transform kernel exp(-i p q / hbar_e) used throughout,
// this sign of the imaginary part makes the eigenstates carry measured
// correlation corr(Q, P) = +r. (The conjugate sign would flip it to -r; the
// two are mirror conventions tied to the transform's sign choice.)
Wavefunction apply_annihilation(const Wavefunction& psi, const CoherentParams& cp);

// Eigenvalue c = <C> fixed by <Q> = q0, <P> = p0.
std::complex<double> coherent_eigenvalue(const CoherentParams& cp, double hbar_e);

// ||(C - c) psi|| / ||psi|| of the annihilation eigenrelation.
double annihilation_residual(const Wavefunction& psi, const CoherentParams& cp);

// Normalized Gaussian solving (C - c) psi = 0. Throws GridTooSmall when the
// state leaves more than 1e-10 of its mass in the outer 5% of the grid.
//
// Two eta-parameterizations circulate for this family. Solving the
// eigenproblem directly, as done here, gives
//   delta_q = eta sqrt(hbar_e),  delta_p = sqrt(hbar_e) / (2 eta sqrt(1-r^2));
// the alternative bookkeeping assigns delta_p = hbar_e / (2 eta) and
// delta_q = eta / sqrt(1-r^2). Both saturate
// delta_p delta_q sqrt(1-r^2) = hbar_e / 2 and agree on corr = r; only the
// role of eta as a dial differs. This module follows the direct solution.
Wavefunction coherent_strategy(const CoherentParams& cp, const Grid& grid, double hbar_e);

// Position/momentum dispersions and the symmetrized covariance
// <(QP + PQ)/2> - <Q><P> (the Wigner-function covariance).
struct Dispersions {
    double delta_q = 0.0;
    double delta_p = 0.0;
    double covariance = 0.0;
    double corr = 0.0; // covariance / (delta_q * delta_p)
};

Dispersions dispersions(const Wavefunction& psi);

// Gaussian stand-in for the non-normalizable sharp-price strategy <q|a>:
// density std-dev epsilon around the log-price a, quoting price exp(a).
struct DeltaStrategy {
    Wavefunction state;
    double log_price = 0.0;
    double price = 1.0;
};

// Requires a in the grid interior and epsilon >= 4 * spacing (the
// resolvability floor for the regularized width).
DeltaStrategy delta_strategy(double a, double epsilon, const Grid& grid, double hbar_e = 1.0);

// Two-player intention density: the product of Alice's position density and
// Bob's momentum density over the (q, p) rectangle. Separable by construction
// with unit mass.
struct IntentionDensity {
    PhaseGrid grid;
    std::vector<double> values; // row-major, see PhaseGrid::index

    double value(int iq, int ip) const { return values[grid.index(iq, ip)]; }
    double mass() const;
    std::vector<double> q_marginal() const;
    std::vector<double> p_marginal() const;
};

IntentionDensity intention_density(const Wavefunction& alice, const Wavefunction& bob);

// Integrated acceptance curve of a sampled 1-D density. Cell integrals use
// the derivative-corrected trapezoid rule and partial cells a cubic Hermite
// model, so off-grid evaluations keep quadrature error at O(spacing^4).
class CumulativeDensity {
public:
    static CumulativeDensity from_state(const Wavefunction& psi);

    // P[X <= x], clamped to [0, 1]; reaches 1 at the upper grid edge.
    double mass_below(double x) const;
    double mass_above(double x) const { return 1.0 - mass_below(x); }

    const Grid& grid() const { return grid_; }

private:
    explicit CumulativeDensity(const Grid& grid) : grid_(grid) {}

    Grid grid_;
    std::vector<double> density_; // n + 1 samples, ghost zero past the edge
    std::vector<double> deriv_;
    std::vector<double> cell_;    // per-cell integrals, clamped >= 0
    std::vector<double> cum_;     // prefix sums, cum_[n] = total
    double total_ = 1.0;
};

// Probability that a buyer revealing log-price q accepts the market log-price
// x: accepted iff x >= q, i.e. the position-density mass on {q <= x}.
// Monotone non-decreasing in x. psi must be position-representation.
double demand_profile(const Wavefunction& psi, double x);

// Probability that a seller revealing log-price p accepts the market
// log-price x: mass of the momentum density on {p >= x}. Monotone
// non-increasing in x. psi must be momentum-representation.
double supply_profile(const Wavefunction& psi, double x);

} // namespace qmarket
