#pragma once

#include <vector>

#include "qmarket/phase_grid.hpp"
#include "qmarket/risk.hpp"

namespace qmarket {

enum class PhaseDensityKind { WignerPure, Thermal };

// Real density over a phase grid. Pure Wigner measures of excited states take
// negative values; thermal densities are non-negative.
struct PhaseDensity {
    PhaseGrid grid;
    std::vector<double> values; // row-major, see PhaseGrid::index
    PhaseDensityKind kind = PhaseDensityKind::WignerPure;
    int level = 0;     // meaningful for WignerPure
    double beta = 0.0; // meaningful for Thermal

    double value(int iq, int ip) const { return values[grid.index(iq, ip)]; }
    double mass() const;
    double min_value() const;
    std::vector<double> q_marginal() const; // integrated over p
    std::vector<double> p_marginal() const;
};

// L_n(x) by the three-term recurrence
//   (k+1) L_{k+1} = (2k+1-x) L_k - k L_{k-1},
// stable through n = 60. May overflow for very large x; the Wigner routines
// use the exponentially weighted form internally instead.
double laguerre(int n, double x);

// e^{-x/2} L_n(x); bounded by 1 for x >= 0, safe at any grid corner.
double weighted_laguerre(int n, double x);

// Wigner measure of the n-th eigenstate of the risk operator,
//   W_n = ((-1)^n / (pi hbar)) e^{-2H/(hbar omega)} L_n(4H/(hbar omega)),
// with H the classical quadratic form and hbar the effective constant.
// Throws GridTooSmall when the boundary density exceeds 1e-12 of the peak.
PhaseDensity wigner_excited(int n, const RiskParams& params, const PhaseGrid& pgrid);

// Geometric Gibbs weights w_n = e^{-beta n hbar omega} (1 - e^{-beta hbar omega})
// for n <= n_max, plus the exact tail 1 - sum w_n of the discarded levels.
struct GibbsWeights {
    std::vector<double> w;
    double tail = 0.0;
};

GibbsWeights gibbs_weights(double beta, const RiskParams& params, int n_max);

// Inverse risk-temperature and the closed-form exponent scale
// x = (2 / (hbar omega)) tanh(beta hbar omega / 2).
struct ThermalParams {
    double beta = 1.0;
    double x = 0.0;
};

ThermalParams thermal_params(double beta, const RiskParams& params);

// Closed-form thermal strategy density rho_beta = (omega / 2 pi) x e^{-x H}.
PhaseDensity thermal_density(double beta, const RiskParams& params, const PhaseGrid& pgrid);

// Phase-space average of the classical risk H against rho. Throws
// GridTooSmall when the boundary density exceeds 1e-12 of the peak.
double mean_risk(const PhaseDensity& rho, const RiskParams& params);

// Differential entropy -sum rho ln rho dq dp. Defined for non-negative
// densities only (thermal or the ground Wigner measure); cells below 1e-300
// contribute zero. Throws DomainError on negative cells.
double entropy(const PhaseDensity& rho);

// Centered phase grid sized by the 8-sigma heuristic: half-widths at least
// 8 * max(delta_q, delta_p) of the requested level (or thermal state).
PhaseGrid phase_grid_for_level(const RiskParams& params, int n, int n_points = 256);
PhaseGrid phase_grid_for_thermal(const RiskParams& params, double beta, int n_points = 256);

} // namespace qmarket
