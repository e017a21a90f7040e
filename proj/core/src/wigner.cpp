#include "qmarket/wigner.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qmarket/errors.hpp"

namespace qmarket {

namespace {

constexpr double kBoundaryFraction = 1e-12;

// Largest |value| on the outermost ring of cells vs the global peak; a
// density that has not decayed at the boundary does not fit the grid.
void check_boundary(const PhaseDensity& rho, const char* who) {
    const int nq = rho.grid.nq();
    const int np = rho.grid.np();
    double peak = 0.0;
    for (const double v : rho.values) peak = std::max(peak, std::abs(v));
    double edge = 0.0;
    for (int iq = 0; iq < nq; ++iq) {
        edge = std::max(edge, std::abs(rho.value(iq, 0)));
        edge = std::max(edge, std::abs(rho.value(iq, np - 1)));
    }
    for (int ip = 0; ip < np; ++ip) {
        edge = std::max(edge, std::abs(rho.value(0, ip)));
        edge = std::max(edge, std::abs(rho.value(nq - 1, ip)));
    }
    if (peak > 0.0 && edge > kBoundaryFraction * peak) {
        throw GridTooSmall(std::string(who) + ": boundary density " + std::to_string(edge) +
                           " exceeds 1e-12 of the peak; widen the phase grid");
    }
}

PhaseGrid centered_grid(const RiskParams& params, double half, int n_points) {
    return PhaseGrid{Grid(params.q0 - half, params.q0 + half, n_points),
                     Grid(params.p0 - half, params.p0 + half, n_points)};
}

} // namespace

double PhaseDensity::mass() const {
    double s = 0.0;
    for (const double v : values) s += v;
    return s * grid.cell_measure();
}

double PhaseDensity::min_value() const {
    double m = values.empty() ? 0.0 : values.front();
    for (const double v : values) m = std::min(m, v);
    return m;
}

std::vector<double> PhaseDensity::q_marginal() const {
    std::vector<double> out(static_cast<size_t>(grid.nq()), 0.0);
    for (int iq = 0; iq < grid.nq(); ++iq) {
        double s = 0.0;
        for (int ip = 0; ip < grid.np(); ++ip) s += value(iq, ip);
        out[static_cast<size_t>(iq)] = s * grid.p_axis.spacing();
    }
    return out;
}

std::vector<double> PhaseDensity::p_marginal() const {
    std::vector<double> out(static_cast<size_t>(grid.np()), 0.0);
    for (int ip = 0; ip < grid.np(); ++ip) {
        double s = 0.0;
        for (int iq = 0; iq < grid.nq(); ++iq) s += value(iq, ip);
        out[static_cast<size_t>(ip)] = s * grid.q_axis.spacing();
    }
    return out;
}

double laguerre(int n, double x) {
    if (n < 0) throw DomainError("laguerre: n must be >= 0");
    if (n == 0) return 1.0;
    double prev = 1.0;
    double cur = 1.0 - x;
    for (int k = 1; k < n; ++k) {
        const double next = ((2.0 * k + 1.0 - x) * cur - k * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    return cur;
}

double weighted_laguerre(int n, double x) {
    if (n < 0) throw DomainError("weighted_laguerre: n must be >= 0");
    // The recurrence is linear, so it holds verbatim for e^{-x/2} L_k(x);
    // seeding with the weighted values keeps every iterate bounded.
    const double g0 = std::exp(-0.5 * x);
    if (n == 0) return g0;
    double prev = g0;
    double cur = (1.0 - x) * g0;
    for (int k = 1; k < n; ++k) {
        const double next = ((2.0 * k + 1.0 - x) * cur - k * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    return cur;
}

PhaseDensity wigner_excited(int n, const RiskParams& params, const PhaseGrid& pgrid) {
    params.validate();
    if (n < 0) throw DomainError("wigner_excited: level must be >= 0");
    const double heff = params.effective_hbar();
    const double hw = heff * params.omega();
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    const double prefactor = sign / (std::numbers::pi * heff);

    PhaseDensity rho{pgrid, {}, PhaseDensityKind::WignerPure, n, 0.0};
    rho.values.resize(pgrid.size());
    for (int iq = 0; iq < pgrid.nq(); ++iq) {
        const double q = pgrid.q_axis.point(iq);
        for (int ip = 0; ip < pgrid.np(); ++ip) {
            const double h = params.classical_energy(q, pgrid.p_axis.point(ip));
            rho.values[pgrid.index(iq, ip)] = prefactor * weighted_laguerre(n, 4.0 * h / hw);
        }
    }
    check_boundary(rho, "wigner_excited");
    return rho;
}

GibbsWeights gibbs_weights(double beta, const RiskParams& params, int n_max) {
    params.validate();
    if (!(beta > 0.0)) {
        throw DomainError("gibbs_weights: beta must be > 0 (the level sum diverges otherwise)");
    }
    if (n_max < 0) throw DomainError("gibbs_weights: n_max must be >= 0");
    const double q = std::exp(-beta * params.effective_hbar() * params.omega());
    GibbsWeights out;
    out.w.resize(static_cast<size_t>(n_max) + 1);
    double qe = 1.0;
    for (int n = 0; n <= n_max; ++n) {
        out.w[static_cast<size_t>(n)] = qe * (1.0 - q);
        qe *= q;
    }
    out.tail = qe; // q^(n_max + 1)
    return out;
}

ThermalParams thermal_params(double beta, const RiskParams& params) {
    params.validate();
    if (!(beta > 0.0)) throw DomainError("thermal_params: beta must be > 0");
    const double hw = params.effective_hbar() * params.omega();
    return ThermalParams{beta, 2.0 / hw * std::tanh(0.5 * beta * hw)};
}

PhaseDensity thermal_density(double beta, const RiskParams& params, const PhaseGrid& pgrid) {
    const ThermalParams tp = thermal_params(beta, params);
    const double prefactor = params.omega() / (2.0 * std::numbers::pi) * tp.x;

    PhaseDensity rho{pgrid, {}, PhaseDensityKind::Thermal, 0, beta};
    rho.values.resize(pgrid.size());
    for (int iq = 0; iq < pgrid.nq(); ++iq) {
        const double q = pgrid.q_axis.point(iq);
        for (int ip = 0; ip < pgrid.np(); ++ip) {
            const double h = params.classical_energy(q, pgrid.p_axis.point(ip));
            rho.values[pgrid.index(iq, ip)] = prefactor * std::exp(-tp.x * h);
        }
    }
    return rho;
}

double mean_risk(const PhaseDensity& rho, const RiskParams& params) {
    params.validate();
    check_boundary(rho, "mean_risk");
    double s = 0.0;
    for (int iq = 0; iq < rho.grid.nq(); ++iq) {
        const double q = rho.grid.q_axis.point(iq);
        for (int ip = 0; ip < rho.grid.np(); ++ip) {
            s += params.classical_energy(q, rho.grid.p_axis.point(ip)) * rho.value(iq, ip);
        }
    }
    return s * rho.grid.cell_measure();
}

double entropy(const PhaseDensity& rho) {
    double s = 0.0;
    for (const double v : rho.values) {
        if (v < 0.0) {
            throw DomainError("entropy: density has negative cells; defined only for "
                              "thermal densities and the ground Wigner measure");
        }
        if (v > 1e-300) s -= v * std::log(v);
    }
    return s * rho.grid.cell_measure();
}

PhaseGrid phase_grid_for_level(const RiskParams& params, int n, int n_points) {
    params.validate();
    if (n < 0) throw DomainError("phase_grid_for_level: level must be >= 0");
    const double heff = params.effective_hbar();
    const double w = params.omega();
    const double sq = std::sqrt((n + 0.5) * heff / (params.m * w));
    const double sp = std::sqrt((n + 0.5) * heff * params.m * w);
    return centered_grid(params, 8.0 * std::max(sq, sp), n_points);
}

PhaseGrid phase_grid_for_thermal(const RiskParams& params, double beta, int n_points) {
    const ThermalParams tp = thermal_params(beta, params);
    const double w = params.omega();
    const double sq = std::sqrt(1.0 / (tp.x * params.m * w * w));
    const double sp = std::sqrt(params.m / tp.x);
    return centered_grid(params, 8.0 * std::max(sq, sp), n_points);
}

} // namespace qmarket
