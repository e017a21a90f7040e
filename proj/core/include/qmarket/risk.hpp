#pragma once

#include <Eigen/Dense>
#include <numbers>
#include <vector>

#include "qmarket/grid.hpp"
#include "qmarket/wavefunction.hpp"

namespace qmarket {

// Effective uncertainty scale once position-position noncommutativity of
// strength big_theta is switched on: sqrt(hbar_e^2 + big_theta^2).
double effective_planck(double hbar_e, double big_theta);

// Parameters of the risk inclination observable
//   H = (P - p0)^2 / (2m) + m omega^2 (Q - q0)^2 / 2,   omega = 2 pi / theta.
// theta is the characteristic transaction time, m the buy/sell risk
// asymmetry, q0/p0 the demand/supply centering offsets.
struct RiskParams {
    double m = 1.0;
    double theta = 2.0 * std::numbers::pi;
    double hbar_e = 1.0;
    double big_theta = 0.0;
    double q0 = 0.0;
    double p0 = 0.0;

    double omega() const { return 2.0 * std::numbers::pi / theta; }
    double effective_hbar() const { return effective_planck(hbar_e, big_theta); }

    // Classical quadratic form H(q, p); also the phase-space symbol used by
    // the Wigner and thermal densities.
    double classical_energy(double q, double p) const {
        const double dp = p - p0;
        const double dq = q - q0;
        const double w = omega();
        return dp * dp / (2.0 * m) + 0.5 * m * w * w * dq * dq;
    }

    // Throws DomainError unless m, theta, hbar_e > 0 and big_theta >= 0.
    void validate() const;
};

// Dense self-adjoint matrix acting on position-representation amplitudes.
class HermitianOperator {
public:
    HermitianOperator(const Grid& grid, Eigen::MatrixXcd matrix, double hbar_e);

    const Eigen::MatrixXcd& matrix() const { return mat_; }
    const Grid& grid() const { return grid_; }
    double hbar_e() const { return hbar_e_; }

    // H|psi>; psi must be position-representation on the same grid.
    Wavefunction apply(const Wavefunction& psi) const;

private:
    Grid grid_;
    Eigen::MatrixXcd mat_;
    double hbar_e_;
};

// Risk operator on the given position grid with the noncommutative
// substitution hbar_e -> effective_planck applied. The kinetic term is
// realized spectrally: conjugation of the diagonal momentum multiplier by the
// unitary grid transform (exact on the periodic grid); the result is
// symmetrized so the matrix is Hermitian to the last bit.
HermitianOperator build_risk_operator(const RiskParams& params, const Grid& grid);

// Finite-difference fallback: periodic central differences for the kinetic
// term (three-point second derivative, two-point first derivative for the
// p0 cross term). Eigenvalue error is O(spacing^2), versus spectral accuracy
// for build_risk_operator; useful as an independent discretization route.
HermitianOperator build_risk_operator_fd(const RiskParams& params, const Grid& grid);

// First k eigenpairs of the risk operator, eigenvalues ascending.
struct SpectralResult {
    std::vector<double> eigenvalues;
    std::vector<Wavefunction> eigenstates;
    // Set when some eigenstate carries more than 1e-10 of its mass in the
    // outer 5% of the grid; eigenvalues are then suspect.
    bool grid_too_small = false;
    double max_tail_mass = 0.0;
};

// Diagonalizes the effective operator. Eigenstates are orthonormal, live on
// `grid` with hbar_e = effective_planck, and are phase-fixed to a real
// positive value at the grid point nearest q0 (scanning right past nodes
// where the amplitude vanishes). Throws DomainError unless k >= 1 and
// k < n_points / 4, ConvergenceError if any residual exceeds 1e-8.
SpectralResult spectrum(const RiskParams& params, const Grid& grid, int k);

// Minimal inclination to risk h_E = 2 * theta * (lowest eigenvalue).
double minimal_risk_constant(const RiskParams& params, const Grid& grid);

} // namespace qmarket
