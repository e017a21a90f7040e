#include "qmarket/risk.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <utility>
#include <vector>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#define lapack_complex_float_real(z) ((z).real())
#define lapack_complex_float_imag(z) ((z).imag())
#define lapack_complex_double_real(z) ((z).real())
#define lapack_complex_double_imag(z) ((z).imag())
#include <lapacke.h>

#include "qmarket/errors.hpp"

namespace qmarket {

namespace {

// Outer-5% mass above this marks the grid as too small for the state.
constexpr double kTailTolerance = 1e-10;
constexpr double kResidualTolerance = 1e-8;

// Rotate the column so the entry at the grid point nearest q0 is real
// positive; odd states vanish there, so scan right (then left) for the first
// entry that carries weight.
void fix_phase(Eigen::VectorXcd& v, const Grid& grid, double q0) {
    const int n = static_cast<int>(v.size());
    double max_abs = 0.0;
    for (int j = 0; j < n; ++j) max_abs = std::max(max_abs, std::abs(v[j]));
    if (max_abs == 0.0) return;

    const int j0 = grid.nearest_index(q0);
    int anchor = -1;
    for (int j = j0; j < n; ++j) {
        if (std::abs(v[j]) > 1e-8 * max_abs) {
            anchor = j;
            break;
        }
    }
    if (anchor < 0) {
        for (int j = j0 - 1; j >= 0; --j) {
            if (std::abs(v[j]) > 1e-8 * max_abs) {
                anchor = j;
                break;
            }
        }
    }
    if (anchor < 0) return;
    v *= std::conj(v[anchor]) / std::abs(v[anchor]);
}

} // namespace

double effective_planck(double hbar_e, double big_theta) {
    if (!(hbar_e > 0.0)) throw DomainError("effective_planck: hbar_e must be > 0");
    if (big_theta < 0.0) throw DomainError("effective_planck: big_theta must be >= 0");
    return std::hypot(hbar_e, big_theta);
}

void RiskParams::validate() const {
    if (!(m > 0.0)) throw DomainError("RiskParams: m must be > 0");
    if (!(theta > 0.0)) throw DomainError("RiskParams: theta must be > 0");
    if (!(hbar_e > 0.0)) throw DomainError("RiskParams: hbar_e must be > 0");
    if (big_theta < 0.0) throw DomainError("RiskParams: big_theta must be >= 0");
    if (!std::isfinite(q0) || !std::isfinite(p0)) {
        throw DomainError("RiskParams: q0/p0 must be finite");
    }
}

HermitianOperator::HermitianOperator(const Grid& grid, Eigen::MatrixXcd matrix, double hbar_e)
    : grid_(grid), mat_(std::move(matrix)), hbar_e_(hbar_e) {
    if (mat_.rows() != grid.n_points() || mat_.cols() != grid.n_points()) {
        throw DomainError("operator matrix does not match the grid");
    }
}

Wavefunction HermitianOperator::apply(const Wavefunction& psi) const {
    if (psi.representation() != Representation::Position || psi.grid() != grid_) {
        throw DomainError("operator applied to a state on a different grid or representation");
    }
    Eigen::Map<const Eigen::VectorXcd> x(psi.amplitudes().data(), psi.size());
    Eigen::VectorXcd y = mat_ * x;
    return Wavefunction(psi.grid(), std::vector<std::complex<double>>(y.data(), y.data() + y.size()),
                        Representation::Position, psi.hbar_e());
}

HermitianOperator build_risk_operator(const RiskParams& params, const Grid& grid) {
    params.validate();
    const int n = grid.n_points();
    const double heff = params.effective_hbar();
    const double w = params.omega();

    const auto kinetic = [&params](double p) {
        const double d = p - params.p0;
        return d * d / (2.0 * params.m);
    };

    Eigen::MatrixXcd mat(n, n);
    std::vector<std::complex<double>> unit(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k) {
        std::fill(unit.begin(), unit.end(), std::complex<double>(0.0));
        unit[static_cast<size_t>(k)] = 1.0;
        const Wavefunction column = apply_momentum_multiplier(
            Wavefunction(grid, unit, Representation::Position, heff), kinetic);
        for (int j = 0; j < n; ++j) mat(j, k) = column.amplitude(j);
    }
    // The conjugated multiplier is Hermitian exactly; symmetrize away FFT
    // rounding so the eigensolver sees a true Hermitian matrix.
    Eigen::MatrixXcd sym = 0.5 * (mat + mat.adjoint());

    for (int j = 0; j < n; ++j) {
        const double d = grid.point(j) - params.q0;
        sym(j, j) += 0.5 * params.m * w * w * d * d;
    }
    return HermitianOperator(grid, std::move(sym), heff);
}

HermitianOperator build_risk_operator_fd(const RiskParams& params, const Grid& grid) {
    params.validate();
    const int n = grid.n_points();
    const double heff = params.effective_hbar();
    const double w = params.omega();
    const double dq = grid.spacing();

    // (P - p0)^2 / 2m with periodic central differences:
    //   P^2 -> -hbar^2 (psi_{j+1} - 2 psi_j + psi_{j-1}) / dq^2
    //   P   -> -i hbar (psi_{j+1} - psi_{j-1}) / (2 dq)
    const double diag_kin = heff * heff / (params.m * dq * dq) +
                            params.p0 * params.p0 / (2.0 * params.m);
    const std::complex<double> upper(-heff * heff / (2.0 * params.m * dq * dq),
                                     params.p0 * heff / (2.0 * params.m * dq));

    Eigen::MatrixXcd mat = Eigen::MatrixXcd::Zero(n, n);
    for (int j = 0; j < n; ++j) {
        const double d = grid.point(j) - params.q0;
        mat(j, j) = diag_kin + 0.5 * params.m * w * w * d * d;
        const int right = (j + 1) % n;
        mat(j, right) = upper;
        mat(right, j) = std::conj(upper);
    }
    return HermitianOperator(grid, std::move(mat), heff);
}

SpectralResult spectrum(const RiskParams& params, const Grid& grid, int k) {
    params.validate();
    const int n = grid.n_points();
    if (k < 1 || k >= n / 4) {
        throw DomainError("spectrum: need 1 <= k < n_points/4, got k = " + std::to_string(k));
    }

    const HermitianOperator op = build_risk_operator(params, grid);
    const double heff = params.effective_hbar();
    const double dq = grid.spacing();

    Eigen::MatrixXcd a = op.matrix(); // zheevr destroys its input
    std::vector<double> w(static_cast<size_t>(n));
    Eigen::MatrixXcd z(n, k);
    std::vector<lapack_int> isuppz(static_cast<size_t>(2 * k));
    lapack_int found = 0;
    const double abstol = LAPACKE_dlamch('S');

    const lapack_int info = LAPACKE_zheevr(
        LAPACK_COL_MAJOR, 'V', 'I', 'L', n, a.data(), n, 0.0, 0.0, 1, k, abstol,
        &found, w.data(), z.data(), n, isuppz.data());
    if (info != 0 || found < k) {
        throw ConvergenceError("spectrum: zheevr failed (info = " + std::to_string(info) +
                               ", found = " + std::to_string(found) + ")");
    }

    SpectralResult result;
    result.eigenvalues.assign(w.begin(), w.begin() + k);

    for (int i = 0; i < k; ++i) {
        Eigen::VectorXcd v = z.col(i);
        const double residual = (op.matrix() * v - result.eigenvalues[static_cast<size_t>(i)] * v)
                                    .norm() / v.norm();
        if (!(residual < kResidualTolerance)) {
            throw ConvergenceError("spectrum: eigenpair " + std::to_string(i) +
                                   " residual " + std::to_string(residual));
        }
        fix_phase(v, grid, params.q0);
        v /= std::sqrt(dq); // l2-normalized column -> unit Riemann norm
        std::vector<std::complex<double>> amps(v.data(), v.data() + v.size());
        Wavefunction state(grid, std::move(amps), Representation::Position, heff);
        const double tail = tail_mass(state, 0.05);
        result.max_tail_mass = std::max(result.max_tail_mass, tail);
        if (tail > kTailTolerance) result.grid_too_small = true;
        result.eigenstates.push_back(std::move(state));
    }
    return result;
}

double minimal_risk_constant(const RiskParams& params, const Grid& grid) {
    return 2.0 * params.theta * spectrum(params, grid, 1).eigenvalues.front();
}

} // namespace qmarket
