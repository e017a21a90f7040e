#pragma once

// Shared test oracles. Everything here stays independent of the library code
// paths it cross-checks: the transform oracle is a direct O(N^2) quadrature,
// the diagonalization oracle is Eigen's solver (the library uses LAPACK), the
// Laguerre oracle is the explicit series, and the Wigner covariance oracle
// integrates the discretized Wigner transform of the state.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "qmarket/risk.hpp"
#include "qmarket/wavefunction.hpp"

namespace testutil {

inline constexpr double kPi = std::numbers::pi;

// Forward transform by direct summation of the kernel exp(-i p q / hbar).
inline std::vector<std::complex<double>> dense_momentum_oracle(const qmarket::Wavefunction& psi) {
    const qmarket::Grid& q = psi.position_grid();
    const qmarket::Grid& p = psi.momentum_grid();
    const double hbar = psi.hbar_e();
    const double scale = q.spacing() / std::sqrt(2.0 * kPi * hbar);
    const int n = q.n_points();
    std::vector<std::complex<double>> out(static_cast<size_t>(n));
    for (int m = 0; m < n; ++m) {
        std::complex<double> acc(0.0, 0.0);
        for (int j = 0; j < n; ++j) {
            acc += psi.amplitude(j) * std::polar(1.0, -p.point(m) * q.point(j) / hbar);
        }
        out[static_cast<size_t>(m)] = scale * acc;
    }
    return out;
}

// Laguerre polynomial by explicit series: sum_k (-1)^k C(n,k) x^k / k!.
inline double laguerre_series(int n, double x) {
    double sum = 0.0;
    double term = 1.0; // k = 0: C(n,0) x^0 / 0!
    for (int k = 0; k <= n; ++k) {
        sum += term;
        term *= -(static_cast<double>(n - k) / ((k + 1.0) * (k + 1.0))) * x;
    }
    return sum;
}

// First k eigenvalues via Eigen's self-adjoint solver (independent of the
// LAPACK route used by the library).
inline std::vector<double> eigen_diag_oracle(const Eigen::MatrixXcd& h, int k) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
    std::vector<double> out(static_cast<size_t>(k));
    for (int i = 0; i < k; ++i) out[static_cast<size_t>(i)] = solver.eigenvalues()[i];
    return out;
}

// Discretized Wigner transform W(q_i, p_m) of a position-representation state,
//   (dy / pi hbar) sum_l psi*(q+y) psi(q-y) exp(2 i p y / hbar),
// evaluated on the state's position axis crossed with a caller-chosen p axis.
// The p window must stay well below pi hbar / (2 dy) or the y-quadrature of
// the doubled-frequency kernel aliases.
inline std::vector<double> wigner_of_state(const qmarket::Wavefunction& psi,
                                           const qmarket::Grid& p_axis) {
    const qmarket::Grid& q = psi.position_grid();
    const double hbar = psi.hbar_e();
    const int nq = q.n_points();
    const int np = p_axis.n_points();
    const double dy = q.spacing();
    std::vector<double> w(static_cast<size_t>(nq) * static_cast<size_t>(np));
    for (int i = 0; i < nq; ++i) {
        for (int m = 0; m < np; ++m) {
            std::complex<double> acc(0.0, 0.0);
            const int lmax = std::min(i, nq - 1 - i);
            for (int l = -lmax; l <= lmax; ++l) {
                const std::complex<double> prod =
                    std::conj(psi.amplitude(i + l)) * psi.amplitude(i - l);
                acc += prod * std::polar(1.0, 2.0 * p_axis.point(m) * (l * dy) / hbar);
            }
            w[static_cast<size_t>(i) * np + static_cast<size_t>(m)] =
                acc.real() * dy / (kPi * hbar);
        }
    }
    return w;
}

struct WignerStats {
    double mass = 0.0;
    double mean_q = 0.0;
    double mean_p = 0.0;
    double cov_qp = 0.0;
    double var_q = 0.0;
    double var_p = 0.0;
};

inline WignerStats wigner_stats(const std::vector<double>& w, const qmarket::Grid& q,
                                const qmarket::Grid& p) {
    const int nq = q.n_points();
    const int np = p.n_points();
    const double dmu = q.spacing() * p.spacing();
    WignerStats s;
    for (int i = 0; i < nq; ++i) {
        for (int m = 0; m < np; ++m) {
            const double v = w[static_cast<size_t>(i) * np + static_cast<size_t>(m)] * dmu;
            s.mass += v;
            s.mean_q += q.point(i) * v;
            s.mean_p += p.point(m) * v;
        }
    }
    s.mean_q /= s.mass;
    s.mean_p /= s.mass;
    for (int i = 0; i < nq; ++i) {
        for (int m = 0; m < np; ++m) {
            const double v = w[static_cast<size_t>(i) * np + static_cast<size_t>(m)] * dmu;
            const double dq = q.point(i) - s.mean_q;
            const double dp = p.point(m) - s.mean_p;
            s.cov_qp += dq * dp * v;
            s.var_q += dq * dq * v;
            s.var_p += dp * dp * v;
        }
    }
    s.cov_qp /= s.mass;
    s.var_q /= s.mass;
    s.var_p /= s.mass;
    return s;
}

// Normalized random superposition of the given eigenstates, deterministic in
// the seed.
inline qmarket::Wavefunction random_superposition(const std::vector<qmarket::Wavefunction>& basis,
                                                  std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const auto uniform = [&rng] {
        return 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0;
    };
    const int n = basis.front().size();
    std::vector<std::complex<double>> amps(static_cast<size_t>(n), 0.0);
    for (const auto& state : basis) {
        const std::complex<double> c(uniform(), uniform());
        for (int j = 0; j < n; ++j) amps[static_cast<size_t>(j)] += c * state.amplitude(j);
    }
    return normalize(qmarket::Wavefunction(basis.front().grid(), std::move(amps),
                                           basis.front().representation(),
                                           basis.front().hbar_e()));
}

} // namespace testutil
