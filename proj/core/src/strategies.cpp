#include "qmarket/strategies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "qmarket/errors.hpp"

namespace qmarket {

namespace {

constexpr double kTailTolerance = 1e-10;

double require_norm(const Wavefunction& psi, const char* who) {
    const double s = psi.squared_norm();
    if (!(s >= std::numeric_limits<double>::min())) {
        throw DegenerateState(std::string(who) + ": squared norm underflows");
    }
    return s;
}

void require_representation(const Wavefunction& psi, Representation rep, const char* who) {
    if (psi.representation() != rep) {
        throw DomainError(std::string(who) + ": wrong representation");
    }
}

} // namespace

void CoherentParams::validate() const {
    if (!(std::abs(r) < 1.0)) {
        throw DomainError("CoherentParams: |r| must be < 1, got r = " + std::to_string(r));
    }
    if (!(eta > 0.0)) {
        throw DomainError("CoherentParams: eta must be > 0, got " + std::to_string(eta));
    }
    if (!std::isfinite(q0) || !std::isfinite(p0)) {
        throw DomainError("CoherentParams: q0/p0 must be finite");
    }
}

Wavefunction apply_annihilation(const Wavefunction& psi, const CoherentParams& cp) {
    cp.validate();
    require_representation(psi, Representation::Position, "apply_annihilation");
    const double gamma = cp.r / std::sqrt(1.0 - cp.r * cp.r);
    const std::complex<double> q_coeff =
        std::complex<double>(1.0, -gamma) / (2.0 * cp.eta);
    const std::complex<double> p_coeff(0.0, cp.eta);

    const Wavefunction p_psi = apply_momentum_multiplier(psi, [](double p) { return p; });

    const Grid& axis = psi.position_grid();
    std::vector<std::complex<double>> amps(static_cast<size_t>(psi.size()));
    for (int j = 0; j < psi.size(); ++j) {
        amps[static_cast<size_t>(j)] =
            q_coeff * axis.point(j) * psi.amplitude(j) + p_coeff * p_psi.amplitude(j);
    }
    return Wavefunction(axis, std::move(amps), Representation::Position, psi.hbar_e());
}

std::complex<double> coherent_eigenvalue(const CoherentParams& cp, double /*hbar_e*/) {
    const double gamma = cp.r / std::sqrt(1.0 - cp.r * cp.r);
    return std::complex<double>(1.0, -gamma) * cp.q0 / (2.0 * cp.eta) +
           std::complex<double>(0.0, cp.eta) * cp.p0;
}

double annihilation_residual(const Wavefunction& psi, const CoherentParams& cp) {
    const std::complex<double> c = coherent_eigenvalue(cp, psi.hbar_e());
    const Wavefunction c_psi = apply_annihilation(psi, cp);
    double num = 0.0;
    for (int j = 0; j < psi.size(); ++j) {
        num += std::norm(c_psi.amplitude(j) - c * psi.amplitude(j));
    }
    num *= psi.grid().spacing();
    return std::sqrt(num / require_norm(psi, "annihilation_residual"));
}

Wavefunction coherent_strategy(const CoherentParams& cp, const Grid& grid, double hbar_e) {
    cp.validate();
    // (C - c) psi = 0 integrates to a Gaussian with complex width:
    //   psi ~ exp(-(1 - i gamma)(q - q0)^2 / (4 eta^2 hbar) + i p0 (q - q0) / hbar).
    const double gamma = cp.r / std::sqrt(1.0 - cp.r * cp.r);
    const std::complex<double> width(1.0, -gamma);
    std::vector<std::complex<double>> amps(static_cast<size_t>(grid.n_points()));
    for (int j = 0; j < grid.n_points(); ++j) {
        const double d = grid.point(j) - cp.q0;
        const std::complex<double> arg =
            -width * (d * d / (4.0 * cp.eta * cp.eta * hbar_e)) +
            std::complex<double>(0.0, cp.p0 * d / hbar_e);
        amps[static_cast<size_t>(j)] = std::exp(arg);
    }
    Wavefunction psi =
        normalize(Wavefunction(grid, std::move(amps), Representation::Position, hbar_e));
    const double tail = tail_mass(psi, 0.05);
    if (tail > kTailTolerance) {
        throw GridTooSmall("coherent_strategy: tail mass " + std::to_string(tail) +
                           " exceeds 1e-10; widen the grid");
    }
    return psi;
}

Dispersions dispersions(const Wavefunction& psi) {
    const Wavefunction pos =
        psi.representation() == Representation::Position ? psi : change_representation(psi);
    const Wavefunction mom = change_representation(pos);

    const double s = require_norm(pos, "dispersions");
    const Moments mq = moments(pos);
    const Moments mp = moments(mom);

    // Re<psi| Q P |psi> equals the symmetrized moment for Hermitian Q, P.
    const Wavefunction p_psi = apply_momentum_multiplier(pos, [](double p) { return p; });
    const Grid& axis = pos.position_grid();
    std::complex<double> qp(0.0, 0.0);
    for (int j = 0; j < pos.size(); ++j) {
        qp += std::conj(pos.amplitude(j)) * axis.point(j) * p_psi.amplitude(j);
    }
    qp *= axis.spacing() / s;

    Dispersions d;
    d.delta_q = std::sqrt(mq.variance);
    d.delta_p = std::sqrt(mp.variance);
    d.covariance = qp.real() - mq.mean * mp.mean;
    d.corr = d.covariance / (d.delta_q * d.delta_p);
    return d;
}

DeltaStrategy delta_strategy(double a, double epsilon, const Grid& grid, double hbar_e) {
    if (!(a > grid.q_min()) || !(a < grid.q_max())) {
        throw DomainError("delta_strategy: a must lie inside the grid");
    }
    if (!(epsilon >= 4.0 * grid.spacing())) {
        throw DomainError("delta_strategy: epsilon " + std::to_string(epsilon) +
                          " under-resolves the grid (floor " +
                          std::to_string(4.0 * grid.spacing()) + ")");
    }
    DeltaStrategy out{gaussian_state(grid, a, epsilon, Representation::Position, hbar_e), a,
                      std::exp(a)};
    return out;
}

double IntentionDensity::mass() const {
    double s = 0.0;
    for (const double v : values) s += v;
    return s * grid.cell_measure();
}

std::vector<double> IntentionDensity::q_marginal() const {
    std::vector<double> out(static_cast<size_t>(grid.nq()), 0.0);
    for (int iq = 0; iq < grid.nq(); ++iq) {
        double s = 0.0;
        for (int ip = 0; ip < grid.np(); ++ip) s += value(iq, ip);
        out[static_cast<size_t>(iq)] = s * grid.p_axis.spacing();
    }
    return out;
}

std::vector<double> IntentionDensity::p_marginal() const {
    std::vector<double> out(static_cast<size_t>(grid.np()), 0.0);
    for (int ip = 0; ip < grid.np(); ++ip) {
        double s = 0.0;
        for (int iq = 0; iq < grid.nq(); ++iq) s += value(iq, ip);
        out[static_cast<size_t>(ip)] = s * grid.q_axis.spacing();
    }
    return out;
}

IntentionDensity intention_density(const Wavefunction& alice, const Wavefunction& bob) {
    require_representation(alice, Representation::Position, "intention_density(alice)");
    require_representation(bob, Representation::Momentum, "intention_density(bob)");
    const double sa = require_norm(alice, "intention_density(alice)");
    const double sb = require_norm(bob, "intention_density(bob)");

    IntentionDensity out{PhaseGrid{alice.grid(), bob.grid()}, {}};
    out.values.resize(out.grid.size());
    for (int iq = 0; iq < out.grid.nq(); ++iq) {
        const double da = std::norm(alice.amplitude(iq)) / sa;
        for (int ip = 0; ip < out.grid.np(); ++ip) {
            out.values[out.grid.index(iq, ip)] = da * std::norm(bob.amplitude(ip)) / sb;
        }
    }
    return out;
}

CumulativeDensity CumulativeDensity::from_state(const Wavefunction& psi) {
    const double s = require_norm(psi, "CumulativeDensity");
    const Grid& axis = psi.grid();
    const int n = axis.n_points();
    const double dq = axis.spacing();

    CumulativeDensity cd(axis);
    cd.density_.assign(static_cast<size_t>(n) + 1, 0.0);
    for (int j = 0; j < n; ++j) {
        cd.density_[static_cast<size_t>(j)] = std::norm(psi.amplitude(j)) / s;
    }
    // density_[n] stays 0: the state is assumed to vanish past the grid edge.

    cd.deriv_.assign(static_cast<size_t>(n) + 1, 0.0);
    for (int j = 1; j < n; ++j) {
        cd.deriv_[static_cast<size_t>(j)] =
            (cd.density_[static_cast<size_t>(j) + 1] - cd.density_[static_cast<size_t>(j) - 1]) /
            (2.0 * dq);
    }
    cd.deriv_[0] = (cd.density_[1] - cd.density_[0]) / dq;

    cd.cell_.assign(static_cast<size_t>(n), 0.0);
    cd.cum_.assign(static_cast<size_t>(n) + 1, 0.0);
    for (int j = 0; j < n; ++j) {
        const double rl = cd.density_[static_cast<size_t>(j)];
        const double rr = cd.density_[static_cast<size_t>(j) + 1];
        const double dl = cd.deriv_[static_cast<size_t>(j)];
        const double dr = cd.deriv_[static_cast<size_t>(j) + 1];
        const double cell = dq * (0.5 * (rl + rr) + dq * (dl - dr) / 12.0);
        cd.cell_[static_cast<size_t>(j)] = std::max(cell, 0.0);
        cd.cum_[static_cast<size_t>(j) + 1] =
            cd.cum_[static_cast<size_t>(j)] + cd.cell_[static_cast<size_t>(j)];
    }
    cd.total_ = cd.cum_[static_cast<size_t>(n)];
    if (!(cd.total_ > 0.0)) {
        throw DegenerateState("CumulativeDensity: zero integrated mass");
    }
    return cd;
}

double CumulativeDensity::mass_below(double x) const {
    const int n = grid_.n_points();
    const double dq = grid_.spacing();
    if (!(x > grid_.q_min())) return 0.0;
    if (x >= grid_.q_max()) return 1.0;

    int j = static_cast<int>(std::floor((x - grid_.q_min()) / dq));
    j = std::clamp(j, 0, n - 1);
    const double s = std::clamp((x - grid_.point(j)) / dq, 0.0, 1.0);

    // Integral of the cubic Hermite cell model over [0, s].
    const double s2 = s * s;
    const double s3 = s2 * s;
    const double s4 = s3 * s;
    const double rl = density_[static_cast<size_t>(j)];
    const double rr = density_[static_cast<size_t>(j) + 1];
    const double dl = deriv_[static_cast<size_t>(j)];
    const double dr = deriv_[static_cast<size_t>(j) + 1];
    double partial = dq * (rl * (0.5 * s4 - s3 + s) +
                           dq * dl * (0.25 * s4 - 2.0 * s3 / 3.0 + 0.5 * s2) +
                           rr * (s3 - 0.5 * s4) +
                           dq * dr * (0.25 * s4 - s3 / 3.0));
    partial = std::clamp(partial, 0.0, cell_[static_cast<size_t>(j)]);
    return std::clamp((cum_[static_cast<size_t>(j)] + partial) / total_, 0.0, 1.0);
}

double demand_profile(const Wavefunction& psi, double x) {
    require_representation(psi, Representation::Position, "demand_profile");
    return CumulativeDensity::from_state(psi).mass_below(x);
}

double supply_profile(const Wavefunction& psi, double x) {
    require_representation(psi, Representation::Momentum, "supply_profile");
    return CumulativeDensity::from_state(psi).mass_above(x);
}

} // namespace qmarket
