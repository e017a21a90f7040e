#include "qmarket/wavefunction.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <utility>

#include "fourier.hpp"
#include "qmarket/errors.hpp"

namespace qmarket {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_hbar(double hbar_e) {
    if (!(hbar_e > 0.0) || !std::isfinite(hbar_e)) {
        throw DomainError("hbar_e must be positive and finite");
    }
}

double checked_squared_norm(const Wavefunction& psi, const char* who) {
    const double s = psi.squared_norm();
    if (!(s >= std::numeric_limits<double>::min())) {
        throw DegenerateState(std::string(who) + ": squared norm underflows");
    }
    return s;
}

} // namespace

Grid conjugate_grid(const Grid& grid, double hbar_e) {
    check_hbar(hbar_e);
    const int n = grid.n_points();
    const double dp = kTwoPi * hbar_e / (n * grid.spacing());
    const double half = (n / 2) * dp;
    return Grid(-half, half, n);
}

Wavefunction::Wavefunction(const Grid& grid, std::vector<std::complex<double>> amplitudes,
                           Representation rep, double hbar_e)
    : Wavefunction(rep == Representation::Position ? grid : conjugate_grid(grid, hbar_e),
                   rep == Representation::Momentum ? grid : conjugate_grid(grid, hbar_e),
                   std::move(amplitudes), rep, hbar_e) {}

Wavefunction::Wavefunction(Grid pos, Grid mom, std::vector<std::complex<double>> amplitudes,
                           Representation rep, double hbar_e)
    : pos_grid_(pos), mom_grid_(mom), amp_(std::move(amplitudes)), rep_(rep), hbar_e_(hbar_e) {
    check_hbar(hbar_e);
    const Grid& axis = rep_ == Representation::Position ? pos_grid_ : mom_grid_;
    if (static_cast<int>(amp_.size()) != axis.n_points()) {
        throw DomainError("amplitude count " + std::to_string(amp_.size()) +
                          " does not match grid n_points " + std::to_string(axis.n_points()));
    }
    for (const auto& a : amp_) {
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
            throw DomainError("amplitudes must be finite");
        }
    }
}

double Wavefunction::squared_norm() const {
    double s = 0.0;
    for (const auto& a : amp_) s += std::norm(a);
    return s * grid().spacing();
}

Wavefunction normalize(const Wavefunction& psi) {
    const double s = checked_squared_norm(psi, "normalize");
    const double scale = 1.0 / std::sqrt(s);
    std::vector<std::complex<double>> out(psi.amplitudes().begin(), psi.amplitudes().end());
    for (auto& a : out) a *= scale;
    return Wavefunction(psi.grid(), std::move(out), psi.representation(), psi.hbar_e());
}

Wavefunction change_representation(const Wavefunction& psi) {
    const bool to_momentum = psi.representation() == Representation::Position;
    const Grid& from = to_momentum ? psi.position_grid() : psi.momentum_grid();
    const Grid& to = to_momentum ? psi.momentum_grid() : psi.position_grid();
    const double hbar = psi.hbar_e();
    const int n = from.n_points();

    std::vector<std::complex<double>> buf(psi.amplitudes().begin(), psi.amplitudes().end());
    const double scale = from.spacing() / std::sqrt(kTwoPi * hbar);

    if (to_momentum) {
        // psi~_m = scale * e^{-i p_m q0 / hbar} * sum_j [psi_j e^{-i P0 dq j / hbar}] e^{-2 pi i m j / n}
        const double pre = -to.q_min() * from.spacing() / hbar;
        for (int j = 0; j < n; ++j) buf[static_cast<size_t>(j)] *= std::polar(1.0, pre * j);
        detail::fft_forward(buf.data(), n);
        const double q0 = from.q_min();
        for (int m = 0; m < n; ++m) {
            buf[static_cast<size_t>(m)] *= scale * std::polar(1.0, -to.point(m) * q0 / hbar);
        }
    } else {
        // psi_j = scale * e^{+i P0 q_j / hbar} * sum_m [psi~_m e^{+i m dp q0 / hbar}] e^{+2 pi i m j / n}
        const double pre = to.q_min() * from.spacing() / hbar;
        for (int m = 0; m < n; ++m) buf[static_cast<size_t>(m)] *= std::polar(1.0, pre * m);
        detail::fft_backward(buf.data(), n);
        const double p_min = from.q_min();
        for (int j = 0; j < n; ++j) {
            buf[static_cast<size_t>(j)] *= scale * std::polar(1.0, p_min * to.point(j) / hbar);
        }
    }

    const Representation rep =
        to_momentum ? Representation::Momentum : Representation::Position;
    return Wavefunction(psi.position_grid(), psi.momentum_grid(), std::move(buf), rep, hbar);
}

Wavefunction apply_momentum_multiplier(const Wavefunction& psi,
                                       const std::function<double(double)>& g) {
    if (psi.representation() != Representation::Position) {
        throw DomainError("apply_momentum_multiplier expects a position-representation state");
    }
    Wavefunction phi = change_representation(psi);
    std::vector<std::complex<double>> amps(phi.amplitudes().begin(), phi.amplitudes().end());
    const Grid& paxis = phi.grid();
    for (int m = 0; m < paxis.n_points(); ++m) {
        amps[static_cast<size_t>(m)] *= g(paxis.point(m));
    }
    return change_representation(Wavefunction(phi.position_grid(), phi.momentum_grid(),
                                              std::move(amps), Representation::Momentum,
                                              phi.hbar_e()));
}

Moments moments(const Wavefunction& psi) {
    const double s = checked_squared_norm(psi, "moments");
    const Grid& axis = psi.grid();
    const double dq = axis.spacing();
    const auto amps = psi.amplitudes();

    double mean = 0.0;
    for (int i = 0; i < axis.n_points(); ++i) {
        mean += axis.point(i) * std::norm(amps[static_cast<size_t>(i)]);
    }
    mean *= dq / s;

    double var = 0.0;
    for (int i = 0; i < axis.n_points(); ++i) {
        const double d = axis.point(i) - mean;
        var += d * d * std::norm(amps[static_cast<size_t>(i)]);
    }
    var *= dq / s;
    return Moments{mean, var};
}

double tail_mass(const Wavefunction& psi, double edge_fraction) {
    if (!(edge_fraction > 0.0) || !(edge_fraction < 0.5)) {
        throw DomainError("edge_fraction must lie in (0, 0.5)");
    }
    const double s = checked_squared_norm(psi, "tail_mass");
    const Grid& axis = psi.grid();
    const double lo = axis.q_min() + edge_fraction * axis.length();
    const double hi = axis.q_max() - edge_fraction * axis.length();
    double t = 0.0;
    for (int i = 0; i < axis.n_points(); ++i) {
        const double x = axis.point(i);
        if (x < lo || x >= hi) t += std::norm(psi.amplitude(i));
    }
    return t * axis.spacing() / s;
}

Wavefunction gaussian_state(const Grid& grid, double center, double sigma,
                            Representation rep, double hbar_e) {
    if (!(sigma > 0.0) || !std::isfinite(sigma) || !std::isfinite(center)) {
        throw DomainError("gaussian_state requires finite center and sigma > 0");
    }
    std::vector<std::complex<double>> amps(static_cast<size_t>(grid.n_points()));
    for (int i = 0; i < grid.n_points(); ++i) {
        const double d = grid.point(i) - center;
        amps[static_cast<size_t>(i)] = std::exp(-d * d / (4.0 * sigma * sigma));
    }
    return normalize(Wavefunction(grid, std::move(amps), rep, hbar_e));
}

} // namespace qmarket
