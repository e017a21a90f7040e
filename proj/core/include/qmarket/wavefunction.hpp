#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "qmarket/grid.hpp"

namespace qmarket {

enum class Representation { Position, Momentum };

struct Moments {
    double mean = 0.0;
    double variance = 0.0;
};

// Momentum axis conjugate to a position axis (or back): same point count,
// spacing 2*pi*hbar_e / (n * spacing), centered on zero. Together with the
// periodic grid convention this makes the transform pair exactly unitary.
Grid conjugate_grid(const Grid& grid, double hbar_e);

// Complex amplitudes sampled on a uniform axis. A wavefunction knows both of
// its axes (position and momentum) so that change_representation is an exact
// involution; grid() returns the axis of the current representation. When a
// state is constructed directly, the conjugate axis is the centered one from
// conjugate_grid().
//
// All inner products are Riemann sums (uniform weight x spacing); results are
// only trustworthy when the grid tails carry negligible probability mass, see
// tail_mass().
class Wavefunction {
public:
    Wavefunction(const Grid& grid, std::vector<std::complex<double>> amplitudes,
                 Representation rep, double hbar_e);

    const Grid& grid() const {
        return rep_ == Representation::Position ? pos_grid_ : mom_grid_;
    }
    const Grid& position_grid() const { return pos_grid_; }
    const Grid& momentum_grid() const { return mom_grid_; }
    Representation representation() const { return rep_; }
    double hbar_e() const { return hbar_e_; }

    std::span<const std::complex<double>> amplitudes() const { return amp_; }
    std::complex<double> amplitude(int i) const { return amp_[static_cast<size_t>(i)]; }
    int size() const { return static_cast<int>(amp_.size()); }

    // Riemann squared norm sum(|a_i|^2) * spacing.
    double squared_norm() const;

private:
    Wavefunction(Grid pos, Grid mom, std::vector<std::complex<double>> amplitudes,
                 Representation rep, double hbar_e);

    friend Wavefunction change_representation(const Wavefunction& psi);
    friend Wavefunction apply_momentum_multiplier(const Wavefunction& psi,
                                                  const std::function<double(double)>& g);

    Grid pos_grid_;
    Grid mom_grid_;
    std::vector<std::complex<double>> amp_;
    Representation rep_;
    double hbar_e_;
};

// Rescale to squared norm 1. Throws DegenerateState when the squared norm
// underflows (e.g. the all-zero state).
Wavefunction normalize(const Wavefunction& psi);

// Unitary switch between the position and momentum representations.
// Forward (position -> momentum) kernel: exp(-i p q / hbar_e) / sqrt(2 pi hbar_e);
// inverse uses the conjugate kernel. Norm-preserving and an exact round trip
// up to floating-point rounding.
Wavefunction change_representation(const Wavefunction& psi);

// Mean and second central moment of the density in psi's own representation.
Moments moments(const Wavefunction& psi);

// F^{-1}[ g(p) F[psi] ] for a real multiplier g sampled on the momentum axis;
// psi must be position-representation. g(p) = p applies the momentum operator.
Wavefunction apply_momentum_multiplier(const Wavefunction& psi,
                                       const std::function<double(double)>& g);

// Fraction of probability mass in cells within edge_fraction of either grid
// edge. Used to decide whether a state actually fits on its grid.
double tail_mass(const Wavefunction& psi, double edge_fraction = 0.05);

// Normalized Gaussian with density standard deviation sigma centered at
// `center`, in the requested representation.
Wavefunction gaussian_state(const Grid& grid, double center, double sigma,
                            Representation rep, double hbar_e);

} // namespace qmarket
