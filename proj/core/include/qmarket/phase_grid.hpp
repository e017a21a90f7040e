#pragma once

#include <cstddef>

#include "qmarket/grid.hpp"

namespace qmarket {

// Cartesian product of a log-price axis and a momentum axis. Densities over
// it are stored row-major: index(iq, ip) = iq * np() + ip.
struct PhaseGrid {
    Grid q_axis;
    Grid p_axis;

    int nq() const { return q_axis.n_points(); }
    int np() const { return p_axis.n_points(); }
    double cell_measure() const { return q_axis.spacing() * p_axis.spacing(); }
    std::size_t size() const { return static_cast<std::size_t>(nq()) * static_cast<std::size_t>(np()); }
    std::size_t index(int iq, int ip) const {
        return static_cast<std::size_t>(iq) * static_cast<std::size_t>(np()) +
               static_cast<std::size_t>(ip);
    }
};

} // namespace qmarket
