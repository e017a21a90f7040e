#include "qmarket/grid.hpp"

#include <cmath>
#include <string>

#include "qmarket/errors.hpp"

namespace qmarket {

namespace {

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

} // namespace

Grid::Grid(double q_min, double q_max, int n_points)
    : q_min_(q_min), q_max_(q_max), n_(n_points) {
    if (!std::isfinite(q_min) || !std::isfinite(q_max)) {
        throw DomainError("grid bounds must be finite");
    }
    if (!(q_min < q_max)) {
        throw DomainError("grid requires q_min < q_max, got [" + std::to_string(q_min) +
                          ", " + std::to_string(q_max) + ")");
    }
    if (n_points < 8 || !power_of_two(n_points)) {
        throw DomainError("grid requires n_points a power of two >= 8, got " +
                          std::to_string(n_points));
    }
}

std::vector<double> Grid::points() const {
    std::vector<double> out(static_cast<size_t>(n_));
    for (int i = 0; i < n_; ++i) out[static_cast<size_t>(i)] = point(i);
    return out;
}

int Grid::nearest_index(double x) const {
    const int i = static_cast<int>(std::lround((x - q_min_) / spacing()));
    if (i < 0) return 0;
    if (i >= n_) return n_ - 1;
    return i;
}

Grid make_grid(double q_min, double q_max, int n_points) {
    return Grid(q_min, q_max, n_points);
}

} // namespace qmarket
