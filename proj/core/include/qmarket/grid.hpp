#pragma once

#include <vector>

namespace qmarket {

// Uniform axis with the periodic convention: n_points samples at
// q_min + i*spacing for i in [0, n_points), endpoint q_max excluded.
// n_points must be a power of two >= 8 so the position<->momentum
// transform pair stays exactly unitary.
//
// The member names follow the log-price use; the same type serves as a
// momentum axis.
class Grid {
public:
    Grid(double q_min, double q_max, int n_points);

    double q_min() const { return q_min_; }
    double q_max() const { return q_max_; }
    int n_points() const { return n_; }
    double spacing() const { return (q_max_ - q_min_) / n_; }
    double length() const { return q_max_ - q_min_; }
    double point(int i) const { return q_min_ + i * spacing(); }
    std::vector<double> points() const;

    // Index of the sample closest to x, clamped to [0, n_points).
    int nearest_index(double x) const;
    bool contains(double x) const { return x >= q_min_ && x < q_max_; }

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    double q_min_;
    double q_max_;
    int n_;
};

// Factory form of the constructor; throws DomainError on q_min >= q_max or
// n_points not a power of two >= 8.
Grid make_grid(double q_min, double q_max, int n_points);

} // namespace qmarket
