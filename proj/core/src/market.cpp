#include "qmarket/market.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "qmarket/errors.hpp"

namespace qmarket {

namespace {

void validate_player(const Player& p) {
    if (p.demand_state.representation() != Representation::Position) {
        throw DomainError("player " + std::to_string(p.id) +
                          ": demand_state must be position-representation");
    }
    if (p.supply_state.representation() != Representation::Momentum) {
        throw DomainError("player " + std::to_string(p.id) +
                          ": supply_state must be momentum-representation");
    }
}

double population_variance(const std::vector<double>& xs) {
    if (xs.empty()) return 0.0;
    double mean = 0.0;
    for (const double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    double var = 0.0;
    for (const double x : xs) var += (x - mean) * (x - mean);
    return var / static_cast<double>(xs.size());
}

} // namespace

RWStrategy RWStrategy::from_density(const Grid& grid, std::vector<double> density) {
    if (static_cast<int>(density.size()) != grid.n_points()) {
        throw DomainError("RWStrategy: density size does not match the grid");
    }
    double total = 0.0;
    for (const double d : density) {
        if (!(d >= 0.0) || !std::isfinite(d)) {
            throw DomainError("RWStrategy: density must be non-negative and finite");
        }
        total += d;
    }
    total *= grid.spacing();
    if (!(total > 0.0)) throw DomainError("RWStrategy: density has zero mass");

    RWStrategy rw;
    rw.grid_ = grid;
    rw.density_ = std::move(density);
    for (auto& d : rw.density_) d /= total;
    rw.cum_.assign(static_cast<size_t>(grid.n_points()) + 1, 0.0);
    for (int j = 0; j < grid.n_points(); ++j) {
        rw.cum_[static_cast<size_t>(j) + 1] =
            rw.cum_[static_cast<size_t>(j)] + rw.density_[static_cast<size_t>(j)] * grid.spacing();
    }
    // Guard rounding so inverse lookup always lands.
    rw.cum_.back() = 1.0;
    return rw;
}

RWStrategy RWStrategy::gaussian(const Grid& grid, double mean, double stddev) {
    if (!(stddev > 0.0)) throw DomainError("RWStrategy::gaussian: stddev must be > 0");
    std::vector<double> density(static_cast<size_t>(grid.n_points()));
    for (int j = 0; j < grid.n_points(); ++j) {
        const double d = (grid.point(j) - mean) / stddev;
        density[static_cast<size_t>(j)] = std::exp(-0.5 * d * d);
    }
    return from_density(grid, std::move(density));
}

RWStrategy RWStrategy::point_mass(double price) {
    if (!std::isfinite(price)) throw DomainError("RWStrategy::point_mass: price must be finite");
    RWStrategy rw;
    rw.point_price_ = price;
    return rw;
}

double RWStrategy::sample(SimRng& rng) const {
    const double u = rng.uniform01();
    if (is_point()) return point_price_;
    // Inverse CDF: find the cell containing u, interpolate linearly inside.
    const auto it = std::upper_bound(cum_.begin(), cum_.end(), u);
    int j = static_cast<int>(std::distance(cum_.begin(), it)) - 1;
    j = std::clamp(j, 0, grid_->n_points() - 1);
    const double lo = cum_[static_cast<size_t>(j)];
    const double hi = cum_[static_cast<size_t>(j) + 1];
    const double frac = hi > lo ? (u - lo) / (hi - lo) : 0.0;
    return grid_->point(j) + frac * grid_->spacing();
}

void SimConfig::validate() const {
    if (ticks < 1) throw DomainError("SimConfig: ticks must be >= 1");
    if (!(switch_probability >= 0.0 && switch_probability <= 1.0)) {
        throw DomainError("SimConfig: switch_probability must lie in [0, 1]");
    }
    if (!(crash_threshold >= 0.0 && crash_threshold <= 1.0)) {
        throw DomainError("SimConfig: crash_threshold must lie in [0, 1]");
    }
    for (const Player& p : players) validate_player(p);
}

TickResult clear_tick(const std::vector<Player>& players, double rw_price, SimRng& rng) {
    TickResult result;
    result.accepted.resize(players.size(), 0);
    for (size_t i = 0; i < players.size(); ++i) {
        const Player& p = players[i];
        validate_player(p);
        const Wavefunction& state =
            p.basis == Basis::Demand ? p.demand_state : p.supply_state;
        if (!state.grid().contains(rw_price)) {
            throw DomainError("clear_tick: rw_price " + std::to_string(rw_price) +
                              " is outside player " + std::to_string(p.id) + "'s axis");
        }
        const double prob = p.basis == Basis::Demand
                                ? demand_profile(p.demand_state, rw_price)
                                : supply_profile(p.supply_state, rw_price);
        if (rng.bernoulli(prob)) {
            result.accepted[i] = 1;
            (p.basis == Basis::Demand ? result.buys : result.sells) += 1;
        }
    }
    result.transacted = result.buys > 0 && result.sells > 0;
    return result;
}

SimReport run_simulation(const SimConfig& config) {
    config.validate();
    SimRng rng(config.rng_seed);
    std::vector<Player> players = config.players;

    // The acceptance curves never change during a run; precompute them so a
    // tick costs O(players * log n) instead of O(players * n).
    std::vector<CumulativeDensity> demand_curve;
    std::vector<CumulativeDensity> supply_curve;
    demand_curve.reserve(players.size());
    supply_curve.reserve(players.size());
    for (const Player& p : players) {
        demand_curve.push_back(CumulativeDensity::from_state(p.demand_state));
        supply_curve.push_back(CumulativeDensity::from_state(p.supply_state));
    }

    SimReport report;
    report.transactions_per_tick.resize(static_cast<size_t>(config.ticks), 0);
    report.price_series.resize(static_cast<size_t>(config.ticks), 0.0);
    report.accepts_per_player.assign(players.size(), 0);

    long transacted_ticks = 0;
    for (long t = 0; t < config.ticks; ++t) {
        for (Player& p : players) {
            const Basis next = rng.bernoulli(config.switch_probability)
                                   ? (p.basis == Basis::Demand ? Basis::Supply : Basis::Demand)
                                   : Basis::Demand;
            p.frozen_ticks = next == p.basis ? p.frozen_ticks + 1 : 0;
            p.basis = next;
        }

        const double price = config.rw.sample(rng);
        report.price_series[static_cast<size_t>(t)] = price;

        int buys = 0;
        int sells = 0;
        for (size_t i = 0; i < players.size(); ++i) {
            const Player& p = players[i];
            const double prob = p.basis == Basis::Demand
                                    ? demand_curve[i].mass_below(price)
                                    : supply_curve[i].mass_above(price);
            if (rng.bernoulli(prob)) {
                report.accepts_per_player[i] += 1;
                (p.basis == Basis::Demand ? buys : sells) += 1;
            }
        }
        report.total_buys += buys;
        report.total_sells += sells;
        if (buys > 0 && sells > 0) {
            report.transactions_per_tick[static_cast<size_t>(t)] = 1;
            ++transacted_ticks;
        }
    }

    report.transaction_rate =
        static_cast<double>(transacted_ticks) / static_cast<double>(config.ticks);
    report.price_variance = population_variance(report.price_series);
    report.crashed = report.transaction_rate < config.crash_threshold;
    for (const Player& p : players) report.final_frozen_ticks.push_back(p.frozen_ticks);
    return report;
}

std::vector<SimReport> zeno_experiment(const SimConfig& config,
                                       const std::vector<double>& frequencies) {
    config.validate();
    for (const double f : frequencies) {
        if (!(f >= 0.0 && f <= 1.0)) {
            throw DomainError("zeno_experiment: frequencies must lie in [0, 1]");
        }
    }
    std::vector<SimReport> reports;
    reports.reserve(frequencies.size());
    for (const double f : frequencies) {
        SimConfig run = config;
        run.switch_probability = f;
        reports.push_back(run_simulation(run));
    }
    return reports;
}

SimReport monopolist_experiment(const SimConfig& config, double pin_price) {
    SimConfig run = config;
    run.rw = RWStrategy::point_mass(pin_price);
    return run_simulation(run);
}

} // namespace qmarket
