#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "qmarket/grid.hpp"
#include "qmarket/strategies.hpp"
#include "qmarket/wavefunction.hpp"

namespace qmarket {

// Deterministic portable generator: mt19937_64 is fully specified by the
// standard, so identical seeds give identical runs on every platform.
// Uniforms take the top 53 bits; all density sampling goes through inverse
// CDFs, never through implementation-defined std distributions.
class SimRng {
public:
    explicit SimRng(std::uint64_t seed) : engine_(seed) {}

    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    bool bernoulli(double p) { return uniform01() < p; }

private:
    std::mt19937_64 engine_;
};

enum class Basis { Demand, Supply };

// One trader: a demand state quoted on the log-price axis and a supply state
// on the momentum axis, plus the basis the market measured last.
struct Player {
    int id = 0;
    Wavefunction demand_state;
    Wavefunction supply_state;
    Basis basis = Basis::Demand;
    long frozen_ticks = 0; // consecutive ticks re-measured in the same basis
};

// Rest-of-the-World price law: a normalized density over log-price sampled by
// inverse CDF (piecewise-linear within cells), or a zero-width point mass.
class RWStrategy {
public:
    // Default-constructed law is a point mass at log-price 0.
    RWStrategy() = default;

    static RWStrategy from_density(const Grid& grid, std::vector<double> density);
    static RWStrategy gaussian(const Grid& grid, double mean, double stddev);
    // Degenerate law: every draw returns `price` exactly (the zero-width
    // limit of an epsilon-concentrated density).
    static RWStrategy point_mass(double price);

    // Draws one log-price; always consumes exactly one uniform so pinned and
    // unpinned runs on the same seed stay draw-aligned.
    double sample(SimRng& rng) const;

    bool is_point() const { return !grid_.has_value(); }
    double point_price() const { return point_price_; }
    const std::optional<Grid>& grid() const { return grid_; }
    const std::vector<double>& density() const { return density_; }

private:
    std::optional<Grid> grid_;
    std::vector<double> density_; // normalized: sum * spacing = 1
    std::vector<double> cum_;     // normalized cell-edge prefix masses
    double point_price_ = 0.0;
};

struct TickResult {
    int buys = 0;
    int sells = 0;
    bool transacted = false; // at least one buy and one sell this tick
    std::vector<std::uint8_t> accepted;
};

struct SimConfig {
    std::vector<Player> players;
    RWStrategy rw;
    long ticks = 10000;
    // Per-tick probability that a player is re-measured in the opposite
    // basis; otherwise the market re-measures demand.
    double switch_probability = 0.5;
    double crash_threshold = 0.05; // crashed iff transaction rate falls below
    std::uint64_t rng_seed = 1;

    void validate() const;
};

struct SimReport {
    std::vector<std::uint8_t> transactions_per_tick;
    double transaction_rate = 0.0;
    std::vector<double> price_series; // the RW quote of every tick
    double price_variance = 0.0;
    bool crashed = false;
    std::vector<long> accepts_per_player;
    long total_buys = 0;
    long total_sells = 0;
    std::vector<long> final_frozen_ticks; // per player, at the last tick
};

// One quotation round at the RW price: every demand-basis player buys one
// unit with probability demand_profile(demand_state, rw_price), every
// supply-basis player sells with probability supply_profile(supply_state,
// rw_price). Throws DomainError when rw_price falls outside a player's axis.
TickResult clear_tick(const std::vector<Player>& players, double rw_price, SimRng& rng);

// Full deterministic run: per tick, each player is re-measured (opposite
// basis with probability switch_probability, demand otherwise), RW quotes a
// price, and the tick clears. Identical configs give bit-identical reports.
SimReport run_simulation(const SimConfig& config);

// One run per switch probability, identical seed across runs. At f = 0 every
// player pins to the demand basis and the transaction rate is exactly zero.
std::vector<SimReport> zeno_experiment(const SimConfig& config,
                                       const std::vector<double>& frequencies);

// Same run with the RW law replaced by a point mass at pin_price; the
// quote variance collapses while acceptances stay draw-aligned with the
// unpinned run on the same seed.
SimReport monopolist_experiment(const SimConfig& config, double pin_price);

} // namespace qmarket
