// qmarket: command-line front end for the quantum market-game toolkit.
//
// Subcommands: spectrum | coherent | wigner | thermal | zeno | monopolist.
// Every invocation validates its parameters, runs one computation, and writes
// exactly one output artifact (CSV or JSON). Exit codes: 0 success, 1
// computation error (convergence, grid too small, I/O), 2 usage/config error.

#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "emit.hpp"
#include "qmarket/errors.hpp"
#include "qmarket/market.hpp"
#include "qmarket/risk.hpp"
#include "qmarket/strategies.hpp"
#include "qmarket/wigner.hpp"

namespace {

using nlohmann::json;
using namespace qmarket;
using namespace qmarket::cli;

// Raised during parameter/config validation; maps to exit code 2.
struct UsageError : std::runtime_error {
    explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

// Ties CLI options to config-file keys: a key in the --config document sets
// the same variable as the flag, with explicit flags winning. Unknown keys
// are rejected.
class ConfigBinder {
public:
    explicit ConfigBinder(CLI::App* app) : app_(app) {}

    template <class T>
    CLI::Option* bind(const std::string& flag, T& var, const std::string& desc) {
        CLI::Option* opt = app_->add_option(flag, var, desc);
        appliers_[key_of(flag)] = [opt, &var](const json& j) {
            if (opt->count() == 0) var = j.get<T>();
        };
        return opt;
    }

    void apply_file(const std::string& path) const {
        std::ifstream is(path);
        if (!is) throw UsageError("cannot read config file: " + path);
        json cfg;
        try {
            is >> cfg;
        } catch (const json::exception& e) {
            throw UsageError("config parse error in " + path + ": " + e.what());
        }
        if (!cfg.is_object()) throw UsageError("config root must be a JSON object");
        for (const auto& [key, value] : cfg.items()) {
            const auto it = appliers_.find(key);
            if (it == appliers_.end()) throw UsageError("unknown config key: " + key);
            try {
                it->second(value);
            } catch (const json::exception& e) {
                throw UsageError("config key '" + key + "': " + e.what());
            }
        }
    }

private:
    static std::string key_of(const std::string& flag) {
        std::string name = flag.substr(0, flag.find(','));
        while (!name.empty() && name.front() == '-') name.erase(name.begin());
        return name;
    }

    CLI::App* app_;
    std::map<std::string, std::function<void(const json&)>> appliers_;
};

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct CommonOpts {
    double m = 1.0;
    double theta = kTwoPi;
    double hbar_e = 1.0;
    double big_theta = 0.0;
    double q0 = 0.0;
    double p0 = 0.0;

    double grid_min = -10.0;
    double grid_max = 10.0;
    int grid_n = 1024;

    std::string output;
    std::string format = "csv";
    std::string config_path;

    RiskParams risk() const { return RiskParams{m, theta, hbar_e, big_theta, q0, p0}; }

    Grid grid() const {
        try {
            return Grid(grid_min, grid_max, grid_n);
        } catch (const DomainError& e) {
            throw UsageError(e.what());
        }
    }

    std::string out_path(const std::string& subcommand) const {
        if (!output.empty()) return output;
        return subcommand + "." + format;
    }
};

struct MarketOpts {
    int players = 4;
    long ticks = 10000;
    std::uint64_t seed = 1;
    double switch_probability = 0.5;
    double crash_threshold = 0.05;
    double rw_mean = 0.0;
    double rw_std = 1.0;
    double player_q0 = 0.0;
    double player_p0 = 0.0;
    double player_sigma = 1.0;
};

void add_common(ConfigBinder& bind, CommonOpts& o) {
    bind.bind("--m", o.m, "risk asymmetry between buying and selling (m > 0)");
    bind.bind("--theta", o.theta, "characteristic transaction time (omega = 2 pi / theta)");
    bind.bind("--hbar-e", o.hbar_e, "uncertainty scale hbar_E");
    bind.bind("--big-theta", o.big_theta, "noncommutativity strength Theta >= 0");
    bind.bind("--q0", o.q0, "demand centering offset");
    bind.bind("--p0", o.p0, "supply centering offset");
    bind.bind("--grid-min", o.grid_min, "lower edge of the log-price grid");
    bind.bind("--grid-max", o.grid_max, "upper edge of the log-price grid (excluded)");
    bind.bind("--grid-n", o.grid_n, "grid points (power of two >= 8)");
    bind.bind("--output,-o", o.output, "output path (default: <subcommand>.<format>)");
    bind.bind("--format", o.format, "output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
}

void add_market(ConfigBinder& bind, MarketOpts& o) {
    bind.bind("--players", o.players, "number of traders (alternating demand/supply start)");
    bind.bind("--ticks", o.ticks, "quotation rounds per run");
    bind.bind("--seed", o.seed, "RNG seed");
    bind.bind("--switch-probability", o.switch_probability,
              "per-tick probability of re-measuring a player in the opposite basis");
    bind.bind("--crash-threshold", o.crash_threshold,
              "transaction rate below which the run counts as crashed");
    bind.bind("--rw-mean", o.rw_mean, "mean of the Rest-of-the-World price law");
    bind.bind("--rw-std", o.rw_std, "std-dev of the Rest-of-the-World price law");
    bind.bind("--player-q0", o.player_q0, "demand state center");
    bind.bind("--player-p0", o.player_p0, "supply state center");
    bind.bind("--player-sigma", o.player_sigma, "width of the player strategy states");
}

void validate_risk(const RiskParams& params) {
    try {
        params.validate();
    } catch (const DomainError& e) {
        throw UsageError(e.what());
    }
}

SimConfig build_market_config(const MarketOpts& mo, const Grid& grid, double hbar_e) {
    if (mo.players < 0) throw UsageError("--players must be >= 0");
    if (mo.ticks < 1) throw UsageError("--ticks must be >= 1");
    if (!(mo.switch_probability >= 0.0 && mo.switch_probability <= 1.0)) {
        throw UsageError("--switch-probability must lie in [0, 1]");
    }
    if (!(mo.crash_threshold >= 0.0 && mo.crash_threshold <= 1.0)) {
        throw UsageError("--crash-threshold must lie in [0, 1]");
    }
    if (!(mo.rw_std > 0.0)) throw UsageError("--rw-std must be > 0");
    if (!(mo.player_sigma > 0.0)) throw UsageError("--player-sigma must be > 0");

    SimConfig cfg;
    for (int i = 0; i < mo.players; ++i) {
        cfg.players.push_back(Player{
            i,
            gaussian_state(grid, mo.player_q0, mo.player_sigma, Representation::Position, hbar_e),
            gaussian_state(grid, mo.player_p0, mo.player_sigma, Representation::Momentum, hbar_e),
            i % 2 == 0 ? Basis::Demand : Basis::Supply,
            0});
    }
    cfg.rw = RWStrategy::gaussian(grid, mo.rw_mean, mo.rw_std);
    cfg.ticks = mo.ticks;
    cfg.switch_probability = mo.switch_probability;
    cfg.crash_threshold = mo.crash_threshold;
    cfg.rng_seed = mo.seed;
    return cfg;
}

std::string grid_json(const Grid& g) {
    return JsonObject{}
        .add_number("q_min", g.q_min())
        .add_number("q_max", g.q_max())
        .add_int("n_points", g.n_points())
        .str();
}

std::string phase_grid_json(const PhaseGrid& pg) {
    return JsonObject{}
        .add_raw("q_axis", grid_json(pg.q_axis))
        .add_raw("p_axis", grid_json(pg.p_axis))
        .str();
}

// ---- subcommand runners ----------------------------------------------------

int run_spectrum(const CommonOpts& co, int levels) {
    const RiskParams params = co.risk();
    validate_risk(params);
    const Grid grid = co.grid();
    if (levels < 1 || levels >= grid.n_points() / 4) {
        throw UsageError("--levels must satisfy 1 <= levels < grid-n / 4");
    }

    const SpectralResult result = spectrum(params, grid, levels);
    if (result.grid_too_small) {
        std::cerr << "warning: eigenstate tail mass " << result.max_tail_mass
                  << " exceeds 1e-10 in the outer 5% of the grid; widen the grid\n";
    }
    const double h_e = 2.0 * params.theta * result.eigenvalues.front();

    if (co.format == "csv") {
        Table t{{"n", "eigenvalue"}, {}};
        for (size_t n = 0; n < result.eigenvalues.size(); ++n) {
            t.add_row({std::to_string(n), format_double(result.eigenvalues[n])});
        }
        write_file(co.out_path("spectrum"), to_csv(t));
    } else {
        JsonArray values;
        for (const double e : result.eigenvalues) values.push_number(e);
        const std::string doc = JsonObject{}
                                    .add_int("levels", levels)
                                    .add_number("m", params.m)
                                    .add_number("theta", params.theta)
                                    .add_number("hbar_e", params.hbar_e)
                                    .add_number("big_theta", params.big_theta)
                                    .add_number("effective_hbar", params.effective_hbar())
                                    .add_number("omega", params.omega())
                                    .add_raw("grid", grid_json(grid))
                                    .add_raw("eigenvalues", values.str())
                                    .add_number("minimal_risk_constant", h_e)
                                    .str();
        write_file(co.out_path("spectrum"), doc + "\n");
    }
    return 0;
}

int run_coherent(const CommonOpts& co, double r, double eta) {
    const CoherentParams cp{r, eta, co.q0, co.p0};
    try {
        cp.validate();
    } catch (const DomainError& e) {
        throw UsageError(e.what());
    }
    if (!(co.hbar_e > 0.0)) throw UsageError("--hbar-e must be > 0");
    const Grid grid = co.grid();

    const Wavefunction psi = coherent_strategy(cp, grid, co.hbar_e);
    const Dispersions d = dispersions(psi);
    const double residual = annihilation_residual(psi, cp);
    const double product = d.delta_p * d.delta_q * std::sqrt(1.0 - d.corr * d.corr);

    if (co.format == "csv") {
        Table t{{"r", "eta", "hbar_e", "delta_q", "delta_p", "covariance", "corr",
                 "uncertainty_product", "residual"},
                {}};
        t.add_row({format_double(cp.r), format_double(cp.eta), format_double(co.hbar_e),
                   format_double(d.delta_q), format_double(d.delta_p),
                   format_double(d.covariance), format_double(d.corr), format_double(product),
                   format_double(residual)});
        write_file(co.out_path("coherent"), to_csv(t));
    } else {
        const std::string doc = JsonObject{}
                                    .add_number("r", cp.r)
                                    .add_number("eta", cp.eta)
                                    .add_number("hbar_e", co.hbar_e)
                                    .add_number("q0", cp.q0)
                                    .add_number("p0", cp.p0)
                                    .add_number("delta_q", d.delta_q)
                                    .add_number("delta_p", d.delta_p)
                                    .add_number("covariance", d.covariance)
                                    .add_number("corr", d.corr)
                                    .add_number("uncertainty_product", product)
                                    .add_number("residual", residual)
                                    .str();
        write_file(co.out_path("coherent"), doc + "\n");
    }
    return 0;
}

PhaseGrid resolve_phase_grid(const CommonOpts& co, const RiskParams& params, int phase_n,
                             double phase_half, bool thermal, double beta_or_level) {
    if (phase_n < 8) throw UsageError("--phase-n must be a power of two >= 8");
    if (phase_half < 0.0) throw UsageError("--phase-half must be >= 0");
    try {
        if (phase_half > 0.0) {
            return PhaseGrid{Grid(params.q0 - phase_half, params.q0 + phase_half, phase_n),
                             Grid(params.p0 - phase_half, params.p0 + phase_half, phase_n)};
        }
        return thermal ? phase_grid_for_thermal(params, beta_or_level, phase_n)
                       : phase_grid_for_level(params, static_cast<int>(beta_or_level), phase_n);
    } catch (const DomainError& e) {
        throw UsageError(e.what());
    }
}

int run_wigner(const CommonOpts& co, int level, int phase_n, double phase_half) {
    const RiskParams params = co.risk();
    validate_risk(params);
    if (level < 0) throw UsageError("--level must be >= 0");
    const PhaseGrid pg = resolve_phase_grid(co, params, phase_n, phase_half, false,
                                            static_cast<double>(level));

    const PhaseDensity w = wigner_excited(level, params, pg);

    if (co.format == "csv") {
        Table t{{"q", "p", "value"}, {}};
        t.rows.reserve(pg.size());
        for (int iq = 0; iq < pg.nq(); ++iq) {
            for (int ip = 0; ip < pg.np(); ++ip) {
                t.add_row({format_double(pg.q_axis.point(iq)), format_double(pg.p_axis.point(ip)),
                           format_double(w.value(iq, ip))});
            }
        }
        write_file(co.out_path("wigner"), to_csv(t));
    } else {
        const double center =
            w.value(pg.q_axis.nearest_index(params.q0), pg.p_axis.nearest_index(params.p0));
        const std::string doc = JsonObject{}
                                    .add_int("level", level)
                                    .add_number("hbar_e", params.hbar_e)
                                    .add_number("effective_hbar", params.effective_hbar())
                                    .add_number("omega", params.omega())
                                    .add_raw("grid", phase_grid_json(pg))
                                    .add_number("mass", w.mass())
                                    .add_number("center_value", center)
                                    .add_number("min_value", w.min_value())
                                    .str();
        write_file(co.out_path("wigner"), doc + "\n");
    }
    return 0;
}

int run_thermal(const CommonOpts& co, double beta, int phase_n, double phase_half) {
    const RiskParams params = co.risk();
    validate_risk(params);
    if (!(beta > 0.0)) throw UsageError("--beta must be > 0");
    const PhaseGrid pg = resolve_phase_grid(co, params, phase_n, phase_half, true, beta);

    const ThermalParams tp = thermal_params(beta, params);
    const PhaseDensity rho = thermal_density(beta, params, pg);
    const double risk = mean_risk(rho, params);
    const double ent = entropy(rho);

    if (co.format == "csv") {
        Table t{{"beta", "x", "mean_risk", "entropy"}, {}};
        t.add_row({format_double(beta), format_double(tp.x), format_double(risk),
                   format_double(ent)});
        write_file(co.out_path("thermal"), to_csv(t));
    } else {
        const std::string doc = JsonObject{}
                                    .add_number("beta", beta)
                                    .add_number("x", tp.x)
                                    .add_number("mean_risk", risk)
                                    .add_number("entropy", ent)
                                    .add_raw("grid", phase_grid_json(pg))
                                    .str();
        write_file(co.out_path("thermal"), doc + "\n");
    }
    return 0;
}

int run_zeno(const CommonOpts& co, const MarketOpts& mo, const std::vector<double>& frequencies) {
    validate_risk(co.risk());
    const Grid grid = co.grid();
    for (const double f : frequencies) {
        if (!(f >= 0.0 && f <= 1.0)) throw UsageError("--frequencies entries must lie in [0, 1]");
    }
    const SimConfig config = build_market_config(mo, grid, co.hbar_e);

    const std::vector<SimReport> reports = zeno_experiment(config, frequencies);

    if (co.format == "csv") {
        Table t{{"frequency", "transaction_rate", "price_variance", "crashed", "ticks", "seed"},
                {}};
        for (size_t i = 0; i < reports.size(); ++i) {
            t.add_row({format_double(frequencies[i]), format_double(reports[i].transaction_rate),
                       format_double(reports[i].price_variance),
                       reports[i].crashed ? "true" : "false", std::to_string(config.ticks),
                       std::to_string(config.rng_seed)});
        }
        write_file(co.out_path("zeno"), to_csv(t));
    } else {
        JsonArray rows;
        for (size_t i = 0; i < reports.size(); ++i) {
            rows.push_raw(JsonObject{}
                              .add_number("frequency", frequencies[i])
                              .add_number("transaction_rate", reports[i].transaction_rate)
                              .add_number("price_variance", reports[i].price_variance)
                              .add_bool("crashed", reports[i].crashed)
                              .str());
        }
        const std::string doc = JsonObject{}
                                    .add_int("ticks", config.ticks)
                                    .add_int("seed", static_cast<long long>(config.rng_seed))
                                    .add_int("players", static_cast<long long>(config.players.size()))
                                    .add_raw("reports", rows.str())
                                    .str();
        write_file(co.out_path("zeno"), doc + "\n");
    }
    return 0;
}

int run_monopolist(const CommonOpts& co, const MarketOpts& mo, double pin_price) {
    validate_risk(co.risk());
    const Grid grid = co.grid();
    if (!grid.contains(pin_price)) throw UsageError("--pin-price must lie inside the grid");
    const SimConfig config = build_market_config(mo, grid, co.hbar_e);

    const SimReport pinned = monopolist_experiment(config, pin_price);
    const SimReport unpinned = run_simulation(config);

    if (co.format == "csv") {
        Table t{{"run", "transaction_rate", "price_variance", "crashed"}, {}};
        t.add_row({"pinned", format_double(pinned.transaction_rate),
                   format_double(pinned.price_variance), pinned.crashed ? "true" : "false"});
        t.add_row({"unpinned", format_double(unpinned.transaction_rate),
                   format_double(unpinned.price_variance), unpinned.crashed ? "true" : "false"});
        write_file(co.out_path("monopolist"), to_csv(t));
    } else {
        const auto report_json = [](const SimReport& r) {
            return JsonObject{}
                .add_number("transaction_rate", r.transaction_rate)
                .add_number("price_variance", r.price_variance)
                .add_bool("crashed", r.crashed)
                .str();
        };
        const std::string doc = JsonObject{}
                                    .add_number("pin_price", pin_price)
                                    .add_int("ticks", config.ticks)
                                    .add_int("seed", static_cast<long long>(config.rng_seed))
                                    .add_raw("pinned", report_json(pinned))
                                    .add_raw("unpinned", report_json(unpinned))
                                    .str();
        write_file(co.out_path("monopolist"), doc + "\n");
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"qmarket: risk-operator spectra, coherent/Wigner/thermal strategy "
                 "densities, and market measurement experiments"};
    app.require_subcommand(1);

    CommonOpts co;
    MarketOpts mo;
    int levels = 8;
    double r = 0.0;
    double eta = 1.0;
    int level = 0;
    int phase_n = 256;
    double phase_half = 0.0;
    double beta = 1.0;
    std::vector<double> frequencies = {0.0, 0.25, 0.5, 0.75, 1.0};
    double pin_price = 0.0;

    std::function<int()> runner;
    std::vector<ConfigBinder> binders;
    binders.reserve(6);

    const auto setup = [&](CLI::App* sub) -> ConfigBinder& {
        binders.emplace_back(sub);
        ConfigBinder& bind = binders.back();
        add_common(bind, co);
        sub->add_option("--config", co.config_path,
                        "JSON file of option values (explicit flags win)");
        return bind;
    };

    CLI::App* sp = app.add_subcommand("spectrum", "eigenvalues of the risk inclination operator");
    {
        ConfigBinder& bind = setup(sp);
        bind.bind("--levels,-k", levels, "number of eigenpairs");
        sp->callback([&] { runner = [&] { return run_spectrum(co, levels); }; });
    }

    CLI::App* ch = app.add_subcommand("coherent", "correlated coherent strategy dispersions");
    {
        ConfigBinder& bind = setup(ch);
        bind.bind("--r", r, "correlation coefficient in (-1, 1)");
        bind.bind("--eta", eta, "scale eta > 0");
        ch->callback([&] { runner = [&] { return run_coherent(co, r, eta); }; });
    }

    CLI::App* wg = app.add_subcommand("wigner", "Wigner measure of an eigenstrategy");
    {
        ConfigBinder& bind = setup(wg);
        bind.bind("--level,-n", level, "oscillator level n >= 0");
        bind.bind("--phase-n", phase_n, "phase grid points per axis (power of two)");
        bind.bind("--phase-half", phase_half, "phase grid half-width (0 = auto 8-sigma)");
        wg->callback([&] { runner = [&] { return run_wigner(co, level, phase_n, phase_half); }; });
    }

    CLI::App* th = app.add_subcommand("thermal", "closed-form thermal strategy density");
    {
        ConfigBinder& bind = setup(th);
        bind.bind("--beta", beta, "inverse risk-temperature > 0");
        bind.bind("--phase-n", phase_n, "phase grid points per axis (power of two)");
        bind.bind("--phase-half", phase_half, "phase grid half-width (0 = auto 8-sigma)");
        th->callback([&] { runner = [&] { return run_thermal(co, beta, phase_n, phase_half); }; });
    }

    CLI::App* ze = app.add_subcommand("zeno", "transaction rates under basis re-measurement");
    {
        ConfigBinder& bind = setup(ze);
        add_market(bind, mo);
        bind.bind("--frequencies", frequencies, "switch probabilities to sweep")
            ->delimiter(',');
        ze->callback([&] { runner = [&] { return run_zeno(co, mo, frequencies); }; });
    }

    CLI::App* mp = app.add_subcommand("monopolist", "price pinning vs the free price law");
    {
        ConfigBinder& bind = setup(mp);
        add_market(bind, mo);
        bind.bind("--pin-price", pin_price, "log-price the monopolist pins");
        mp->callback([&] { runner = [&] { return run_monopolist(co, mo, pin_price); }; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        std::cerr << "run '" << (argc > 0 ? argv[0] : "qmarket") << " --help' for usage\n";
        return 2;
    }

    try {
        if (!co.config_path.empty()) {
            // Binders were created in subcommand declaration order; apply the
            // config through the one whose subcommand actually parsed.
            const std::vector<CLI::App*> parsed = app.get_subcommands();
            const std::vector<CLI::App*> all = {sp, ch, wg, th, ze, mp};
            for (size_t i = 0; i < all.size(); ++i) {
                if (!parsed.empty() && all[i] == parsed.front()) {
                    binders[i].apply_file(co.config_path);
                    break;
                }
            }
        }
        if (!runner) {
            std::cerr << "error: no subcommand given\n";
            return 2;
        }
        return runner();
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
