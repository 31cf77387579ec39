// Command-line front end: Monte Carlo prices, implied volatilities and skews of
// arithmetic Asian calls, the short-maturity formulas, and experiment plans.

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>

#include "asian/analytic_core.hpp"
#include "asian/asymptotics.hpp"
#include "asian/config.hpp"
#include "asian/csv.hpp"
#include "asian/errors.hpp"
#include "asian/iv_lab.hpp"
#include "asian/mc_pricer.hpp"

namespace {

using asian::config::ConfigMap;

// Raw flag values; only flags given on the command line reach the config map.
struct SharedFlags {
    std::map<std::string, std::string> values;
    std::map<std::string, CLI::Option*> options;

    void add(CLI::App& app, const std::string& name, const std::string& help) {
        options[name] = app.add_option("--" + name, values[name], help);
    }

    ConfigMap overrides() const {
        ConfigMap map;
        for (const auto& [name, opt] : options)
            if (opt->count() > 0) map.set(name, values.at(name));
        return map;
    }
};

void add_shared(CLI::App& app, SharedFlags& f) {
    f.add(app, "model", "const | sabr | fbergomi | localvol-cev");
    f.add(app, "s0", "spot price");
    f.add(app, "strike", "strike (defaults to s0)");
    f.add(app, "maturity", "maturity in years");
    f.add(app, "rho", "spot/volatility correlation");
    f.add(app, "sigma0", "spot volatility");
    f.add(app, "alpha", "SABR vol-of-vol");
    f.add(app, "vov", "fractional Bergomi vol-of-vol");
    f.add(app, "hurst", "Hurst exponent");
    f.add(app, "cev-nu", "CEV local vol scale");
    f.add(app, "cev-beta", "CEV local vol exponent");
    f.add(app, "paths", "Monte Carlo paths");
    f.add(app, "steps", "time steps");
    f.add(app, "seed", "random seed");
    f.add(app, "estimator", "plain | antithetic | control_variate | cv_antithetic");
    f.add(app, "cv-mode", "discrete | continuous geometric reference");
    f.add(app, "threads", "worker threads (0 = all cores)");
    f.add(app, "out", "write a CSV file");
}

void emit(const ConfigMap& cfg, const std::vector<std::string>& header, const std::vector<asian::CsvCell>& row) {
    asian::CsvWriter console(std::cout, header);
    console.row(row);
    const std::string path = cfg.text("out", "");
    if (path.empty()) return;
    std::ofstream file(path, std::ios::binary);
    if (!file) throw asian::ConfigError("cannot write output file '" + path + "'");
    asian::CsvWriter csv(file, header);
    csv.row(row);
}

ConfigMap resolve(const ConfigMap& defaults, const SharedFlags& flags) {
    ConfigMap cfg = defaults;
    cfg.merge_from(flags.overrides());
    cfg.require_known(asian::known_config_keys());
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Arithmetic Asian options under stochastic volatility: pricing, implied volatility and "
                 "short-maturity asymptotics"};
    app.require_subcommand(1);

    SharedFlags price_flags, iv_flags, skew_flags, asym_flags, exp_flags, fbm_flags;
    auto* price = app.add_subcommand("price", "Monte Carlo price of the arithmetic Asian call");
    add_shared(*price, price_flags);
    auto* iv = app.add_subcommand("iv", "ATM implied volatility from a Monte Carlo price");
    add_shared(*iv, iv_flags);
    auto* skew = app.add_subcommand("skew", "ATM skew by central difference on common paths");
    add_shared(*skew, skew_flags);
    std::string dk = "0.001";
    skew->add_option("--dk", dk, "relative strike bump");
    auto* asym = app.add_subcommand("asymptotics", "Short-maturity level and skew formulas");
    add_shared(*asym, asym_flags);
    auto* exp = app.add_subcommand("experiment", "Run an experiment plan (flat TOML or JSON)");
    std::string plan_path;
    exp->add_option("plan", plan_path, "plan file")->required();
    add_shared(*exp, exp_flags);
    auto* fbm = app.add_subcommand("fbm-check", "Sample vs analytic covariance of (W', Z)");
    add_shared(*fbm, fbm_flags);
    std::string hurst_list;
    fbm->add_option("--hurst-list", hurst_list, "comma-separated Hurst exponents");

    CLI11_PARSE(app, argc, argv);

    try {
        if (price->parsed()) {
            const ConfigMap cfg = resolve({}, price_flags);
            const auto model = asian::model_from_config(cfg);
            const auto market = asian::market_from_config(cfg);
            const auto mc = asian::mc_from_config(cfg);
            const auto e = asian::price_asian(model, market, mc);
            emit(cfg, {"model", "strike", "maturity", "estimator", "price", "std_error", "ci_low", "ci_high", "n_paths"},
                 {asian::model_name(model), market.strike, market.maturity, asian::to_string(mc.estimator), e.mean,
                  e.std_error, e.ci_low, e.ci_high, static_cast<long long>(e.n_effective)});
        } else if (iv->parsed()) {
            const ConfigMap cfg = resolve({}, iv_flags);
            const auto model = asian::model_from_config(cfg);
            const auto market = asian::market_from_config(cfg);
            const auto p = asian::estimate_atm_iv(model, market, asian::mc_from_config(cfg));
            const double theory = asian::atm_level(asian::spot_vol(model, market));
            emit(cfg, {"model", "maturity", "iv", "iv_stderr", "theory_level"},
                 {asian::model_name(model), market.maturity, p.iv, p.iv_stderr, theory});
        } else if (skew->parsed()) {
            ConfigMap defaults;
            defaults.set("dk", dk);
            const ConfigMap cfg = resolve(defaults, skew_flags);
            const auto model = asian::model_from_config(cfg);
            const auto market = asian::market_from_config(cfg);
            const auto s = asian::estimate_skew_fd(model, market, asian::mc_from_config(cfg), cfg.number("dk", 0.001));
            const auto q = asian::atm_skew_closed(model, market);
            emit(cfg, {"model", "maturity", "skew", "skew_stderr", "theory_skew", "theory_scaled"},
                 {asian::model_name(model), market.maturity, s.slope, s.std_error, q.skew,
                  std::string(q.scaled ? "true" : "false")});
        } else if (asym->parsed()) {
            const ConfigMap cfg = resolve({}, asym_flags);
            const auto model = asian::model_from_config(cfg);
            const auto market = asian::market_from_config(cfg);
            asian::validate(model, market);
            const double sigma0 = asian::spot_vol(model, market);
            const double rho = asian::effective_rho(model, market);
            const auto kernel = asian::skew_kernel(model, market);
            const auto closed = asian::atm_skew_closed(model, market);
            const auto finite = asian::atm_skew_general(sigma0, rho, kernel, market.maturity, asian::SkewMode::finite);
            const auto limit = asian::atm_skew_general(sigma0, rho, kernel, market.maturity, asian::SkewMode::limit);
            const double proxy =
                asian::price_proxy(model, market, std::log(market.strike), asian::SkewSource::closed);
            emit(cfg,
                 {"model", "sigma0", "maturity", "level", "skew_closed", "skew_general_limit", "skew_at_maturity",
                  "scaling_exponent", "scaled", "proxy_price"},
                 {asian::model_name(model), sigma0, market.maturity, closed.level, closed.skew, limit.skew,
                  finite.slope_at_maturity, closed.scaling_exponent, std::string(closed.scaled ? "true" : "false"),
                  proxy});
        } else if (exp->parsed()) {
            ConfigMap cfg = asian::config::load_file(plan_path);
            cfg.merge_from(exp_flags.overrides());
            const auto plan = asian::plan_from_config(cfg);
            asian::run_experiment(plan);
            std::cout << "wrote " << plan.output << '\n';
        } else if (fbm->parsed()) {
            ConfigMap defaults;
            defaults.set("kind", std::string("fbm_check"));
            defaults.set("maturity", 1.0);
            defaults.set("steps", 10.0);
            defaults.set("paths", 100000.0);
            if (!hurst_list.empty()) defaults.set("hurst_list", hurst_list);
            ConfigMap cfg = resolve(defaults, fbm_flags);
            if (fbm_flags.overrides().contains("hurst") && hurst_list.empty())
                cfg.set("hurst_list", cfg.number("hurst", 0.4));
            auto plan = asian::plan_from_config(cfg);
            if (plan.output.empty()) {
                asian::run_experiment(plan, std::cout);
            } else {
                asian::run_experiment(plan);
                std::cout << "wrote " << plan.output << '\n';
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
