#include "asian/iv_lab.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "asian/analytic_core.hpp"
#include "asian/asymptotics.hpp"
#include "asian/csv.hpp"
#include "asian/errors.hpp"
#include "asian/path_engine.hpp"

namespace asian {

namespace {

double vega_at(const MarketSetup& market, double strike, double iv) {
    return bs_vega({std::log(market.s0), std::log(strike), market.maturity, iv});
}

SkewEstimate combine_skew(const IvPoint& down, const IvPoint& up, double price_cov, double vega_down,
                          double vega_up, double h) {
    SkewEstimate s;
    s.down = down;
    s.up = up;
    s.slope = (up.iv - down.iv) / (2.0 * h);
    double var = up.iv_stderr * up.iv_stderr + down.iv_stderr * down.iv_stderr;
    if (vega_down > 0.0 && vega_up > 0.0) var -= 2.0 * price_cov / (vega_down * vega_up);
    s.std_error = std::sqrt(std::max(var, 0.0)) / (2.0 * h);
    return s;
}

double theory_scaled_skew(const ModelSpec& model, const MarketSetup& market) {
    const auto q = atm_skew_closed(model, market);
    if (!q.scaled) return q.skew;
    // finite-T reading of the scaled slope: rough constant + T^(1/2-H) sqrt(3) sigma0 / 30
    const double h = hurst_exponent(model);
    return q.correlated + std::pow(market.maturity, 0.5 - h) * std::sqrt(3.0) * spot_vol(model, market) / 30.0;
}

double skew_scale(const ModelSpec& model, double maturity) {
    return std::pow(maturity, std::max(0.5 - hurst_exponent(model), 0.0));
}

std::string describe_failure(const std::exception& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), ',', ';');
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    return "error: " + msg;
}

ModelSpec with_volvol(const ModelSpec& model, double volvol) {
    if (const auto* m = std::get_if<Sabr>(&model)) return Sabr{m->sigma0, volvol};
    if (const auto* m = std::get_if<FractionalBergomi>(&model)) return FractionalBergomi{m->sigma0, volvol, m->hurst};
    throw ConfigError("proxy_error_table supports the sabr and fbergomi models only");
}

void run_level_sweep(const ExperimentPlan& plan, std::ostream& out) {
    CsvWriter csv(out, {"sigma0", "iv", "iv_stderr", "theory_level"});
    for (std::size_t i = 0; i < plan.sigma0_grid.size(); ++i) {
        const double sigma0 = plan.sigma0_grid[i];
        McConfig cfg = plan.mc;
        cfg.seed = derive_seed(plan.mc.seed, i);
        double iv = std::nan(""), se = std::nan("");
        try {
            const IvPoint p = estimate_atm_iv(with_sigma0(plan.model, sigma0), plan.market, cfg);
            iv = p.iv;
            se = p.iv_stderr;
        } catch (const std::exception& e) {
            std::cerr << "level_sweep: sigma0=" << sigma0 << ": " << e.what() << '\n';
        }
        csv.row({sigma0, iv, se, atm_level(sigma0)});
    }
}

void run_skew_sweep(const ExperimentPlan& plan, std::ostream& out) {
    CsvWriter csv(out, {"sigma0", "maturity", "skew", "skew_stderr", "scaled_skew", "theory_skew", "status"});
    for (std::size_t i = 0; i < plan.sigma0_grid.size(); ++i) {
        const double sigma0 = plan.sigma0_grid[i];
        const ModelSpec model = with_sigma0(plan.model, sigma0);
        McConfig cfg = plan.mc;
        cfg.seed = derive_seed(plan.mc.seed, i);
        const double scale = skew_scale(model, plan.market.maturity);
        const double theory = theory_scaled_skew(model, plan.market);
        try {
            const auto s = estimate_skew_fd(model, plan.market, cfg, plan.dk);
            csv.row({sigma0, plan.market.maturity, s.slope, s.std_error, scale * s.slope, theory, std::string("ok")});
        } catch (const std::exception& e) {
            const double nan = std::nan("");
            csv.row({sigma0, plan.market.maturity, nan, nan, nan, theory, describe_failure(e)});
        }
    }
}

void run_skew_vs_maturity(const ExperimentPlan& plan, std::ostream& out) {
    const double h = hurst_exponent(plan.model);
    struct Row {
        double maturity, skew, se, scaled, theory;
        std::string status;
    };
    std::vector<Row> rows;
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < plan.maturities.size(); ++i) {
        MarketSetup market = plan.market;
        market.maturity = plan.maturities[i];
        McConfig cfg = plan.mc;
        cfg.seed = derive_seed(plan.mc.seed, i);
        const double scale = skew_scale(plan.model, market.maturity);
        const double theory = theory_scaled_skew(plan.model, market);
        try {
            const auto s = estimate_skew_fd(plan.model, market, cfg, plan.dk);
            rows.push_back({market.maturity, s.slope, s.std_error, scale * s.slope, theory, "ok"});
            xs.push_back(h == 0.5 ? market.maturity : std::pow(market.maturity, h - 0.5));
            ys.push_back(s.slope);
        } catch (const std::exception& e) {
            const double nan = std::nan("");
            rows.push_back({market.maturity, nan, nan, nan, theory, describe_failure(e)});
        }
    }
    LineFit fit{std::nan(""), std::nan("")};
    if (xs.size() >= 2) fit = least_squares(xs, ys);
    CsvWriter csv(out, {"maturity", "skew", "skew_stderr", "scaled_skew", "theory_scaled_skew", "fit_intercept",
                        "fit_slope", "status"});
    for (const auto& r : rows)
        csv.row({r.maturity, r.skew, r.se, r.scaled, r.theory, fit.intercept, fit.slope, r.status});
}

void run_proxy_table(const ExperimentPlan& plan, std::ostream& out) {
    const auto cells = proxy_error_table(plan);
    CsvWriter csv(out, {"maturity", "strike", "median_error_pct", "q90_error_pct", "max_error_pct",
                        "median_mc_accuracy_pct", "median_price_error_pct", "n_valid", "n_flagged"});
    for (const auto& c : cells) {
        const bool any = !c.errors.empty();
        const double nan = std::nan("");
        csv.row({c.maturity, c.strike, any ? c.median_error() : nan, any ? c.quantile_error(0.9) : nan,
                 any ? c.max_error() : nan, any ? c.median_mc_accuracy() : nan,
                 any ? quantile(c.price_errors, 0.5) : nan, static_cast<long long>(c.errors.size()), static_cast<long long>(c.flagged)});
    }
}

void run_fbm_check(const ExperimentPlan& plan, std::ostream& out) {
    CsvWriter csv(out, {"hurst", "row", "col", "block", "sample_cov", "analytic_cov", "std_error", "z_score"});
    for (std::size_t i = 0; i < plan.hurst_list.size(); ++i) {
        const auto res = fbm_covariance_check(plan.market.maturity, plan.mc.steps, plan.hurst_list[i],
                                              plan.mc.n_paths, derive_seed(plan.mc.seed, i));
        for (const auto& r : res)
            csv.row({r.hurst, static_cast<long long>(r.row), static_cast<long long>(r.col), r.block, r.sample,
                     r.analytic, r.std_error, r.z_score()});
    }
}

}  // namespace

IvPoint implied_from_estimate(const McEstimate& price, const MarketSetup& market, double strike) {
    IvPoint p;
    p.log_strike = std::log(strike);
    p.maturity = market.maturity;
    try {
        p.iv = implied_vol(price.mean, std::log(market.s0), p.log_strike, market.maturity);
    } catch (const DomainError& e) {
        throw DomainError(std::string(e.what()) +
                          "; the Monte Carlo price left the no-arbitrage band, try a larger n_paths");
    }
    const double vega = vega_at(market, strike, p.iv);
    p.iv_stderr = vega > 0.0 ? price.std_error / vega : std::numeric_limits<double>::infinity();
    return p;
}

IvPoint estimate_atm_iv(const ModelSpec& model, const MarketSetup& market, const McConfig& cfg) {
    MarketSetup atm = market;
    atm.strike = market.s0;
    return implied_from_estimate(price_asian(model, atm, cfg), atm, atm.strike);
}

SkewEstimate estimate_skew_fd(const ModelSpec& model, const MarketSetup& market, const McConfig& cfg, double dk) {
    if (!(dk > 0.0)) throw ConfigError("skew: dk must be > 0");
    const double k0 = market.s0;
    const std::vector<double> strikes{k0 / (1.0 + dk), k0 * (1.0 + dk)};
    const auto strip = price_asian_strip(model, market, strikes, cfg);
    const IvPoint down = implied_from_estimate(strip.estimates[0], market, strikes[0]);
    const IvPoint up = implied_from_estimate(strip.estimates[1], market, strikes[1]);
    return combine_skew(down, up, strip.covariance(0, 1), vega_at(market, strikes[0], down.iv),
                        vega_at(market, strikes[1], up.iv), std::log1p(dk));
}

SkewEstimate estimate_skew_fd_independent(const ModelSpec& model, const MarketSetup& market, const McConfig& cfg,
                                          double dk) {
    if (!(dk > 0.0)) throw ConfigError("skew: dk must be > 0");
    const double k0 = market.s0;
    MarketSetup lo = market, hi = market;
    lo.strike = k0 / (1.0 + dk);
    hi.strike = k0 * (1.0 + dk);
    McConfig cfg_hi = cfg;
    cfg_hi.seed = derive_seed(cfg.seed, 1);
    const IvPoint down = implied_from_estimate(price_asian(model, lo, cfg), market, lo.strike);
    const IvPoint up = implied_from_estimate(price_asian(model, hi, cfg_hi), market, hi.strike);
    return combine_skew(down, up, 0.0, vega_at(market, lo.strike, down.iv), vega_at(market, hi.strike, up.iv),
                        std::log1p(dk));
}

double skew_from_smile(const std::function<double(double)>& smile, double k_star, double dk) {
    const double h = std::log1p(dk);
    return (smile(k_star + h) - smile(k_star - h)) / (2.0 * h);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    // splitmix64 finaliser over the combined word
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::string to_string(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::level_sweep: return "level_sweep";
        case ExperimentKind::skew_sweep: return "skew_sweep";
        case ExperimentKind::skew_vs_maturity: return "skew_vs_T";
        case ExperimentKind::proxy_error_table: return "proxy_error_table";
        case ExperimentKind::fbm_check: return "fbm_check";
    }
    return "?";
}

ExperimentKind parse_experiment_kind(const std::string& raw) {
    const std::string name = config::normalize_key(raw);
    if (name == "level_sweep") return ExperimentKind::level_sweep;
    if (name == "skew_sweep") return ExperimentKind::skew_sweep;
    if (name == "skew_vs_t" || name == "skew_vs_maturity") return ExperimentKind::skew_vs_maturity;
    if (name == "proxy_error_table") return ExperimentKind::proxy_error_table;
    if (name == "fbm_check") return ExperimentKind::fbm_check;
    throw ConfigError("unknown experiment kind '" + raw +
                      "' (level_sweep|skew_sweep|skew_vs_T|proxy_error_table|fbm_check)");
}

void ExperimentPlan::validate() const {
    asian::validate(model, market);
    mc.validate();
    const auto law_ok = [](const UniformLaw& l) { return std::isfinite(l.lo) && std::isfinite(l.hi) && l.lo <= l.hi; };
    switch (kind) {
        case ExperimentKind::level_sweep:
        case ExperimentKind::skew_sweep:
            if (sigma0_grid.empty()) throw ConfigError("plan: sigma0_grid must not be empty");
            break;
        case ExperimentKind::skew_vs_maturity:
            if (maturities.empty()) throw ConfigError("plan: maturities must not be empty");
            break;
        case ExperimentKind::proxy_error_table:
            if (maturities.empty() || strikes.empty()) throw ConfigError("plan: maturities and strikes must not be empty");
            if (samples < 1) throw ConfigError("plan: samples must be >= 1");
            if (!law_ok(sigma0_law) || !law_ok(volvol_law) || !law_ok(rho_law))
                throw ConfigError("plan: uniform laws need finite bounds with lo <= hi");
            if (!std::holds_alternative<Sabr>(model) && !std::holds_alternative<FractionalBergomi>(model))
                throw ConfigError("plan: proxy_error_table supports the sabr and fbergomi models only");
            break;
        case ExperimentKind::fbm_check:
            if (hurst_list.empty()) throw ConfigError("plan: hurst_list must not be empty");
            break;
    }
}

std::vector<double> default_sigma0_grid() {
    std::vector<double> g;
    for (int i = 1; i <= 14; ++i) g.push_back(i / 10.0);
    return g;
}

ModelSpec with_sigma0(const ModelSpec& model, double sigma0) {
    if (std::holds_alternative<ConstantVol>(model)) return ConstantVol{sigma0};
    if (const auto* m = std::get_if<Sabr>(&model)) return Sabr{sigma0, m->alpha};
    if (const auto* m = std::get_if<FractionalBergomi>(&model)) return FractionalBergomi{sigma0, m->vov, m->hurst};
    throw ConfigError("sigma0 sweeps are not defined for local volatility models");
}

const std::vector<std::string>& known_config_keys() {
    static const std::vector<std::string> keys{
        "kind",       "model",       "s0",         "strike",    "maturity",   "rho",     "sigma0",
        "alpha",      "vov",         "hurst",      "cev_nu",    "cev_beta",   "paths",   "steps",
        "seed",       "estimator",   "cv_mode",    "batch_size", "threads",   "out",     "dk",
        "sigma0_grid", "maturities", "strikes",    "samples",   "sigma0_law", "volvol_law", "rho_law",
        "hurst_list"};
    return keys;
}

ModelSpec model_from_config(const config::ConfigMap& cfg) {
    const std::string name = cfg.text("model", "const");
    if (name == "const") return ConstantVol{cfg.number("sigma0", 0.3)};
    if (name == "sabr") return Sabr{cfg.number("sigma0", 0.5), cfg.number("alpha", 0.5)};
    if (name == "fbergomi")
        return FractionalBergomi{cfg.number("sigma0", 0.3), cfg.number("vov", 0.5), cfg.number("hurst", 0.4)};
    if (name == "localvol-cev" || name == "localvol_cev")
        return cev_local_vol(cfg.number("cev_nu", 0.3), cfg.number("cev_beta", 0.5));
    throw ConfigError("unknown model '" + name + "' (const|sabr|fbergomi|localvol-cev)");
}

MarketSetup market_from_config(const config::ConfigMap& cfg) {
    MarketSetup m;
    m.s0 = cfg.number("s0", 10.0);
    m.strike = cfg.number("strike", m.s0);
    m.maturity = cfg.number("maturity", 1.0 / 252.0);
    m.rho = cfg.number("rho", -0.3);
    return m;
}

McConfig mc_from_config(const config::ConfigMap& cfg) {
    McConfig mc;
    const std::string model = cfg.text("model", "const");
    const std::string fallback = (model == "const" || model == "fbergomi") ? "cv_antithetic" : "antithetic";
    const auto count = [&](const char* key, double dflt) {
        const double v = cfg.number(key, dflt);
        if (!(v >= 0.0) || v != std::floor(v)) throw ConfigError(std::string("config key '") + key + "' must be a non-negative integer");
        return v;
    };
    mc.n_paths = static_cast<std::size_t>(count("paths", 200000));
    mc.steps = static_cast<int>(count("steps", 50));
    mc.seed = static_cast<std::uint64_t>(count("seed", 42));
    mc.estimator = parse_estimator(cfg.text("estimator", fallback));
    const std::string mode = cfg.text("cv_mode", "discrete");
    if (mode == "discrete")
        mc.cv_mode = GeometricMode::discrete;
    else if (mode == "continuous")
        mc.cv_mode = GeometricMode::continuous;
    else
        throw ConfigError("cv_mode must be discrete or continuous");
    mc.batch_size = static_cast<std::size_t>(count("batch_size", 4096));
    mc.threads = static_cast<unsigned>(count("threads", 0));
    return mc;
}

ExperimentPlan plan_from_config(const config::ConfigMap& cfg) {
    cfg.require_known(known_config_keys());
    ExperimentPlan plan;
    plan.kind = parse_experiment_kind(cfg.text("kind", "level_sweep"));
    plan.model = model_from_config(cfg);
    plan.market = market_from_config(cfg);
    if (plan.kind == ExperimentKind::proxy_error_table && !cfg.contains("s0")) plan.market = {100.0, 100.0, 0.01, 0.0};
    plan.mc = mc_from_config(cfg);
    plan.dk = cfg.number("dk", 0.001);
    plan.sigma0_grid = cfg.numbers("sigma0_grid", default_sigma0_grid());
    const bool proxy = plan.kind == ExperimentKind::proxy_error_table;
    plan.maturities = cfg.numbers("maturities", proxy ? std::vector<double>{0.01, 0.1, 0.5, 1.0, 2.0}
                                                      : std::vector<double>{0.001, 0.002, 0.004, 0.008, 0.016});
    plan.strikes = cfg.numbers("strikes", {90, 95, 100, 105, 110, 115, 120, 125});
    plan.samples = static_cast<std::size_t>(cfg.number("samples", 200));
    const auto law = [&](const char* key, UniformLaw fallback) {
        const auto v = cfg.numbers(key, {fallback.lo, fallback.hi});
        if (v.size() != 2) throw ConfigError(std::string("config key '") + key + "' must be [lo, hi]");
        return UniformLaw{v[0], v[1]};
    };
    plan.sigma0_law = law("sigma0_law", plan.sigma0_law);
    plan.volvol_law = law("volvol_law", plan.volvol_law);
    plan.rho_law = law("rho_law", plan.rho_law);
    plan.hurst_list = cfg.numbers("hurst_list", plan.hurst_list);
    plan.output = cfg.text("out", "");
    plan.validate();
    return plan;
}

double ProxyCell::median_error() const { return quantile(errors, 0.5); }
double ProxyCell::quantile_error(double p) const { return quantile(errors, p); }
double ProxyCell::max_error() const { return *std::max_element(errors.begin(), errors.end()); }
double ProxyCell::median_mc_accuracy() const { return quantile(mc_accuracy, 0.5); }

std::vector<ProxyCell> proxy_error_table(const ExperimentPlan& plan) {
    plan.validate();
    const std::size_t nm = plan.maturities.size();
    const std::size_t nk = plan.strikes.size();
    std::vector<ProxyCell> cells(nm * nk);
    for (std::size_t j = 0; j < nm; ++j)
        for (std::size_t s = 0; s < nk; ++s) {
            cells[j * nk + s].maturity = plan.maturities[j];
            cells[j * nk + s].strike = plan.strikes[s];
        }

    for (std::size_t i = 0; i < plan.samples; ++i) {
        std::mt19937_64 rng(derive_seed(plan.mc.seed, i));
        const auto draw = [&](const UniformLaw& l) { return std::uniform_real_distribution<double>(l.lo, l.hi)(rng); };
        const double sigma0 = draw(plan.sigma0_law);
        const double volvol = draw(plan.volvol_law);
        const double rho = draw(plan.rho_law);
        const ModelSpec model = with_volvol(with_sigma0(plan.model, sigma0), volvol);

        for (std::size_t j = 0; j < nm; ++j) {
            const MarketSetup market{plan.market.s0, plan.market.s0, plan.maturities[j], rho};
            McConfig cfg = plan.mc;
            cfg.seed = derive_seed(derive_seed(plan.mc.seed, i), j + 1);
            StrikeStrip strip;
            try {
                strip = price_asian_strip(model, market, plan.strikes, cfg);
            } catch (const NumericalError& e) {
                std::cerr << "proxy_error_table: sample " << i << ", T=" << market.maturity << ": " << e.what() << '\n';
                for (std::size_t s = 0; s < nk; ++s) ++cells[j * nk + s].flagged;
                continue;
            }
            for (std::size_t s = 0; s < nk; ++s) {
                auto& cell = cells[j * nk + s];
                const double k = std::log(plan.strikes[s]);
                const McEstimate& est = strip.estimates[s];
                IvPoint mc;
                try {
                    mc = implied_from_estimate(est, market, plan.strikes[s]);
                } catch (const DomainError&) {
                    ++cell.flagged;
                    continue;
                }
                const double proxy_iv = proxy_implied_vol(model, market, k, SkewSource::closed);
                const double err = 100.0 * std::abs(proxy_iv - mc.iv) / mc.iv;
                const double acc = 100.0 * 1.96 * mc.iv_stderr / mc.iv;
                const double price_err = 100.0 * std::abs(price_proxy(model, market, k, SkewSource::closed) - est.mean) / est.mean;
                if (!(mc.iv > 0.0) || !std::isfinite(err) || !std::isfinite(acc) || !std::isfinite(price_err)) {
                    ++cell.flagged;
                    continue;
                }
                cell.errors.push_back(err);
                cell.mc_accuracy.push_back(acc);
                cell.price_errors.push_back(price_err);
            }
        }
    }
    return cells;
}

std::vector<CovarianceResidual> fbm_covariance_check(double maturity, int steps, double hurst, std::size_t samples,
                                                     std::uint64_t seed) {
    if (samples < 2) throw ConfigError("fbm_check: need at least two samples");
    const TimeGrid grid(maturity, steps);
    const JointGaussianSampler sampler(grid, hurst);
    const int n = sampler.dimension();
    const int m = steps;
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd sum_sq = Eigen::MatrixXd::Zero(n, n);
    NormalStream normals(GaussianDriver{seed, 0});
    std::vector<double> draws(n), w(m), z(m);
    Eigen::VectorXd x(n);
    for (std::size_t s = 0; s < samples; ++s) {
        normals.fill(draws);
        sampler.sample(draws, false, w, z);
        for (int i = 0; i < m; ++i) {
            x(i) = w[i];
            x(m + i) = z[i];
        }
        for (int a = 0; a < n; ++a)
            for (int b = a; b < n; ++b) {
                const double p = x(a) * x(b);
                sum(a, b) += p;
                sum_sq(a, b) += p * p;
            }
    }
    const double cnt = static_cast<double>(samples);
    std::vector<CovarianceResidual> out;
    for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b) {
            CovarianceResidual r;
            r.hurst = hurst;
            r.row = a;
            r.col = b;
            r.block = (b < m) ? "ww" : (a < m ? "wz" : "zz");
            r.sample = sum(a, b) / cnt;
            r.analytic = sampler.covariance()(a, b);
            const double second = sum_sq(a, b) / cnt;
            r.std_error = std::sqrt(std::max(second - r.sample * r.sample, 0.0) * cnt / (cnt - 1.0) / cnt);
            out.push_back(r);
        }
    return out;
}

void run_experiment(const ExperimentPlan& plan, std::ostream& out) {
    plan.validate();
    switch (plan.kind) {
        case ExperimentKind::level_sweep: run_level_sweep(plan, out); break;
        case ExperimentKind::skew_sweep: run_skew_sweep(plan, out); break;
        case ExperimentKind::skew_vs_maturity: run_skew_vs_maturity(plan, out); break;
        case ExperimentKind::proxy_error_table: run_proxy_table(plan, out); break;
        case ExperimentKind::fbm_check: run_fbm_check(plan, out); break;
    }
}

void run_experiment(const ExperimentPlan& plan) {
    if (plan.output.empty()) throw ConfigError("plan: no output path (set 'out')");
    std::ofstream file(plan.output, std::ios::binary);
    if (!file) throw ConfigError("cannot write output file '" + plan.output + "'");
    run_experiment(plan, file);
    if (!file) throw ConfigError("write failed for '" + plan.output + "'");
}

double quantile(std::vector<double> values, double p) {
    if (values.empty()) throw ConfigError("quantile of an empty sample");
    std::sort(values.begin(), values.end());
    const double pos = std::clamp(p, 0.0, 1.0) * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw ConfigError("least_squares: need two or more paired points");
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    if (!(sxx > 0.0)) throw ConfigError("least_squares: regressor has no spread");
    const double slope = sxy / sxx;
    return {my - slope * mx, slope};
}

}  // namespace asian
