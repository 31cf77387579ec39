#include "asian/mc_pricer.hpp"

#include <cmath>
#include <sstream>

#include "asian/errors.hpp"
#include "asian/parallel.hpp"
#include "asian/path_engine.hpp"

namespace asian {

namespace {

bool is_antithetic(Estimator e) { return e == Estimator::antithetic || e == Estimator::cv_antithetic; }
bool uses_control(Estimator e) { return e == Estimator::control_variate || e == Estimator::cv_antithetic; }

double sample_mean(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v;
    return s / static_cast<double>(x.size());
}

// Two-pass sample covariance (n - 1 denominator).
double sample_cov(std::span<const double> x, double mx, std::span<const double> y, double my) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - mx) * (y[i] - my);
    return s / static_cast<double>(x.size() - 1);
}

// Geometric mean of the asset driven by the same W with volatility held at
// sigma_ref; for constant volatility this is the simulated path itself.
double shadow_geometric(const PathBundle& p, double s0, double sigma_ref) {
    const int m = p.grid.steps();
    double sum_w = 0.0, sum_t = 0.0;
    for (int i = 0; i <= m; ++i) {
        sum_w += p.w[i];
        sum_t += p.grid.node(i);
    }
    const double n = m + 1.0;
    return s0 * std::exp(sigma_ref * sum_w / n - 0.5 * sigma_ref * sigma_ref * sum_t / n);
}

struct SampleTable {
    std::size_t n_samples = 0;
    std::size_t n_strikes = 0;
    std::vector<double> payoff;   // [sample * n_strikes + strike]
    std::vector<double> control;  // same layout, empty without a control
};

// Runs every batch into its own slice of the table; the batch index is the
// substream, so the table depends on (seed, batch_size) only.
template <class Record>
void run_batches(const PathSimulator& sim, const McConfig& cfg, std::size_t n_samples, bool antithetic,
                 Record&& record) {
    const std::size_t n_batches = (n_samples + cfg.batch_size - 1) / cfg.batch_size;
    parallel_for(n_batches, cfg.threads, [&](std::size_t batch) {
        NormalStream normals(GaussianDriver{cfg.seed, batch});
        std::vector<double> draws(sim.draws_per_path());
        PathBundle base, companion;
        const std::size_t first = batch * cfg.batch_size;
        const std::size_t last = std::min(n_samples, first + cfg.batch_size);
        for (std::size_t s = first; s < last; ++s) {
            normals.fill(draws);
            sim.simulate(draws, false, base);
            if (antithetic) {
                sim.simulate(draws, true, companion);
                record(s, base, &companion);
            } else {
                record(s, base, nullptr);
            }
        }
    });
}

std::size_t sample_count(const McConfig& cfg) {
    const std::size_t n = is_antithetic(cfg.estimator) ? cfg.n_paths / 2 : cfg.n_paths;
    if (n < 2) throw ConfigError("mc: estimator needs at least two independent samples; raise n_paths");
    return n;
}

}  // namespace

std::string to_string(Estimator e) {
    switch (e) {
        case Estimator::plain: return "plain";
        case Estimator::antithetic: return "antithetic";
        case Estimator::control_variate: return "control_variate";
        case Estimator::cv_antithetic: return "cv_antithetic";
    }
    return "?";
}

Estimator parse_estimator(const std::string& name) {
    if (name == "plain") return Estimator::plain;
    if (name == "antithetic") return Estimator::antithetic;
    if (name == "control_variate" || name == "cv" || name == "control-variate") return Estimator::control_variate;
    if (name == "cv_antithetic" || name == "cv-antithetic") return Estimator::cv_antithetic;
    throw ConfigError("unknown estimator '" + name + "' (plain|antithetic|control_variate|cv_antithetic)");
}

void McConfig::validate() const {
    if (n_paths < 2) throw ConfigError("mc: n_paths must be >= 2");
    if (steps < 1) throw ConfigError("mc: steps must be >= 1");
    if (batch_size < 1) throw ConfigError("mc: batch_size must be >= 1");
}

McEstimate make_estimate(double mean, double std_error, std::size_t n_effective) {
    McEstimate e;
    e.mean = mean;
    e.std_error = std_error;
    e.ci_low = mean - 1.96 * std_error;
    e.ci_high = mean + 1.96 * std_error;
    e.n_effective = n_effective;
    return e;
}

CvFit cv_coefficient(std::span<const double> payoffs, std::span<const double> controls, double reference) {
    if (payoffs.size() != controls.size() || payoffs.size() < 2)
        throw ConfigError("cv_coefficient: sequences must have equal length >= 2");
    std::vector<double> shifted(controls.begin(), controls.end());
    for (double& c : shifted) c -= reference;
    const double mp = sample_mean(payoffs);
    const double mc = sample_mean(shifted);
    const double var = sample_cov(shifted, mc, shifted, mc);
    if (!(var > 0.0)) return {0.0, true};
    return {sample_cov(payoffs, mp, shifted, mc) / var, false};
}

void check_estimator(const ModelSpec& model, Estimator estimator) {
    const bool constant = std::holds_alternative<ConstantVol>(model);
    const bool bergomi = std::holds_alternative<FractionalBergomi>(model);
    if (estimator == Estimator::control_variate && !constant)
        throw ConfigError("control_variate requires the constant-volatility model: the geometric reference "
                          "assumes constant sigma");
    if (estimator == Estimator::cv_antithetic && !(constant || bergomi))
        throw ConfigError("cv_antithetic requires the constant-volatility or fractional Bergomi model "
                          "(sigma0-level geometric control)");
}

StrikeStrip price_asian_strip(const ModelSpec& model, const MarketSetup& market, std::span<const double> strikes,
                              const McConfig& cfg) {
    cfg.validate();
    check_estimator(model, cfg.estimator);
    if (strikes.empty()) throw ConfigError("mc: at least one strike required");
    for (double k : strikes)
        if (!(k >= 0.0)) throw ConfigError("mc: strikes must be >= 0");

    const TimeGrid grid(market.maturity, cfg.steps);
    const PathSimulator sim(model, market, grid);
    const bool anti = is_antithetic(cfg.estimator);
    const bool control = uses_control(cfg.estimator);
    const double sigma_ref = spot_vol(model, market);
    const std::size_t n = sample_count(cfg);
    const std::size_t ns = strikes.size();

    SampleTable table;
    table.n_samples = n;
    table.n_strikes = ns;
    table.payoff.assign(n * ns, 0.0);
    if (control) table.control.assign(n * ns, 0.0);

    run_batches(sim, cfg, n, anti, [&](std::size_t s, const PathBundle& base, const PathBundle* comp) {
        const double a0 = averages(base).arithmetic;
        const double a1 = comp ? averages(*comp).arithmetic : 0.0;
        double g0 = 0.0, g1 = 0.0;
        if (control) {
            g0 = shadow_geometric(base, market.s0, sigma_ref);
            if (comp) g1 = shadow_geometric(*comp, market.s0, sigma_ref);
        }
        for (std::size_t j = 0; j < ns; ++j) {
            const double k = strikes[j];
            double y = std::max(a0 - k, 0.0);
            double c = control ? std::max(g0 - k, 0.0) : 0.0;
            if (comp) {
                y = 0.5 * (y + std::max(a1 - k, 0.0));
                if (control) c = 0.5 * (c + std::max(g1 - k, 0.0));
            }
            table.payoff[s * ns + j] = y;
            if (control) table.control[s * ns + j] = c;
        }
    });

    StrikeStrip strip;
    strip.strikes.assign(strikes.begin(), strikes.end());
    std::vector<std::vector<double>> adjusted(ns, std::vector<double>(n));
    std::vector<double> coefficients(ns, 0.0);
    std::vector<bool> applied(ns, false);
    for (std::size_t j = 0; j < ns; ++j) {
        std::vector<double> y(n), c;
        for (std::size_t s = 0; s < n; ++s) y[s] = table.payoff[s * ns + j];
        if (control) {
            c.resize(n);
            for (std::size_t s = 0; s < n; ++s) c[s] = table.control[s * ns + j];
            MarketSetup shifted = market;
            shifted.strike = strikes[j];
            const double reference = geometric_asian_price(shifted, sigma_ref, cfg.cv_mode, grid);
            const CvFit fit = cv_coefficient(y, c, reference);
            coefficients[j] = fit.coefficient;
            applied[j] = !fit.degenerate;
            for (std::size_t s = 0; s < n; ++s) y[s] -= fit.coefficient * (c[s] - reference);
        }
        adjusted[j] = std::move(y);
    }

    std::vector<double> means(ns);
    for (std::size_t j = 0; j < ns; ++j) means[j] = sample_mean(adjusted[j]);
    strip.covariance.resize(static_cast<Eigen::Index>(ns), static_cast<Eigen::Index>(ns));
    for (std::size_t a = 0; a < ns; ++a)
        for (std::size_t b = 0; b <= a; ++b) {
            const double c = sample_cov(adjusted[a], means[a], adjusted[b], means[b]) / static_cast<double>(n);
            strip.covariance(a, b) = c;
            strip.covariance(b, a) = c;
        }
    for (std::size_t j = 0; j < ns; ++j) {
        const double var = std::max(0.0, strip.covariance(j, j));
        McEstimate e = make_estimate(means[j], std::sqrt(var), cfg.n_paths);
        e.cv_coefficient = coefficients[j];
        e.control_applied = applied[j];
        strip.estimates.push_back(e);
    }
    return strip;
}

McEstimate price_asian(const ModelSpec& model, const MarketSetup& market, const McConfig& cfg) {
    const double k = market.strike;
    return price_asian_strip(model, market, std::span(&k, 1), cfg).estimates.front();
}

PathMeans estimate_path_means(const ModelSpec& model, const MarketSetup& market, const McConfig& cfg) {
    cfg.validate();
    const TimeGrid grid(market.maturity, cfg.steps);
    const PathSimulator sim(model, market, grid);
    const std::size_t n = cfg.n_paths;
    std::vector<double> terminal(n), average(n);
    run_batches(sim, cfg, n, false, [&](std::size_t s, const PathBundle& p, const PathBundle*) {
        terminal[s] = p.asset.back();
        average[s] = averages(p).arithmetic;
    });
    const auto summarize = [&](const std::vector<double>& x) {
        const double m = sample_mean(x);
        return make_estimate(m, std::sqrt(sample_cov(x, m, x, m) / static_cast<double>(n)), n);
    };
    return {summarize(terminal), summarize(average)};
}

}  // namespace asian
