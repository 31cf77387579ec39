#pragma once

#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "asian/config.hpp"
#include "asian/market_models.hpp"
#include "asian/mc_pricer.hpp"

namespace asian {

struct IvPoint {
    double log_strike = 0.0;
    double maturity = 0.0;
    double iv = 0.0;
    double iv_stderr = 0.0;  // price stderr / vega
};

/// Inverts a Monte Carlo price at strike e^k with forward s0.
/// Throws DomainError (with a hint to raise n_paths) outside the no-arbitrage band.
IvPoint implied_from_estimate(const McEstimate& price, const MarketSetup& market, double strike);

/// ATM implied volatility: strike is reset to s0.
IvPoint estimate_atm_iv(const ModelSpec& model, const MarketSetup& market, const McConfig& cfg);

struct SkewEstimate {
    double slope = 0.0;
    double std_error = 0.0;  // delta method, including the covariance of the two prices
    IvPoint down;
    IvPoint up;
};

/// Central difference of the implied volatility at strikes K(1 + dk) and K/(1 + dk)
/// around K = s0, priced on common paths.
SkewEstimate estimate_skew_fd(const ModelSpec& model, const MarketSetup& market, const McConfig& cfg,
                              double dk = 0.001);

/// Same difference with the two strikes priced on independent seeds.
SkewEstimate estimate_skew_fd_independent(const ModelSpec& model, const MarketSetup& market, const McConfig& cfg,
                                          double dk = 0.001);

/// Central difference of an arbitrary smile k -> I(k) with h = log(1 + dk).
double skew_from_smile(const std::function<double(double)>& smile, double k_star, double dk);

/// Independent 64-bit seed for cell `index` of a run seeded with `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

enum class ExperimentKind { level_sweep, skew_sweep, skew_vs_maturity, proxy_error_table, fbm_check };

std::string to_string(ExperimentKind kind);
ExperimentKind parse_experiment_kind(const std::string& name);

struct UniformLaw {
    double lo = 0.0;
    double hi = 0.0;
};

struct ExperimentPlan {
    ExperimentKind kind = ExperimentKind::level_sweep;
    ModelSpec model = ConstantVol{0.3};
    MarketSetup market;
    McConfig mc;
    double dk = 0.001;
    std::vector<double> sigma0_grid;
    std::vector<double> maturities;
    std::vector<double> strikes;
    std::size_t samples = 200;
    UniformLaw sigma0_law{0.2, 0.8};
    UniformLaw volvol_law{0.3, 1.5};
    UniformLaw rho_law{-0.9, 0.9};
    std::vector<double> hurst_list{0.4, 0.7};
    std::string output;

    void validate() const;
};

/// 0.1, 0.2, ..., 1.4
std::vector<double> default_sigma0_grid();

/// Model with its spot-volatility parameter replaced.
ModelSpec with_sigma0(const ModelSpec& model, double sigma0);

// Config keys understood by model_from_config / plan_from_config.
const std::vector<std::string>& known_config_keys();
ModelSpec model_from_config(const config::ConfigMap& cfg);
MarketSetup market_from_config(const config::ConfigMap& cfg);
McConfig mc_from_config(const config::ConfigMap& cfg);
ExperimentPlan plan_from_config(const config::ConfigMap& cfg);

struct ProxyCell {
    double maturity = 0.0;
    double strike = 0.0;
    std::vector<double> errors;        // 100 |proxy iv - mc iv| / mc iv per valid sample
    std::vector<double> mc_accuracy;   // 100 * 95% CI half-width of the mc iv / mc iv
    std::vector<double> price_errors;  // 100 |proxy price - mc price| / mc price
    std::size_t flagged = 0;           // samples whose mc price failed to invert or was non-finite

    double median_error() const;
    double quantile_error(double p) const;
    double max_error() const;
    double median_mc_accuracy() const;
};

/// Sampled-parameter comparison of the linear-smile proxy with Monte Carlo,
/// measured on implied volatilities; cells ordered maturity-major.
std::vector<ProxyCell> proxy_error_table(const ExperimentPlan& plan);

struct CovarianceResidual {
    double hurst = 0.0;
    int row = 0;
    int col = 0;
    std::string block;  // ww, wz or zz
    double sample = 0.0;
    double analytic = 0.0;
    double std_error = 0.0;

    double z_score() const { return std_error > 0.0 ? (sample - analytic) / std_error : 0.0; }
};

/// Sample covariance of (W', Z) on a grid against the analytic covariance.
std::vector<CovarianceResidual> fbm_covariance_check(double maturity, int steps, double hurst, std::size_t samples,
                                                     std::uint64_t seed);

/// Runs the plan and writes its CSV to `out`.
void run_experiment(const ExperimentPlan& plan, std::ostream& out);
/// Runs the plan and writes its CSV to plan.output.
void run_experiment(const ExperimentPlan& plan);

/// Linear-interpolated sample quantile (p in [0, 1]).
double quantile(std::vector<double> values, double p);

struct LineFit {
    double intercept = 0.0;
    double slope = 0.0;
};

/// Ordinary least squares y = intercept + slope x.
LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace asian
