#include "asian/analytic_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "asian/errors.hpp"

namespace asian {

namespace {

constexpr double kVolLow = 1e-9;
constexpr double kVolHigh = 10.0;

// Black formula on a lognormal variable with log-mean mu and log-variance var.
double lognormal_call(double mu, double var, double strike) {
    if (strike <= 0.0) return std::exp(mu + 0.5 * var);
    if (var <= 0.0) return std::max(std::exp(mu) - strike, 0.0);
    const double sd = std::sqrt(var);
    const double d1 = (mu - std::log(strike) + var) / sd;
    const double d2 = d1 - sd;
    return std::exp(mu + 0.5 * var) * norm_cdf(d1) - strike * norm_cdf(d2);
}

}  // namespace

double norm_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

// glibc erfc is accurate to about 1 ulp over the whole real line (it is the
// Sun fdlibm minimax rational approximation), so the lower tail keeps full
// relative precision where 1 - N(-x) would cancel.
double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double bs_price(const BsQuote& q) {
    const double total = q.sigma * std::sqrt(q.tau);
    if (total <= 0.0) return std::max(std::exp(q.x) - std::exp(q.k), 0.0);
    const double d_plus = (q.x - q.k) / total + 0.5 * total;
    const double d_minus = d_plus - total;
    return std::exp(q.x) * norm_cdf(d_plus) - std::exp(q.k) * norm_cdf(d_minus);
}

double bs_vega(const BsQuote& q) {
    const double sq = std::sqrt(q.tau);
    const double total = q.sigma * sq;
    if (total <= 0.0) return 0.0;
    const double d_plus = (q.x - q.k) / total + 0.5 * total;
    return std::exp(q.x) * norm_pdf(d_plus) * sq;
}

double implied_vol(double price, double x, double k, double tau) {
    if (!(tau > 0.0)) throw DomainError("implied_vol: tau must be > 0");
    const double upper = std::exp(x);
    const double intrinsic = std::max(upper - std::exp(k), 0.0);
    if (!(price > intrinsic)) {
        std::ostringstream os;
        os << "implied_vol: price " << price << " is at or below the intrinsic lower bound " << intrinsic;
        throw DomainError(os.str());
    }
    if (!(price < upper)) {
        std::ostringstream os;
        os << "implied_vol: price " << price << " is at or above the upper bound e^x = " << upper;
        throw DomainError(os.str());
    }

    // Solve on the out-of-the-money value (the put by parity when in the
    // money) in log space: the time value keeps its relative precision and
    // Newton no longer creeps through the exponentially flat wing.
    const double target = price - intrinsic;
    const double log_target = std::log(target);
    BsQuote q{x, k, tau, kVolLow};
    const auto otm_value = [&](double s) {
        q.sigma = s;
        const double total = s * std::sqrt(tau);
        const double d_plus = (x - k) / total + 0.5 * total;
        const double d_minus = d_plus - total;
        if (x > k) return std::exp(k) * norm_cdf(-d_minus) - upper * norm_cdf(-d_plus);
        return upper * norm_cdf(d_plus) - std::exp(k) * norm_cdf(d_minus);
    };
    double lo = kVolLow;
    double hi = kVolHigh;
    if (otm_value(hi) < target) {
        std::ostringstream os;
        os << "implied_vol: price " << price << " exceeds the value at sigma = " << kVolHigh;
        throw DomainError(os.str());
    }
    if (otm_value(lo) >= target) return lo;

    // Start from the ATM approximation price ~ e^x sigma sqrt(tau) / sqrt(2 pi).
    double s = std::clamp(target / upper * std::sqrt(2.0 * std::numbers::pi / tau), 0.01, 2.0);
    for (int iter = 0; iter < 200; ++iter) {
        const double v = otm_value(s);
        const double diff = v > 0.0 ? std::log(v) - log_target : -std::numeric_limits<double>::infinity();
        if (diff == 0.0) return s;
        if (diff > 0.0)
            hi = s;
        else
            lo = s;
        const double slope = v > 0.0 ? bs_vega(q) / v : 0.0;
        double next = (slope > 0.0 && std::isfinite(diff)) ? s - diff / slope : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        const double step = std::abs(next - s);
        s = next;
        if (step <= 1e-15 * s) return s;
        if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) return s;
    }
    q.sigma = s;
    if (std::abs(bs_price(q) - price) < 1e-12 * upper) return s;
    std::ostringstream os;
    os << "implied_vol: no convergence for price " << price << " (x=" << x << ", k=" << k << ", tau=" << tau << ")";
    throw NumericalError(os.str());
}

double geometric_asian_price(const MarketSetup& market, double sigma, GeometricMode mode,
                             const std::optional<TimeGrid>& grid) {
    const double T = market.maturity;
    if (mode == GeometricMode::continuous) {
        const double sg = sigma / std::sqrt(3.0);
        const double sd = sg * std::sqrt(T);
        if (market.strike <= 0.0) return std::exp(-0.25 * sg * sg * T) * market.s0;
        if (sd <= 0.0) return std::max(market.s0 - market.strike, 0.0);
        const double d1 = (std::log(market.s0 / market.strike) + 0.25 * sg * sg * T) / sd;
        const double d2 = d1 - sd;
        return std::exp(-0.25 * sg * sg * T) * market.s0 * norm_cdf(d1) - market.strike * norm_cdf(d2);
    }
    if (!grid) throw ConfigError("geometric_asian_price: discrete mode requires a grid");
    if (sigma == 0.0) return market.strike <= 0.0 ? market.s0 : std::max(market.s0 - market.strike, 0.0);
    const auto t = grid->nodes();
    const double n = static_cast<double>(t.size());
    double sum_t = 0.0;
    for (double ti : t) sum_t += ti;
    // sum_{i,j} min(t_i, t_j) = sum_i t_i (2 (n - i) - 1) with nodes ascending
    double sum_min = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) sum_min += t[i] * (2.0 * (n - static_cast<double>(i)) - 1.0);
    const double mu = std::log(market.s0) - 0.5 * sigma * sigma * sum_t / n;
    const double var = sigma * sigma * sum_min / (n * n);
    return lognormal_call(mu, var, market.strike);
}

}  // namespace asian
