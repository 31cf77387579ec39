#include "asian/asymptotics.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "asian/analytic_core.hpp"
#include "asian/errors.hpp"
#include "asian/quadrature.hpp"

namespace asian {

namespace {

const double kSqrt3 = std::sqrt(3.0);

double uncorrelated_term(double sigma0) { return kSqrt3 * sigma0 / 30.0; }

// Power of T that makes the skew finite as T -> 0 (positive only when rough).
double applied_scaling(double hurst) { return std::max(0.5 - hurst, 0.0); }

AsymptoticQuote make_quote(double sigma0, double hurst, double correlated, double uncorrelated) {
    AsymptoticQuote q;
    q.level = atm_level(sigma0);
    q.correlated = correlated;
    q.uncorrelated = uncorrelated;
    q.skew = correlated + uncorrelated;
    q.scaling_exponent = std::min(hurst - 0.5, 0.0);
    q.scaled = hurst < 0.5;
    return q;
}

// Unscaled correlated part of the bracket at maturity T.
double correlated_bracket(double sigma0, double rho, const SkewKernel& kernel, double T, QuadratureOrder order) {
    if (rho == 0.0) return 0.0;
    const double integral = skew_double_integral(kernel, T, order);
    if (integral == 0.0) return 0.0;
    return 3.0 * kSqrt3 * rho * integral / (sigma0 * std::pow(T, 5));
}

}  // namespace

double atm_level(double sigma0) { return sigma0 / kSqrt3; }

double bergomi_rough_skew_constant(double hurst, double vov, double rho) {
    const double h = hurst - 0.5;
    return 3.0 * std::sqrt(6.0 * hurst) * rho * vov / ((1.0 + h) * (2.0 + h) * (3.0 + h) * (5.0 + h));
}

AsymptoticQuote atm_skew_closed(const ModelSpec& model, const MarketSetup& market) {
    const double rho = market.rho;
    if (const auto* m = std::get_if<ConstantVol>(&model)) return make_quote(m->sigma, 0.5, 0.0, uncorrelated_term(m->sigma));
    if (const auto* m = std::get_if<Sabr>(&model))
        return make_quote(m->sigma0, 0.5, kSqrt3 * rho * m->alpha / 5.0, uncorrelated_term(m->sigma0));
    if (const auto* m = std::get_if<FractionalBergomi>(&model)) {
        if (m->hurst > 0.5) return make_quote(m->sigma0, m->hurst, 0.0, uncorrelated_term(m->sigma0));
        if (m->hurst == 0.5)
            return make_quote(m->sigma0, 0.5, kSqrt3 * rho * m->vov / 10.0, uncorrelated_term(m->sigma0));
        return make_quote(m->sigma0, m->hurst, bergomi_rough_skew_constant(m->hurst, m->vov, rho), 0.0);
    }
    const auto& lv = std::get<LocalVol>(model);
    const double s0 = market.s0;
    const double sig = lv.sigma(s0);
    const double dsig = lv.sigma_deriv(s0);
    AsymptoticQuote q = make_quote(sig, 0.5, kSqrt3 / 5.0 * s0 * dsig, uncorrelated_term(sig));
    q.skew = (sig / 10.0 + 0.6 * s0 * dsig) / kSqrt3;
    return q;
}

double skew_double_integral(const SkewKernel& kernel, double T, QuadratureOrder order) {
    const double a = kernel.singular_exponent();
    const auto inner = quadrature::gauss_jacobi(order.inner, 0.0, a);
    const auto outer = quadrature::gauss_legendre(order.outer);
    double total = 0.0;
    for (std::size_t i = 0; i < outer.nodes.size(); ++i) {
        const double r = 0.5 * T * (1.0 + outer.nodes[i]);
        const double len = T - r;
        double acc = 0.0;
        for (std::size_t j = 0; j < inner.nodes.size(); ++j) {
            const double u = r + 0.5 * len * (1.0 + inner.nodes[j]);
            const double w = T - u;
            acc += inner.weights[j] * w * w * kernel.regular(r, u);
        }
        acc *= std::pow(0.5 * len, a + 1.0);
        total += outer.weights[i] * len * acc;
    }
    return 0.5 * T * total;
}

double richardson_limit(const std::vector<double>& v) {
    if (v.size() < 3) throw ConfigError("richardson_limit: need at least three values");
    const auto describe = [&] {
        std::ostringstream os;
        os.precision(17);
        os << "skew extrapolation did not converge; sequence:";
        for (double x : v) os << ' ' << x;
        return os.str();
    };
    double scale = 1.0;
    for (double x : v) scale = std::max(scale, std::abs(x));
    std::vector<double> d(v.size() - 1);
    for (std::size_t i = 0; i + 1 < v.size(); ++i) d[i] = v[i + 1] - v[i];
    const double noise = 64.0 * std::numeric_limits<double>::epsilon() * scale;
    if (std::abs(d.back()) <= noise) return v.back();
    for (std::size_t i = 0; i + 1 < d.size(); ++i)
        if (!(std::abs(d[i + 1]) < std::abs(d[i]))) throw NumericalError(describe());
    const double q = d.back() / d[d.size() - 2];
    if (!(std::abs(q) < 1.0)) throw NumericalError(describe());
    return v.back() + d.back() * q / (1.0 - q);
}

AsymptoticQuote atm_skew_general(double sigma0, double rho, const SkewKernel& kernel, double maturity,
                                 SkewMode mode, QuadratureOrder order) {
    if (!(maturity > 0.0)) throw ConfigError("atm_skew_general: maturity must be > 0");
    const double h = kernel.hurst;
    const double e = applied_scaling(h);
    const double bracket_corr = correlated_bracket(sigma0, rho, kernel, maturity, order);
    const double bracket = bracket_corr + uncorrelated_term(sigma0);

    AsymptoticQuote q;
    if (mode == SkewMode::finite) {
        const double scale = std::pow(maturity, e);
        q = make_quote(sigma0, h, scale * bracket_corr, scale * uncorrelated_term(sigma0));
    } else {
        std::vector<double> seq;
        double t = maturity;
        for (int i = 0; i < 4; ++i, t /= 4.0)
            seq.push_back(std::pow(t, e) * correlated_bracket(sigma0, rho, kernel, t, order));
        // T^(1/2-H) sqrt(3) sigma0 / 30 vanishes in the limit when H < 1/2.
        q = make_quote(sigma0, h, richardson_limit(seq), h < 0.5 ? 0.0 : uncorrelated_term(sigma0));
    }
    q.slope_at_maturity = bracket;
    return q;
}

double pirjol_zhu_smile(const LocalVol& model, const MarketSetup& market, double x) {
    const double s0 = market.s0;
    const double sig = model.sigma(s0);
    return sig / kSqrt3 * (1.0 + (0.1 + 3.0 * model.sigma_deriv(s0) * s0 / (5.0 * sig)) * x);
}

double pirjol_zhu_slope(const LocalVol& model, const MarketSetup& market) {
    const double s0 = market.s0;
    const double sig = model.sigma(s0);
    return sig / kSqrt3 * (0.1 + 3.0 * model.sigma_deriv(s0) * s0 / (5.0 * sig));
}

double proxy_implied_vol(const ModelSpec& model, const MarketSetup& market, double k, SkewSource source) {
    const double sigma0 = spot_vol(model, market);
    const double level = atm_level(sigma0);
    double slope;
    if (source == SkewSource::closed && hurst_exponent(model) >= 0.5) {
        slope = atm_skew_closed(model, market).skew;
    } else {
        slope = atm_skew_general(sigma0, effective_rho(model, market), skew_kernel(model, market), market.maturity,
                                 SkewMode::finite)
                    .slope_at_maturity;
    }
    return std::max(level + slope * (k - std::log(market.s0)), 1e-6);
}

double price_proxy(const ModelSpec& model, const MarketSetup& market, double k, SkewSource source) {
    const double iv = proxy_implied_vol(model, market, k, source);
    return bs_price({std::log(market.s0), k, market.maturity, iv});
}

}  // namespace asian
