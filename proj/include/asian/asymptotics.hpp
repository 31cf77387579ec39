#pragma once

#include <vector>

#include "asian/market_models.hpp"

namespace asian {

/// Short-maturity ATM implied volatility of the arithmetic Asian call.
///
/// `skew` is the ATM slope in log-strike. For rough models (H < 1/2) the slope
/// explodes like T^(H-1/2); the quote then stores the finite constant
/// lim T^(1/2-H) dI/dk in `skew`, sets `scaled`, and records the blow-up
/// exponent H - 1/2 in `scaling_exponent`, so dI/dk ~ skew * T^scaling_exponent.
struct AsymptoticQuote {
    double level = 0.0;
    double skew = 0.0;
    double correlated = 0.0;    // kernel (rho-dependent) part of `skew`
    double uncorrelated = 0.0;  // sqrt(3) sigma0 / 30 part of `skew`
    double scaling_exponent = 0.0;
    bool scaled = false;
    // Finite-maturity evaluations only: the unscaled slope at that maturity.
    double slope_at_maturity = 0.0;
};

double atm_level(double sigma0);

/// Closed-form limits per model.
AsymptoticQuote atm_skew_closed(const ModelSpec& model, const MarketSetup& market);

/// Scaled constant of the rough Bergomi skew, 3 sqrt(6H) rho v / prod(H + 1/2 + j), j in {0,1,2,4}.
double bergomi_rough_skew_constant(double hurst, double vov, double rho);

enum class SkewMode { finite, limit };

struct QuadratureOrder {
    int inner = 32;  // Gauss-Jacobi, weight (u - r)^(H - 1/2)
    int outer = 32;  // Gauss-Legendre
};

/// int_0^T (T - r) int_r^T (T - u)^2 E[D_r sigma_u] du dr
double skew_double_integral(const SkewKernel& kernel, double maturity, QuadratureOrder order = {});

/// Skew from a kernel. Finite mode evaluates the T-indexed bracket at
/// `maturity`; limit mode extrapolates it along T, T/4, T/16, T/64.
/// Throws NumericalError when the extrapolation sequence does not contract.
AsymptoticQuote atm_skew_general(double sigma0, double rho, const SkewKernel& kernel, double maturity,
                                 SkewMode mode, QuadratureOrder order = {});

/// Richardson extrapolation of a sequence sampled at ratio-4 steps with an
/// estimated convergence order. Exposed for testing.
double richardson_limit(const std::vector<double>& values);

/// First-order local-volatility smile in x = log(K / S0).
double pirjol_zhu_smile(const LocalVol& model, const MarketSetup& market, double x);
/// d/dx of pirjol_zhu_smile.
double pirjol_zhu_slope(const LocalVol& model, const MarketSetup& market);

enum class SkewSource { closed, general_at_maturity };

/// Linear smile sigma0/sqrt(3) + slope (k - log s0), floored at 1e-6.
double proxy_implied_vol(const ModelSpec& model, const MarketSetup& market, double k, SkewSource source);

/// Black-Scholes price of the Asian call at strike e^k using the linear smile.
double price_proxy(const ModelSpec& model, const MarketSetup& market, double k, SkewSource source);

}  // namespace asian
