#pragma once

#include <functional>
#include <string>
#include <variant>

namespace asian {

/// Contract and market data. Rates are zero throughout, so the forward of the
/// average at time 0 equals the spot.
struct MarketSetup {
    double s0 = 10.0;
    double strike = 10.0;
    double maturity = 1.0 / 252.0;
    double rho = 0.0;

    static constexpr double rate() { return 0.0; }
    void validate() const;
};

struct ConstantVol {
    double sigma = 0.3;
};

// sigma_t = sigma0 * exp(alpha W'_t - alpha^2 t / 2)
struct Sabr {
    double sigma0 = 0.5;
    double alpha = 0.5;
};

// sigma_t^2 = sigma0^2 * exp(vov sqrt(2H) Z_t - vov^2 t^{2H} / 2),
// Z_t = int_0^t (t-s)^{H-1/2} dW'_s
struct FractionalBergomi {
    double sigma0 = 0.3;
    double vov = 0.5;
    double hurst = 0.4;
};

// dS = sigma(S) S dW. The derivative must be supplied analytically.
struct LocalVol {
    std::function<double(double)> sigma;
    std::function<double(double)> sigma_deriv;
    std::string label = "localvol";
};

using ModelSpec = std::variant<ConstantVol, Sabr, FractionalBergomi, LocalVol>;

/// sigma(S) = nu * S^(beta - 1)
LocalVol cev_local_vol(double nu, double beta);

void validate(const ModelSpec& model, const MarketSetup& market);

/// Volatility at t = 0. LocalVol reads sigma(s0).
double spot_vol(const ModelSpec& model, const MarketSetup& market);

/// Roughness exponent of the volatility driver; 1/2 for every Markovian model.
double hurst_exponent(const ModelSpec& model);

/// Correlation that enters the skew formula. Local volatility is driven by
/// the asset's own Brownian motion, so it is perfectly correlated.
double effective_rho(const ModelSpec& model, const MarketSetup& market);

std::string model_name(const ModelSpec& model);

/// Expected Malliavin derivative (r, u) -> E[D_r^{W'} sigma_u], r <= u,
/// stored as regular(r, u) * (u - r)^(hurst - 1/2) so the singular factor can
/// be integrated exactly.
struct SkewKernel {
    double hurst = 0.5;
    std::function<double(double, double)> regular;

    double singular_exponent() const { return hurst - 0.5; }
    double eval(double r, double u) const;
};

/// Leading-order kernel of each model.
SkewKernel skew_kernel(const ModelSpec& model, const MarketSetup& market);

}  // namespace asian
