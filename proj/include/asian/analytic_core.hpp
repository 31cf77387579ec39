#pragma once

#include <optional>

#include "asian/market_models.hpp"
#include "asian/path_engine.hpp"

namespace asian {

/// Undiscounted Black-Scholes call in log coordinates.
struct BsQuote {
    double x = 0.0;      // log-forward
    double k = 0.0;      // log-strike
    double tau = 0.0;    // years
    double sigma = 0.0;
};

double norm_pdf(double x);
double norm_cdf(double x);

/// e^x N(d+) - e^k N(d-), d+- = (x - k)/(sigma sqrt(tau)) +- sigma sqrt(tau)/2.
double bs_price(const BsQuote& q);
/// d price / d sigma
double bs_vega(const BsQuote& q);

/// Inverts bs_price for sigma in [1e-9, 10] with a bracketed Newton iteration
/// that falls back to bisection whenever the Newton step leaves the bracket.
/// Throws DomainError when the price is at or outside (intrinsic, e^x).
double implied_vol(double price, double x, double k, double tau);

enum class GeometricMode { continuous, discrete };

/// Call on the geometric average under constant volatility. Continuous mode is
/// the closed form with sigma_G = sigma / sqrt(3); discrete mode prices the
/// (m+1)-point geometric mean over the grid nodes exactly.
double geometric_asian_price(const MarketSetup& market, double sigma, GeometricMode mode,
                             const std::optional<TimeGrid>& grid = std::nullopt);

}  // namespace asian
