#include "asian/market_models.hpp"

#include <cmath>
#include <sstream>

#include "asian/errors.hpp"

namespace asian {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require(bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
}

}  // namespace

void MarketSetup::validate() const {
    require(std::isfinite(s0) && s0 > 0.0, "market: s0 must be > 0");
    require(std::isfinite(strike) && strike > 0.0, "market: strike must be > 0");
    require(std::isfinite(maturity) && maturity > 0.0, "market: maturity must be > 0");
    require(rho >= -1.0 && rho <= 1.0, "market: rho must lie in [-1, 1]");
}

LocalVol cev_local_vol(double nu, double beta) {
    LocalVol lv;
    lv.sigma = [nu, beta](double s) { return nu * std::pow(s, beta - 1.0); };
    lv.sigma_deriv = [nu, beta](double s) { return nu * (beta - 1.0) * std::pow(s, beta - 2.0); };
    std::ostringstream os;
    os << "localvol-cev(nu=" << nu << ",beta=" << beta << ")";
    lv.label = os.str();
    return lv;
}

// Zero volatility is accepted: it gives the deterministic path used by the
// degenerate-case checks.
void validate(const ModelSpec& model, const MarketSetup& market) {
    market.validate();
    std::visit(overloaded{
                   [](const ConstantVol& m) { require(m.sigma >= 0.0, "const: sigma must be >= 0"); },
                   [](const Sabr& m) {
                       require(m.sigma0 >= 0.0, "sabr: sigma0 must be >= 0");
                       require(m.alpha >= 0.0, "sabr: alpha must be >= 0");
                   },
                   [](const FractionalBergomi& m) {
                       require(m.sigma0 >= 0.0, "fbergomi: sigma0 must be >= 0");
                       require(m.vov >= 0.0, "fbergomi: vov must be >= 0");
                       require(m.hurst > 0.0 && m.hurst < 1.0, "fbergomi: hurst must lie in (0, 1)");
                   },
                   [&](const LocalVol& m) {
                       require(static_cast<bool>(m.sigma) && static_cast<bool>(m.sigma_deriv),
                               "localvol: sigma and its derivative are both required");
                       require(m.sigma(market.s0) > 0.0, "localvol: sigma(s0) must be > 0");
                   },
               },
               model);
}

double spot_vol(const ModelSpec& model, const MarketSetup& market) {
    return std::visit(overloaded{
                          [](const ConstantVol& m) { return m.sigma; },
                          [](const Sabr& m) { return m.sigma0; },
                          [](const FractionalBergomi& m) { return m.sigma0; },
                          [&](const LocalVol& m) { return m.sigma(market.s0); },
                      },
                      model);
}

double hurst_exponent(const ModelSpec& model) {
    if (const auto* fb = std::get_if<FractionalBergomi>(&model)) return fb->hurst;
    return 0.5;
}

double effective_rho(const ModelSpec& model, const MarketSetup& market) {
    return std::holds_alternative<LocalVol>(model) ? 1.0 : market.rho;
}

std::string model_name(const ModelSpec& model) {
    return std::visit(overloaded{
                          [](const ConstantVol&) { return std::string("const"); },
                          [](const Sabr&) { return std::string("sabr"); },
                          [](const FractionalBergomi&) { return std::string("fbergomi"); },
                          [](const LocalVol& m) { return m.label; },
                      },
                      model);
}

double SkewKernel::eval(double r, double u) const {
    const double base = regular(r, u);
    if (hurst == 0.5 || base == 0.0) return base;
    return base * std::pow(u - r, hurst - 0.5);
}

SkewKernel skew_kernel(const ModelSpec& model, const MarketSetup& market) {
    return std::visit(
        overloaded{
            [](const ConstantVol&) { return SkewKernel{0.5, [](double, double) { return 0.0; }}; },
            [](const Sabr& m) {
                // E[D_r sigma_u] = alpha E[sigma_u] = alpha sigma0
                const double c = m.alpha * m.sigma0;
                return SkewKernel{0.5, [c](double, double) { return c; }};
            },
            [](const FractionalBergomi& m) {
                const double c = 0.5 * m.sigma0 * m.vov * std::sqrt(2.0 * m.hurst);
                const double v2 = m.vov * m.vov;
                const double two_h = 2.0 * m.hurst;
                return SkewKernel{m.hurst, [c, v2, two_h](double, double u) {
                                      return std::exp(-0.125 * v2 * std::pow(u, two_h)) * c;
                                  }};
            },
            [&](const LocalVol& m) {
                const double s0 = market.s0;
                const double c = m.sigma_deriv(s0) * m.sigma(s0) * s0;
                return SkewKernel{0.5, [c](double, double) { return c; }};
            },
        },
        model);
}

}  // namespace asian
