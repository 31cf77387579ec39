#include <catch_amalgamated.hpp>
#include <cmath>
#include <random>

#include "asian/errors.hpp"
#include "asian/mc_pricer.hpp"

using namespace asian;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

McConfig config(std::size_t n, Estimator e, std::uint64_t seed = 1) {
    McConfig c;
    c.n_paths = n;
    c.estimator = e;
    c.seed = seed;
    return c;
}

bool overlap(const McEstimate& a, const McEstimate& b) { return a.ci_low <= b.ci_high && b.ci_low <= a.ci_high; }

const MarketSetup kDesk{10.0, 10.0, 1.0 / 252, -0.3};

}  // namespace

TEST_CASE("cv_coefficient", "[mc_pricer]") {
    const std::vector<double> c{1.0, 2.0, 4.0, 7.0, 11.0};
    std::vector<double> twice(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) twice[i] = 2 * c[i];
    CHECK_THAT(cv_coefficient(c, c, 3.0).coefficient, WithinAbs(1.0, 1e-15));
    CHECK_THAT(cv_coefficient(twice, c, 0.0).coefficient, WithinAbs(2.0, 1e-15));

    const std::vector<double> flat(5, 1.0);
    const auto fit = cv_coefficient(c, flat, 1.0);
    CHECK(fit.degenerate);
    CHECK(fit.coefficient == 0.0);

    std::mt19937_64 rng(5);
    std::normal_distribution<double> n01;
    const std::size_t n = 100000;
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = 2.0 * n01(rng);
        y[i] = 0.5 * n01(rng);
    }
    // independent: |c*| within 3 standard errors of zero, scaled by sd(y)/sd(x)
    CHECK(std::abs(cv_coefficient(y, x, 0.0).coefficient) < 3.0 / std::sqrt(n - 1.0) * (0.5 / 2.0));

    CHECK_THROWS_AS(cv_coefficient(std::vector<double>{1.0}, std::vector<double>{1.0}, 0.0), ConfigError);
}

TEST_CASE("estimator and model combinations", "[mc_pricer]") {
    const std::vector<ModelSpec> cv_only_const{Sabr{}, FractionalBergomi{}, cev_local_vol(0.3, 0.5)};
    for (const auto& m : cv_only_const) CHECK_THROWS_AS(check_estimator(m, Estimator::control_variate), ConfigError);
    CHECK_THROWS_AS(check_estimator(Sabr{}, Estimator::cv_antithetic), ConfigError);
    CHECK_THROWS_AS(check_estimator(cev_local_vol(0.3, 0.5), Estimator::cv_antithetic), ConfigError);
    CHECK_NOTHROW(check_estimator(FractionalBergomi{}, Estimator::cv_antithetic));
    CHECK_NOTHROW(check_estimator(ConstantVol{}, Estimator::control_variate));
    CHECK_THROWS_AS(price_asian(Sabr{}, kDesk, config(1000, Estimator::control_variate)), ConfigError);
    CHECK_THROWS_AS(price_asian(ConstantVol{}, kDesk, config(2, Estimator::antithetic)), ConfigError);
    CHECK_THROWS_AS(parse_estimator("qmc"), ConfigError);
    CHECK(parse_estimator("cv_antithetic") == Estimator::cv_antithetic);
}

TEST_CASE("zero volatility is deterministic", "[mc_pricer]") {
    MarketSetup itm = kDesk;
    itm.strike = 9.0;
    const std::vector<std::pair<ModelSpec, Estimator>> cases{
        {ConstantVol{0.0}, Estimator::plain},          {ConstantVol{0.0}, Estimator::cv_antithetic},
        {Sabr{0.0, 0.5}, Estimator::antithetic},       {FractionalBergomi{0.0, 0.5, 0.4}, Estimator::cv_antithetic},
        {ConstantVol{0.0}, Estimator::control_variate},
    };
    for (const auto& [model, est] : cases) {
        const auto e = price_asian(model, itm, config(1000, est));
        CAPTURE(model_name(model), to_string(est));
        CHECK(e.mean == 1.0);
        CHECK(e.std_error == 0.0);
        CHECK_FALSE(e.control_applied);
    }
}

TEST_CASE("estimate bookkeeping", "[mc_pricer]") {
    const auto e = price_asian(ConstantVol{0.3}, kDesk, config(10000, Estimator::antithetic));
    CHECK(e.n_effective == 10000);
    CHECK(e.ci_low == e.mean - 1.96 * e.std_error);
    CHECK(e.ci_high == e.mean + 1.96 * e.std_error);
    CHECK(e.std_error > 0.0);
}

TEST_CASE("E[A_T] = s0", "[mc_pricer]") {
    const double zero = 0.0;
    for (auto est : {Estimator::plain, Estimator::antithetic, Estimator::cv_antithetic}) {
        const auto strip = price_asian_strip(ConstantVol{0.3}, kDesk, std::span(&zero, 1), config(100000, est, 8));
        const auto& e = strip.estimates[0];
        CAPTURE(to_string(est), e.mean, e.std_error);
        CHECK(std::abs(e.mean - 10.0) < 3 * e.std_error + 1e-12);
    }
}

TEST_CASE("cv_antithetic agrees with a large plain run", "[mc_pricer][slow]") {
    const auto fast = price_asian(ConstantVol{0.3}, kDesk, config(200000, Estimator::cv_antithetic, 3));
    const auto slow = price_asian(ConstantVol{0.3}, kDesk, config(2000000, Estimator::plain, 4));
    CAPTURE(fast.mean, fast.std_error, slow.mean, slow.std_error);
    CHECK(overlap(fast, slow));
}

TEST_CASE("control variates do not bias the estimate", "[mc_pricer][slow]") {
    // Pooled over seeds: the mean difference to independent plain runs is within 3 sigma.
    double diff = 0.0, var = 0.0;
    const int runs = 20;
    for (std::uint64_t seed = 100; seed < 100 + runs; ++seed) {
        const auto cv = price_asian(ConstantVol{0.3}, kDesk, config(20000, Estimator::control_variate, seed));
        const auto plain = price_asian(ConstantVol{0.3}, kDesk, config(20000, Estimator::plain, seed + 1000));
        CHECK(cv.control_applied);
        diff += cv.mean - plain.mean;
        var += cv.std_error * cv.std_error + plain.std_error * plain.std_error;
    }
    CAPTURE(diff / runs, std::sqrt(var) / runs);
    CHECK(std::abs(diff) < 3.0 * std::sqrt(var));
}

TEST_CASE("continuous reference is selectable", "[mc_pricer]") {
    auto cfg = config(50000, Estimator::cv_antithetic, 12);
    cfg.cv_mode = GeometricMode::continuous;
    const auto cont = price_asian(ConstantVol{0.3}, kDesk, cfg);
    cfg.cv_mode = GeometricMode::discrete;
    const auto disc = price_asian(ConstantVol{0.3}, kDesk, cfg);
    // The continuous reference misstates E[G] by about 5e-4 of its value and
    // the coefficient is near one, so the two estimates differ by about that.
    const double shift = geometric_asian_price(kDesk, 0.3, GeometricMode::continuous) -
                         geometric_asian_price(kDesk, 0.3, GeometricMode::discrete, TimeGrid(kDesk.maturity, 50));
    CHECK_THAT(disc.mean - cont.mean, WithinRel(-shift * disc.cv_coefficient, 1e-6));
}

TEST_CASE("variance reduction", "[mc_pricer]") {
    const auto plain = price_asian(ConstantVol{0.3}, kDesk, config(200000, Estimator::plain, 21));
    const auto best = price_asian(ConstantVol{0.3}, kDesk, config(200000, Estimator::cv_antithetic, 21));
    CAPTURE(plain.std_error, best.std_error);
    CHECK(best.std_error <= plain.std_error / 2);
}

TEST_CASE("Bergomi with the sigma0 shadow control", "[mc_pricer]") {
    const FractionalBergomi model{0.3, 0.5, 0.4};
    const MarketSetup mkt{10.0, 10.0, 0.001, -0.3};
    const auto anti = price_asian(model, mkt, config(40000, Estimator::antithetic, 5));
    const auto cv = price_asian(model, mkt, config(40000, Estimator::cv_antithetic, 6));
    CHECK(cv.control_applied);
    CHECK(cv.std_error < anti.std_error);
    CHECK(overlap(anti, cv));
}

TEST_CASE("results depend on the seed and batch size only", "[mc_pricer]") {
    auto cfg = config(30000, Estimator::cv_antithetic, 77);
    cfg.batch_size = 1000;
    cfg.threads = 1;
    const auto one = price_asian(FractionalBergomi{0.3, 0.5, 0.4}, kDesk, cfg);
    cfg.threads = 4;
    const auto four = price_asian(FractionalBergomi{0.3, 0.5, 0.4}, kDesk, cfg);
    CHECK(one.mean == four.mean);
    CHECK(one.std_error == four.std_error);
    const auto again = price_asian(FractionalBergomi{0.3, 0.5, 0.4}, kDesk, cfg);
    CHECK(again.mean == four.mean);
}

TEST_CASE("strike strip prices share paths", "[mc_pricer]") {
    const std::vector<double> strikes{9.99, 10.01};
    const auto strip = price_asian_strip(Sabr{0.5, 0.5}, kDesk, strikes, config(20000, Estimator::antithetic, 4));
    REQUIRE(strip.estimates.size() == 2);
    CHECK(strip.estimates[0].mean > strip.estimates[1].mean);
    const double corr = strip.covariance(0, 1) / std::sqrt(strip.covariance(0, 0) * strip.covariance(1, 1));
    CHECK(corr > 0.99);
    // the single-strike entry point sees the same paths
    MarketSetup m = kDesk;
    m.strike = 9.99;
    CHECK(price_asian(Sabr{0.5, 0.5}, m, config(20000, Estimator::antithetic, 4)).mean == strip.estimates[0].mean);
}
