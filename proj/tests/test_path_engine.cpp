#include <catch_amalgamated.hpp>
#include <cmath>
#include <numbers>

#include "asian/errors.hpp"
#include "asian/iv_lab.hpp"
#include "asian/mc_pricer.hpp"
#include "asian/path_engine.hpp"

using namespace asian;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("time grid nodes", "[path_engine]") {
    const TimeGrid g(1.0 / 252, 50);
    const auto t = g.nodes();
    REQUIRE(t.size() == 51);
    CHECK(t.front() == 0.0);
    CHECK(t.back() == 1.0 / 252);
    for (std::size_t i = 1; i < t.size(); ++i) CHECK(t[i] > t[i - 1]);
    CHECK_THROWS_AS(TimeGrid(1.0, 0), ConfigError);
    CHECK_THROWS_AS(TimeGrid(0.0, 5), ConfigError);
}

TEST_CASE("Riemann-Liouville covariances", "[path_engine]") {
    CHECK_THAT(rl_variance(1.0, 0.5), WithinAbs(1.0, 1e-15));
    CHECK_THAT(rl_variance(0.5, 0.4), WithinRel(0.717936471873146817, 1e-14));
    CHECK_THAT(rl_cross_covariance(1.0, 1.0, 0.5), WithinAbs(1.0, 1e-15));

    // Off-diagonal entries against adaptive high-precision quadrature.
    struct Case {
        double h, t, s, expected;
    };
    const Case cases[] = {
        {0.4, 1.0, 0.5, 0.615265353060511204}, {0.4, 0.3, 0.2, 0.309075566411779025},
        {0.4, 1.0, 0.9, 1.097361337415452599}, {0.7, 1.0, 0.5, 0.343564727200567277},
        {0.7, 0.3, 0.2, 0.087785551732061464}, {0.7, 1.0, 0.9, 0.648951950255502850},
        {0.1, 1.0, 0.5, 1.294007596991569277}, {0.1, 1.0, 0.9, 2.482508965505717231},
    };
    for (const auto& c : cases) {
        CAPTURE(c.h, c.t, c.s);
        CHECK_THAT(rl_covariance(c.t, c.s, c.h), WithinRel(c.expected, 1e-6));
        CHECK(rl_covariance(c.t, c.s, c.h) == rl_covariance(c.s, c.t, c.h));
    }

    // Approaching the diagonal recovers the closed variance.
    CHECK_THAT(rl_covariance(0.5 + 1e-7, 0.5, 0.4), WithinRel(rl_variance(0.5, 0.4), 1e-5));
    CHECK_THAT(rl_covariance(0.5 + 1e-7, 0.5, 0.4), WithinRel(0.71793491015210710811, 1e-10));
}

TEST_CASE("joint covariance at H = 1/2 makes Z equal W'", "[path_engine]") {
    const TimeGrid g(1.0, 4);
    const auto cov = joint_covariance(g, 0.5);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            CHECK_THAT(cov(4 + i, 4 + j), WithinAbs(cov(i, j), 1e-12));
            CHECK_THAT(cov(4 + i, j), WithinAbs(cov(i, j), 1e-12));
        }
    // and the sampler still factorises it
    CHECK_NOTHROW(JointGaussianSampler(g, 0.5));
}

TEST_CASE("sample_joint_gaussian is reproducible per (seed, stream)", "[path_engine]") {
    const TimeGrid g(1.0, 10);
    const auto a = sample_joint_gaussian(g, 0.4, {7, 3});
    const auto b = sample_joint_gaussian(g, 0.4, {7, 3});
    const auto c = sample_joint_gaussian(g, 0.4, {7, 4});
    CHECK(a == b);
    CHECK(a.first != c.first);
}

TEST_CASE("(W', Z) sample covariance matches the analytic covariance", "[path_engine][slow]") {
    for (double h : {0.4, 0.7}) {
        const auto res = fbm_covariance_check(1.0, 10, h, 100000, 2024);
        CHECK(res.size() == 210);
        double worst = 0.0;
        for (const auto& r : res) worst = std::max(worst, std::abs(r.z_score()));
        CAPTURE(h, worst);
        CHECK(worst < 5.0);
    }
}

TEST_CASE("simulated paths", "[path_engine]") {
    const MarketSetup mkt{10.0, 10.0, 1.0 / 252, -0.3};
    const TimeGrid g(mkt.maturity, 50);

    SECTION("constant vol path") {
        const auto p = simulate_paths(ConstantVol{0.3}, mkt, g, {1, 0}, false);
        for (double v : p.vol) CHECK(v == 0.3);
        CHECK(p.asset[0] == 10.0);
        CHECK(p.z.empty());
    }
    SECTION("Bergomi without vol-of-vol is flat") {
        const auto p = simulate_paths(FractionalBergomi{0.25, 0.0, 0.3}, mkt, g, {1, 0}, false);
        for (double v : p.vol) CHECK_THAT(v, WithinRel(0.25, 1e-15));
        CHECK(p.z.size() == 51);
    }
    SECTION("vol[0] equals the spot vol for every model") {
        const ModelSpec models[] = {ConstantVol{0.3}, Sabr{0.5, 0.5}, FractionalBergomi{0.3, 0.5, 0.4},
                                    cev_local_vol(0.3, 0.5)};
        for (const auto& m : models) {
            const auto p = simulate_paths(m, mkt, g, {5, 1}, false);
            CHECK_THAT(p.vol[0], WithinRel(spot_vol(m, mkt), 1e-15));
            for (double s : p.asset) CHECK(s > 0.0);
            for (double v : p.vol) CHECK(v > 0.0);
        }
    }
    SECTION("determinism") {
        const auto a = simulate_paths(FractionalBergomi{0.3, 0.5, 0.4}, mkt, g, {9, 2}, false);
        const auto b = simulate_paths(FractionalBergomi{0.3, 0.5, 0.4}, mkt, g, {9, 2}, false);
        CHECK(a.asset == b.asset);
        CHECK(a.vol == b.vol);
        CHECK(a.z == b.z);
    }
    SECTION("antithetic companion mirrors W under constant vol") {
        const PathSimulator sim(ConstantVol{0.3}, mkt, g);
        std::vector<double> draws(sim.draws_per_path());
        NormalStream(GaussianDriver{3, 0}).fill(draws);
        PathBundle base, anti;
        sim.simulate(draws, false, base);
        sim.simulate(draws, true, anti);
        for (int i = 0; i <= 50; ++i) CHECK(anti.w[i] == -base.w[i]);
        const double mean_log =
            0.5 * (std::log(base.asset.back() / 10.0) + std::log(anti.asset.back() / 10.0));
        CHECK_THAT(mean_log, WithinAbs(-0.5 * 0.09 * mkt.maturity, 1e-15));
    }
    SECTION("non-finite volatility is reported with its node") {
        LocalVol bad{[](double s) { return s > 10.0 ? std::nan("") : 0.3; }, [](double) { return 0.0; }, "bad"};
        PathSimulator sim(bad, mkt, g);
        bool thrown = false;
        for (std::uint64_t seed = 0; seed < 20 && !thrown; ++seed) {
            try {
                sim.simulate(GaussianDriver{seed, 0}, false);
            } catch (const NumericalError& e) {
                thrown = std::string(e.what()).find("node") != std::string::npos;
            }
        }
        CHECK(thrown);
    }
}

TEST_CASE("Bergomi variance is a martingale in sigma^2", "[path_engine][slow]") {
    const MarketSetup mkt{10.0, 10.0, 1.0 / 252, -0.3};
    const TimeGrid g(mkt.maturity, 50);
    const PathSimulator sim(FractionalBergomi{0.3, 0.5, 0.4}, mkt, g);
    NormalStream rng({11, 0});
    std::vector<double> draws(sim.draws_per_path());
    PathBundle p;
    const int n = 100000;
    double sum = 0.0, sum_sq = 0.0;
    for (int i = 0; i < n; ++i) {
        rng.fill(draws);
        sim.simulate(draws, false, p);
        const double v2 = p.vol.back() * p.vol.back();
        sum += v2;
        sum_sq += v2 * v2;
    }
    const double mean = sum / n;
    const double se = std::sqrt((sum_sq / n - mean * mean) / (n - 1));
    CHECK(std::abs(mean - 0.09) < 3 * se);
}

TEST_CASE("averages", "[path_engine]") {
    const std::vector<double> flat(11, 4.5);
    const auto a = averages(flat);
    CHECK(a.arithmetic == 4.5);
    CHECK_THAT(a.geometric, WithinRel(4.5, 1e-15));

    const std::vector<double> two{1.0, std::exp(2.0)};
    const auto b = averages(two);
    CHECK_THAT(b.arithmetic, WithinRel(4.194528049465325, 1e-14));
    CHECK_THAT(b.geometric, WithinRel(std::numbers::e, 1e-14));

    const MarketSetup mkt{10.0, 10.0, 0.5, -0.5};
    const PathSimulator sim(Sabr{0.8, 1.2}, mkt, TimeGrid(0.5, 20));
    for (std::uint64_t s = 0; s < 200; ++s) {
        const auto avg = averages(sim.simulate({s, 0}, false));
        CHECK(avg.geometric <= avg.arithmetic * (1 + 1e-15));
    }
}

TEST_CASE("forward diagnostics", "[path_engine]") {
    const MarketSetup mkt{10.0, 10.0, 0.1, -0.6};
    const TimeGrid g(mkt.maturity, 25);
    const ModelSpec models[] = {ConstantVol{0.3}, Sabr{0.5, 1.0}, FractionalBergomi{0.3, 1.0, 0.2},
                                cev_local_vol(0.3, 0.5)};
    for (const auto& m : models) {
        const PathSimulator sim(m, mkt, g);
        for (std::uint64_t s = 0; s < 50; ++s) {
            const auto p = sim.simulate({s, 0}, s % 2 == 1);
            const auto fs = forward_diagnostics(p);
            CHECK(fs.m_path.front() == mkt.s0);
            CHECK(fs.m_path.back() == averages(p).arithmetic);
            CHECK(fs.a_t == averages(p).arithmetic);
            CHECK(fs.phi_path.front() == p.vol.front());
            for (std::size_t i = 0; i < p.vol.size(); ++i) CHECK(fs.phi_path[i] <= p.vol[i] * (1 + 1e-14));
        }
    }
}

TEST_CASE("v0 tends to sigma / sqrt(3) at short maturity", "[path_engine]") {
    const MarketSetup mkt{10.0, 10.0, 1e-4, 0.0};
    const PathSimulator sim(ConstantVol{0.3}, mkt, TimeGrid(1e-4, 200));
    double sum = 0.0;
    const int n = 2000;
    for (int i = 0; i < n; ++i) sum += forward_diagnostics(sim.simulate({17, static_cast<std::uint64_t>(i)}, false)).v0;
    CHECK_THAT(sum / n, WithinAbs(0.3 / std::sqrt(3.0), 1e-3));
}

TEST_CASE("S_T and A_T are martingales from s0", "[path_engine][slow]") {
    const MarketSetup mkt{10.0, 10.0, 1.0 / 252, -0.3};
    McConfig cfg;
    cfg.n_paths = 100000;
    cfg.seed = 99;
    const ModelSpec models[] = {ConstantVol{0.3}, Sabr{0.5, 0.5}, FractionalBergomi{0.3, 0.5, 0.4},
                                cev_local_vol(0.3, 0.5)};
    for (const auto& m : models) {
        const auto r = estimate_path_means(m, mkt, cfg);
        CAPTURE(model_name(m), r.terminal.mean, r.terminal.std_error, r.average.mean, r.average.std_error);
        CHECK(std::abs(r.terminal.mean - 10.0) < 3 * r.terminal.std_error);
        CHECK(std::abs(r.average.mean - 10.0) < 3 * r.average.std_error);
    }
}
