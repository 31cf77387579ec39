#include <catch_amalgamated.hpp>
#include <cmath>
#include <sstream>

#include "asian/config.hpp"
#include "asian/csv.hpp"
#include "asian/errors.hpp"
#include "asian/iv_lab.hpp"

using namespace asian;
using namespace asian::config;

TEST_CASE("flat TOML", "[config]") {
    std::istringstream in(R"(# level sweep
kind = "level_sweep"
model = 'const'   # trailing comment
sigma0_grid = [0.1, 0.2, 0.3]
paths = 2e5
maturity = 0.003968253968
verbose = true
)");
    const auto cfg = parse_toml(in);
    CHECK(cfg.text("kind", "") == "level_sweep");
    CHECK(cfg.text("model", "") == "const");
    CHECK(cfg.numbers("sigma0_grid", {}) == std::vector<double>{0.1, 0.2, 0.3});
    CHECK(cfg.number("paths", 0) == 200000.0);
    CHECK(cfg.number("missing", 1.5) == 1.5);
    CHECK(std::get<bool>(cfg.entries().at("verbose")));
}

TEST_CASE("TOML errors", "[config]") {
    std::istringstream table("[mc]\npaths = 10\n");
    CHECK_THROWS_AS(parse_toml(table), ConfigError);
    std::istringstream broken("paths = \n");
    CHECK_THROWS_AS(parse_toml(broken), ConfigError);
    std::istringstream no_eq("paths 10\n");
    CHECK_THROWS_AS(parse_toml(no_eq), ConfigError);
}

TEST_CASE("flat JSON", "[config]") {
    std::istringstream in(R"({"kind": "fbm_check", "hurst_list": [0.4, 0.7], "steps": 10, "cev-nu": 0.3})");
    const auto cfg = parse_json(in);
    CHECK(cfg.text("kind", "") == "fbm_check");
    CHECK(cfg.numbers("hurst_list", {}) == std::vector<double>{0.4, 0.7});
    CHECK(cfg.number("cev_nu", 0) == 0.3);
    std::istringstream nested(R"({"mc": {"paths": 10}})");
    CHECK_THROWS_AS(parse_json(nested), ConfigError);
}

TEST_CASE("keys are normalised and overrides win", "[config]") {
    ConfigMap file, cli;
    file.set("Batch-Size", 1024.0);
    file.set("paths", 1000.0);
    cli.set("paths", std::string("5000"));
    file.merge_from(cli);
    CHECK(file.contains("batch_size"));
    CHECK(file.number("paths", 0) == 5000.0);
    CHECK(normalize_key("CV-Mode") == "cv_mode");
}

TEST_CASE("unknown keys are rejected", "[config]") {
    ConfigMap cfg;
    cfg.set("kind", std::string("level_sweep"));
    cfg.set("pathz", 10.0);
    CHECK_THROWS_AS(cfg.require_known(known_config_keys()), ConfigError);
    try {
        cfg.require_known(known_config_keys());
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("pathz") != std::string::npos);
    }
}

TEST_CASE("plans from config", "[config]") {
    ConfigMap cfg;
    cfg.set("kind", std::string("skew_vs_T"));
    cfg.set("model", std::string("fbergomi"));
    cfg.set("hurst", 0.4);
    cfg.set("maturities", std::vector<double>{0.001, 0.01});
    const auto plan = plan_from_config(cfg);
    CHECK(plan.kind == ExperimentKind::skew_vs_maturity);
    CHECK(std::get<FractionalBergomi>(plan.model).hurst == 0.4);
    CHECK(plan.mc.estimator == Estimator::cv_antithetic);
    CHECK(plan.maturities.size() == 2);

    ConfigMap bad;
    bad.set("model", std::string("heston"));
    CHECK_THROWS_AS(plan_from_config(bad), ConfigError);

    ConfigMap sabr;
    sabr.set("kind", std::string("proxy_error_table"));
    sabr.set("model", std::string("sabr"));
    sabr.set("rho_law", std::vector<double>{-0.5});
    CHECK_THROWS_AS(plan_from_config(sabr), ConfigError);
}

TEST_CASE("csv output", "[csv]") {
    std::ostringstream out;
    CsvWriter csv(out, {"model", "value", "count"});
    csv.row({std::string("cev(nu=0.3,beta=0.5)"), 1.0 / 3.0, 7LL});
    csv.row({std::string("say \"hi\""), std::nan(""), 0LL});
    CHECK(out.str() == "model,value,count\n\"cev(nu=0.3,beta=0.5)\",0.3333333333,7\n\"say \"\"hi\"\"\",nan,0\n");
    CHECK(csv.rows_written() == 2);
    CHECK_THROWS_AS(csv.row({1.0}), ConfigError);
    CHECK(format_number(-INFINITY) == "-inf");
    CHECK(format_number(1234567.891234) == "1234567.891");
}
