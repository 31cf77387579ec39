#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "asian/analytic_core.hpp"
#include "asian/market_models.hpp"

namespace asian {

enum class Estimator { plain, antithetic, control_variate, cv_antithetic };

std::string to_string(Estimator e);
Estimator parse_estimator(const std::string& name);

struct McConfig {
    std::size_t n_paths = 200000;
    int steps = 50;
    std::uint64_t seed = 42;
    Estimator estimator = Estimator::plain;
    GeometricMode cv_mode = GeometricMode::discrete;
    // Samples per substream. Results are reproducible for a fixed batch size
    // whatever the thread count.
    std::size_t batch_size = 4096;
    unsigned threads = 0;  // 0: hardware concurrency

    void validate() const;
};

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::size_t n_effective = 0;
    double cv_coefficient = 0.0;
    bool control_applied = false;
};

McEstimate make_estimate(double mean, double std_error, std::size_t n_effective);

struct CvFit {
    double coefficient = 0.0;
    bool degenerate = false;  // zero control variance: estimate falls back to plain
};

/// Variance-minimising control coefficient Cov(payoff, control) / Var(control).
/// The reference only shifts the control and does not change the ratio.
CvFit cv_coefficient(std::span<const double> payoffs, std::span<const double> controls, double reference);

/// Throws ConfigError for estimator/model pairs without a valid control.
void check_estimator(const ModelSpec& model, Estimator estimator);

/// Prices of several strikes on one set of paths, with the covariance of the
/// estimated means (common random numbers).
struct StrikeStrip {
    std::vector<double> strikes;
    std::vector<McEstimate> estimates;
    Eigen::MatrixXd covariance;
};

/// Arithmetic Asian calls E(A_T - K)_+ for each strike (K >= 0; K = 0 gives E[A_T]).
StrikeStrip price_asian_strip(const ModelSpec& model, const MarketSetup& market, std::span<const double> strikes,
                              const McConfig& cfg);

McEstimate price_asian(const ModelSpec& model, const MarketSetup& market, const McConfig& cfg);

struct PathMeans {
    McEstimate terminal;  // S_T
    McEstimate average;   // A_T
};

/// Sample means of S_T and A_T under the plain estimator (martingale checks).
PathMeans estimate_path_means(const ModelSpec& model, const MarketSetup& market, const McConfig& cfg);

}  // namespace asian
