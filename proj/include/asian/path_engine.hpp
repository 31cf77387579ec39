#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "asian/market_models.hpp"

namespace asian {

/// Uniform grid t_i = i T / m, i = 0..m.
class TimeGrid {
public:
    TimeGrid(double maturity, int steps);

    double maturity() const { return maturity_; }
    int steps() const { return steps_; }
    double dt() const { return maturity_ / steps_; }
    double node(int i) const { return i == steps_ ? maturity_ : i * dt(); }
    std::vector<double> nodes() const;

private:
    double maturity_;
    int steps_;
};

/// Identifies an independent substream of standard normals.
struct GaussianDriver {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
};

class NormalStream {
public:
    explicit NormalStream(GaussianDriver driver);

    double operator()() { return dist_(engine_); }
    void fill(std::span<double> out);

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> dist_;
};

// Covariances of the Riemann-Liouville process Z_t = int_0^t (t-s)^{H-1/2} dW'_s.
double rl_variance(double t, double hurst);
double rl_covariance(double t, double s, double hurst);
/// Cov(Z_t, W'_s)
double rl_cross_covariance(double t, double s, double hurst);

/// Covariance of (W'_{t_1..t_m}, Z_{t_1..t_m}) in that order (2m x 2m).
Eigen::MatrixXd joint_covariance(const TimeGrid& grid, double hurst);

/// Exact sampler for (W', Z) on a grid through a dense Cholesky factor.
class JointGaussianSampler {
public:
    JointGaussianSampler(const TimeGrid& grid, double hurst);

    int dimension() const { return static_cast<int>(factor_.rows()); }
    const Eigen::MatrixXd& covariance() const { return covariance_; }

    /// Maps 2m standard normals to W' and Z at t_1..t_m.
    void sample(std::span<const double> normals, bool negate, std::span<double> w_prime,
                std::span<double> z) const;

private:
    Eigen::MatrixXd covariance_;
    Eigen::MatrixXd factor_;
};

/// W' and Z at t_1..t_m for one driver.
std::pair<std::vector<double>, std::vector<double>> sample_joint_gaussian(const TimeGrid& grid, double hurst,
                                                                          GaussianDriver driver);

struct PathBundle {
    TimeGrid grid{1.0, 1};
    std::vector<double> w_prime;  // W' at nodes
    std::vector<double> w;        // asset driver W = rho W' + sqrt(1 - rho^2) B at nodes
    std::vector<double> b;        // B increments, one per step
    std::vector<double> z;        // Z at nodes, Bergomi only
    std::vector<double> vol;
    std::vector<double> asset;
    bool antithetic = false;
};

/// Builds volatility and asset paths from a flat block of standard normals.
/// Holding the Cholesky factor makes repeated simulation on one grid cheap.
class PathSimulator {
public:
    PathSimulator(ModelSpec model, MarketSetup market, TimeGrid grid);

    std::size_t draws_per_path() const;
    const TimeGrid& grid() const { return grid_; }
    const MarketSetup& market() const { return market_; }

    /// The antithetic companion uses the same block with every draw negated.
    void simulate(std::span<const double> normals, bool antithetic, PathBundle& out) const;
    PathBundle simulate(GaussianDriver driver, bool antithetic) const;

private:
    ModelSpec model_;
    MarketSetup market_;
    TimeGrid grid_;
    std::optional<JointGaussianSampler> fbm_;
};

PathBundle simulate_paths(const ModelSpec& model, const MarketSetup& market, const TimeGrid& grid,
                          GaussianDriver driver, bool antithetic);

struct Averages {
    double arithmetic = 0.0;
    double geometric = 0.0;
};

/// (m+1)-point arithmetic and geometric means over t_0..t_m.
Averages averages(std::span<const double> asset);
inline Averages averages(const PathBundle& bundle) { return averages(bundle.asset); }

struct ForwardState {
    std::vector<double> m_path;
    std::vector<double> phi_path;
    double v0 = 0.0;
    double a_t = 0.0;
};

/// Forward of the monitored average, its volatility phi and the root-mean-square
/// future volatility v0.
ForwardState forward_diagnostics(const PathBundle& bundle);

}  // namespace asian
