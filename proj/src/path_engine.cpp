#include "asian/path_engine.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <numeric>
#include <sstream>

#include "asian/errors.hpp"
#include "asian/quadrature.hpp"

namespace asian {

namespace {

constexpr int kCovarianceNodes = 64;

std::seed_seq make_seed(GaussianDriver d) {
    return std::seed_seq{static_cast<std::uint32_t>(d.seed), static_cast<std::uint32_t>(d.seed >> 32),
                         static_cast<std::uint32_t>(d.stream), static_cast<std::uint32_t>(d.stream >> 32)};
}

std::mt19937_64 make_engine(GaussianDriver d) {
    auto seq = make_seed(d);
    return std::mt19937_64(seq);
}

struct CovarianceRules {
    quadrature::Rule jacobi;    // weight (1 - x)^a
    quadrature::Rule legendre;
};

CovarianceRules covariance_rules(double a) {
    return {quadrature::gauss_jacobi(kCovarianceNodes, a, 0.0), quadrature::gauss_legendre(24)};
}

// int_0^s (t-u)^a (s-u)^a du for s < t. In v = s - u the integrand is
// (v + e)^a v^a with e = t - s: the v^a singularity goes to the Jacobi weight
// on [0, min(e, s)], the rest is split geometrically so the near singularity
// at v = -e stays well separated from each piece.
double rl_offdiag(double t, double s, double a, const CovarianceRules& rules) {
    const double e = t - s;
    double b = std::min(e, s);
    double acc = 0.0;
    for (std::size_t k = 0; k < rules.jacobi.nodes.size(); ++k) {
        const double v = 0.5 * b * (1.0 - rules.jacobi.nodes[k]);
        acc += rules.jacobi.weights[k] * std::pow(v + e, a);
    }
    double total = std::pow(0.5 * b, a + 1.0) * acc;
    while (b < s) {
        const double hi = std::min(4.0 * b, s);
        const double mid = 0.5 * (hi + b), half = 0.5 * (hi - b);
        acc = 0.0;
        for (std::size_t k = 0; k < rules.legendre.nodes.size(); ++k) {
            const double v = mid + half * rules.legendre.nodes[k];
            acc += rules.legendre.weights[k] * std::pow(v * (v + e), a);
        }
        total += half * acc;
        b = hi;
    }
    return total;
}

void check_finite(double v, int node, const char* what) {
    if (!std::isfinite(v) || v <= 0.0) {
        std::ostringstream os;
        os << "path_engine: non-finite or non-positive " << what << " at node " << node << " (" << v << ")";
        throw NumericalError(os.str());
    }
}

}  // namespace

TimeGrid::TimeGrid(double maturity, int steps) : maturity_(maturity), steps_(steps) {
    if (!(maturity > 0.0) || !std::isfinite(maturity)) throw ConfigError("grid: maturity must be > 0");
    if (steps < 1) throw ConfigError("grid: steps must be >= 1");
}

std::vector<double> TimeGrid::nodes() const {
    std::vector<double> t(steps_ + 1);
    for (int i = 0; i <= steps_; ++i) t[i] = node(i);
    return t;
}

NormalStream::NormalStream(GaussianDriver driver) : engine_(make_engine(driver)) {}

void NormalStream::fill(std::span<double> out) {
    for (auto& x : out) x = dist_(engine_);
}

double rl_variance(double t, double hurst) { return std::pow(t, 2.0 * hurst) / (2.0 * hurst); }

double rl_covariance(double t, double s, double hurst) {
    if (t == s) return rl_variance(t, hurst);
    if (t < s) std::swap(t, s);
    if (s <= 0.0) return 0.0;
    const double a = hurst - 0.5;
    return rl_offdiag(t, s, a, covariance_rules(a));
}

double rl_cross_covariance(double t, double s, double hurst) {
    const double lo = std::min(s, t);
    const double p = hurst + 0.5;
    return (std::pow(t, p) - std::pow(t - lo, p)) / p;
}

Eigen::MatrixXd joint_covariance(const TimeGrid& grid, double hurst) {
    if (!(hurst > 0.0 && hurst < 1.0)) throw ConfigError("joint_covariance: hurst must lie in (0, 1)");
    const int m = grid.steps();
    const double a = hurst - 0.5;
    const auto rules = covariance_rules(a);
    Eigen::MatrixXd cov(2 * m, 2 * m);
    for (int i = 0; i < m; ++i) {
        const double ti = grid.node(i + 1);
        for (int j = 0; j < m; ++j) {
            const double tj = grid.node(j + 1);
            cov(i, j) = std::min(ti, tj);
            cov(m + i, j) = rl_cross_covariance(ti, tj, hurst);
            cov(j, m + i) = cov(m + i, j);
        }
        for (int j = 0; j <= i; ++j) {
            const double tj = grid.node(j + 1);
            const double c = (i == j) ? rl_variance(ti, hurst) : rl_offdiag(ti, tj, a, rules);
            cov(m + i, m + j) = c;
            cov(m + j, m + i) = c;
        }
    }
    return cov;
}

JointGaussianSampler::JointGaussianSampler(const TimeGrid& grid, double hurst)
    : covariance_(joint_covariance(grid, hurst)) {
    const int n = static_cast<int>(covariance_.rows());
    Eigen::MatrixXd jittered = covariance_;
    jittered.diagonal().array() += 1e-12 * covariance_.trace() / n;
    Eigen::LLT<Eigen::MatrixXd> llt(jittered);
    if (llt.info() != Eigen::Success) {
        std::ostringstream os;
        os << "fBm covariance not positive definite after jitter (T=" << grid.maturity() << ", m=" << grid.steps()
           << ", H=" << hurst << ")";
        throw NumericalError(os.str());
    }
    factor_ = llt.matrixL();
}

void JointGaussianSampler::sample(std::span<const double> normals, bool negate, std::span<double> w_prime,
                                  std::span<double> z) const {
    const int n = dimension();
    const int m = n / 2;
    const double sign = negate ? -1.0 : 1.0;
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int j = 0; j <= i; ++j) acc += factor_(i, j) * normals[j];
        if (i < m)
            w_prime[i] = sign * acc;
        else
            z[i - m] = sign * acc;
    }
}

std::pair<std::vector<double>, std::vector<double>> sample_joint_gaussian(const TimeGrid& grid, double hurst,
                                                                          GaussianDriver driver) {
    JointGaussianSampler sampler(grid, hurst);
    std::vector<double> normals(sampler.dimension());
    NormalStream(driver).fill(normals);
    std::vector<double> w(grid.steps()), z(grid.steps());
    sampler.sample(normals, false, w, z);
    return {std::move(w), std::move(z)};
}

PathSimulator::PathSimulator(ModelSpec model, MarketSetup market, TimeGrid grid)
    : model_(std::move(model)), market_(market), grid_(grid) {
    validate(model_, market_);
    if (const auto* fb = std::get_if<FractionalBergomi>(&model_)) fbm_.emplace(grid_, fb->hurst);
}

std::size_t PathSimulator::draws_per_path() const {
    const std::size_t m = static_cast<std::size_t>(grid_.steps());
    return fbm_ ? 3 * m : 2 * m;
}

void PathSimulator::simulate(std::span<const double> normals, bool antithetic, PathBundle& out) const {
    const int m = grid_.steps();
    const double dt = grid_.dt();
    const double sqdt = std::sqrt(dt);
    const double sign = antithetic ? -1.0 : 1.0;
    const double rho = market_.rho;
    const double rho_bar = std::sqrt(std::max(0.0, 1.0 - rho * rho));

    out.grid = grid_;
    out.antithetic = antithetic;
    out.w_prime.assign(m + 1, 0.0);
    out.w.assign(m + 1, 0.0);
    out.b.assign(m, 0.0);
    out.vol.assign(m + 1, 0.0);
    out.asset.assign(m + 1, 0.0);
    out.z.clear();

    std::span<const double> b_draws;
    if (fbm_) {
        out.z.assign(m + 1, 0.0);
        fbm_->sample(normals.subspan(0, 2 * m), antithetic, std::span(out.w_prime).subspan(1),
                     std::span(out.z).subspan(1));
        b_draws = normals.subspan(2 * m, m);
    } else {
        for (int i = 0; i < m; ++i) out.w_prime[i + 1] = out.w_prime[i] + sign * sqdt * normals[i];
        b_draws = normals.subspan(m, m);
    }
    for (int i = 0; i < m; ++i) {
        out.b[i] = sign * sqdt * b_draws[i];
        out.w[i + 1] = out.w[i] + rho * (out.w_prime[i + 1] - out.w_prime[i]) + rho_bar * out.b[i];
    }

    out.asset[0] = market_.s0;
    const auto t = [&](int i) { return grid_.node(i); };
    std::visit(
        [&](const auto& mdl) {
            using M = std::decay_t<decltype(mdl)>;
            for (int i = 0; i <= m; ++i) {
                double v;
                if constexpr (std::is_same_v<M, ConstantVol>) {
                    v = mdl.sigma;
                } else if constexpr (std::is_same_v<M, Sabr>) {
                    v = mdl.sigma0 * std::exp(mdl.alpha * out.w_prime[i] - 0.5 * mdl.alpha * mdl.alpha * t(i));
                } else if constexpr (std::is_same_v<M, FractionalBergomi>) {
                    const double log_var = mdl.vov * std::sqrt(2.0 * mdl.hurst) * out.z[i] -
                                           0.5 * mdl.vov * mdl.vov * std::pow(t(i), 2.0 * mdl.hurst);
                    v = mdl.sigma0 * std::exp(0.5 * log_var);
                } else {
                    v = mdl.sigma(out.asset[i]);
                }
                if (!std::isfinite(v) || v < 0.0) check_finite(v, i, "volatility");
                out.vol[i] = v;
                if (i == m) break;
                const double dw = out.w[i + 1] - out.w[i];
                const double next = out.asset[i] * std::exp(v * dw - 0.5 * v * v * dt);
                check_finite(next, i + 1, "asset");
                out.asset[i + 1] = next;
            }
        },
        model_);
}

PathBundle PathSimulator::simulate(GaussianDriver driver, bool antithetic) const {
    std::vector<double> normals(draws_per_path());
    NormalStream(driver).fill(normals);
    PathBundle out;
    simulate(normals, antithetic, out);
    return out;
}

PathBundle simulate_paths(const ModelSpec& model, const MarketSetup& market, const TimeGrid& grid,
                          GaussianDriver driver, bool antithetic) {
    return PathSimulator(model, market, grid).simulate(driver, antithetic);
}

Averages averages(std::span<const double> asset) {
    double sum = 0.0;
    double log_sum = 0.0;
    for (double s : asset) {
        sum += s;
        log_sum += std::log(s);
    }
    const double n = static_cast<double>(asset.size());
    return {sum / n, std::exp(log_sum / n)};
}

// M_{t_i} is the conditional expectation of the (m+1)-point average given the
// path up to t_i; this keeps M_T equal to the monitored average and
// T M_{t_i} >= S_{t_i} (T - t_i), hence phi <= sigma node by node.
ForwardState forward_diagnostics(const PathBundle& bundle) {
    const int m = bundle.grid.steps();
    const double T = bundle.grid.maturity();
    const double dt = bundle.grid.dt();
    ForwardState fs;
    fs.m_path.resize(m + 1);
    fs.phi_path.resize(m + 1);
    double past = 0.0;
    double phi2 = 0.0;
    for (int i = 0; i <= m; ++i) {
        const double s = bundle.asset[i];
        fs.m_path[i] = (i == 0) ? s : (past + (m + 1 - i) * s) / (m + 1);
        const double remaining = T - bundle.grid.node(i);
        fs.phi_path[i] = (i == 0) ? bundle.vol[0] : bundle.vol[i] * s * remaining / (T * fs.m_path[i]);
        if (i < m) phi2 += fs.phi_path[i] * fs.phi_path[i] * dt;
        past += s;
    }
    fs.a_t = averages(bundle).arithmetic;
    fs.m_path[m] = fs.a_t;
    fs.v0 = std::sqrt(phi2 / T);
    return fs;
}

}  // namespace asian
