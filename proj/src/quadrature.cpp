#include "asian/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "asian/errors.hpp"

namespace asian::quadrature {

Rule gauss_jacobi(int n, double a, double b) {
    if (n < 1) throw ConfigError("gauss_jacobi: need at least one node");
    if (!(a > -1.0) || !(b > -1.0)) throw ConfigError("gauss_jacobi: exponents must exceed -1");

    const double ab = a + b;
    Eigen::VectorXd diag(n);
    Eigen::VectorXd off(n > 1 ? n - 1 : 0);
    for (int k = 0; k < n; ++k) {
        const double s = 2.0 * k + ab;
        diag(k) = (k == 0) ? (b - a) / (ab + 2.0) : (b * b - a * a) / (s * (s + 2.0));
    }
    for (int k = 1; k < n; ++k) {
        const double s = 2.0 * k + ab;
        double beta;
        if (k == 1) {
            // (1 + a + b) cancels; keeps a + b = -1 finite
            beta = 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
        } else {
            beta = 4.0 * k * (k + a) * (k + b) * (k + ab) / (s * s * (s + 1.0) * (s - 1.0));
        }
        off(k - 1) = std::sqrt(beta);
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success) throw NumericalError("gauss_jacobi: eigen solve failed");

    const double mu0 = std::exp((ab + 1.0) * std::log(2.0) + std::lgamma(a + 1.0) + std::lgamma(b + 1.0) -
                                std::lgamma(ab + 2.0));
    Rule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int k = 0; k < n; ++k) {
        rule.nodes[k] = solver.eigenvalues()(k);
        const double v = solver.eigenvectors()(0, k);
        rule.weights[k] = mu0 * v * v;
    }
    return rule;
}

}  // namespace asian::quadrature
