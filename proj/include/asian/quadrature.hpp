#pragma once

#include <vector>

namespace asian::quadrature {

struct Rule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Gauss-Jacobi rule on [-1, 1] for the weight (1 - x)^a (1 + x)^b, a, b > -1,
/// built by Golub-Welsch from the monic three-term recurrence.
Rule gauss_jacobi(int n, double a, double b);

inline Rule gauss_legendre(int n) { return gauss_jacobi(n, 0.0, 0.0); }

}  // namespace asian::quadrature
